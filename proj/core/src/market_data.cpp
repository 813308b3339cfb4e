#include "qbasket/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "qbasket/error.hpp"
#include "qbasket/numeric.hpp"

namespace qbasket {

namespace {

constexpr std::string_view kHeader = "date,ticker,adj_close";

bool parse_digits(std::string_view text, int& out) noexcept {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_price(std::string_view text, double& out) noexcept {
  if (text.empty()) return false;
  // from_chars accepts "nan"/"inf"; the contract only allows plain decimals.
  for (char c : text) {
    const bool ok = (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E';
    if (!ok) return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

struct DateLess {
  bool operator()(const Date& a, const Date& b) const noexcept {
    return std::chrono::sys_days{a} < std::chrono::sys_days{b};
  }
};

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + why);
}

}  // namespace

bool parse_iso_date(std::string_view text, Date& out) noexcept {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  int y = 0;
  int m = 0;
  int d = 0;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m) ||
      !parse_digits(text.substr(8, 2), d)) {
    return false;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return false;
  out = date;
  return true;
}

std::string format_iso_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

void validate_weights(std::span<const double> weights) {
  if (weights.empty()) throw Error(ErrorCode::InvalidWeights, "no weights given");
  CompensatedSum total;
  for (double w : weights) {
    if (!(w > 0.0) || w > 1.0) {
      throw Error(ErrorCode::InvalidWeights, "weight " + std::to_string(w) + " outside (0,1]");
    }
    total += w;
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidWeights,
                "weights sum to " + std::to_string(total.value()) + ", expected 1");
  }
}

std::vector<AssetSeries> parse_price_csv(std::string_view text, std::span<const std::string> tickers,
                                         std::span<const double> weights) {
  if (tickers.size() != weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(tickers.size()) + " tickers but " +
                                                  std::to_string(weights.size()) + " weights");
  }
  if (tickers.empty()) throw Error(ErrorCode::InvalidInput, "no tickers requested");
  {
    std::set<std::string> unique(tickers.begin(), tickers.end());
    if (unique.size() != tickers.size()) {
      throw Error(ErrorCode::InvalidInput, "duplicate ticker in request");
    }
  }
  validate_weights(weights);

  std::set<std::string> seen_tickers;
  std::unordered_map<std::string, std::map<Date, double, DateLess>> valid;
  std::set<std::pair<std::string, int>> seen_rows;

  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!header_seen) {
      if (line != kHeader) malformed(line_no, "header must be exactly '" + std::string(kHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::string_view fields[3];
    std::size_t start = 0;
    int count = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      if (count < 3) fields[count] = field;
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != 3) malformed(line_no, "expected 3 fields, found " + std::to_string(count));

    Date date;
    if (!parse_iso_date(fields[0], date)) malformed(line_no, "bad date '" + std::string(fields[0]) + "'");
    if (fields[1].empty()) malformed(line_no, "empty ticker");
    std::string ticker(fields[1]);

    const int day_index = std::chrono::sys_days{date}.time_since_epoch().count();
    if (!seen_rows.emplace(ticker, day_index).second) {
      malformed(line_no, "duplicate row for " + ticker + " on " + std::string(fields[0]));
    }
    seen_tickers.insert(ticker);

    double price = 0.0;
    if (!parse_price(fields[2], price) || !(price > 0.0)) continue;
    valid[ticker][date] = price;
  }
  if (!header_seen) malformed(1, "empty file");

  for (const auto& t : tickers) {
    if (!seen_tickers.contains(t)) throw Error(ErrorCode::MissingTicker, "ticker '" + t + "' not in data");
  }

  std::vector<Date> common;
  {
    const auto& first = valid[tickers[0]];
    for (const auto& [date, price] : first) {
      bool everywhere = true;
      for (std::size_t i = 1; i < tickers.size() && everywhere; ++i) {
        everywhere = valid[tickers[i]].contains(date);
      }
      if (everywhere) common.push_back(date);
    }
  }
  if (common.size() < 2) {
    throw Error(ErrorCode::EmptyIntersection,
                std::to_string(common.size()) + " shared dates across requested tickers (need >= 2)");
  }

  std::vector<AssetSeries> out;
  out.reserve(tickers.size());
  for (std::size_t i = 0; i < tickers.size(); ++i) {
    AssetSeries series;
    series.ticker = tickers[i];
    series.weight = weights[i];
    const auto& prices = valid[tickers[i]];
    series.prices.reserve(common.size());
    for (const Date& d : common) series.prices.push_back({d, tickers[i], prices.at(d)});
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<AssetSeries> load_price_csv(const std::filesystem::path& path, std::span<const std::string> tickers,
                                        std::span<const double> weights) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_price_csv(buf.str(), tickers, weights);
}

std::vector<double> compute_log_returns(const AssetSeries& series) {
  if (series.prices.size() < 2) {
    throw Error(ErrorCode::TooShort, series.ticker + " has " + std::to_string(series.prices.size()) + " prices");
  }
  std::vector<double> out;
  out.reserve(series.prices.size() - 1);
  for (std::size_t t = 1; t < series.prices.size(); ++t) {
    out.push_back(std::log(series.prices[t].adj_close / series.prices[t - 1].adj_close));
  }
  return out;
}

AssetStats estimate_asset_stats(const AssetSeries& series, double maturity_T, double drift_shift,
                                int trading_days) {
  if (!(maturity_T > 0.0)) throw Error(ErrorCode::InvalidInput, "maturity must be positive");
  if (trading_days <= 0) throw Error(ErrorCode::InvalidInput, "trading_days must be positive");
  const std::vector<double> returns = compute_log_returns(series);

  CompensatedSum sum;
  for (double r : returns) sum += r;
  const double n = static_cast<double>(returns.size());
  const double mean = sum.value() / n;

  double variance = 0.0;
  if (returns.size() > 1) {
    CompensatedSum sq;
    for (double r : returns) sq += (r - mean) * (r - mean);
    variance = sq.value() / (n - 1.0);
  }

  AssetStats stats;
  stats.mu_daily = mean;
  stats.sigma_daily = std::sqrt(variance);
  stats.mu_annual = mean * trading_days + drift_shift;
  stats.sigma_annual = stats.sigma_daily * std::sqrt(static_cast<double>(trading_days));
  stats.mu_T = stats.mu_annual * maturity_T;
  stats.sigma_T = stats.sigma_annual * std::sqrt(maturity_T);
  stats.s0 = series.prices.back().adj_close;
  stats.zero_volatility = stats.sigma_daily == 0.0;
  return stats;
}

double initial_basket_price(std::span<const AssetSeries> assets, BasketDate at) {
  CompensatedSum total;
  for (const auto& a : assets) {
    if (a.prices.empty()) throw Error(ErrorCode::TooShort, a.ticker + " has no prices");
    const auto& rec = at == BasketDate::First ? a.prices.front() : a.prices.back();
    total += a.weight * rec.adj_close;
  }
  return total.value();
}

}  // namespace qbasket
