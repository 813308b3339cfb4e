#pragma once

#include <chrono>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qbasket {

using Date = std::chrono::year_month_day;

/// Parses a strict `YYYY-MM-DD` date; returns false on anything else.
bool parse_iso_date(std::string_view text, Date& out) noexcept;
std::string format_iso_date(const Date& date);

struct PriceRecord {
  Date date;
  std::string ticker;
  double adj_close = 0.0;
};

/// One ticker's date-aligned history and its basket weight.
struct AssetSeries {
  std::string ticker;
  double weight = 0.0;
  std::vector<PriceRecord> prices;  // strictly ascending dates
};

struct BasketSpec {
  std::vector<AssetSeries> assets;
  double maturity_T = 0.5;
  double strike_K = 0.0;
  double risk_free_r = 0.0;
  double drift_shift = 0.05;
};

struct AssetStats {
  double mu_daily = 0.0;
  double sigma_daily = 0.0;
  double mu_annual = 0.0;     // includes the drift shift
  double sigma_annual = 0.0;
  double mu_T = 0.0;
  double sigma_T = 0.0;
  double s0 = 0.0;            // last observed price
  bool zero_volatility = false;
};

inline constexpr int kTradingDaysPerYear = 252;

/// Loads a `date,ticker,adj_close` CSV and returns one series per requested
/// ticker restricted to the dates every ticker has. Rows whose price is not a
/// finite positive number are dropped before the intersection; structural
/// problems (field count, date syntax, duplicate rows) throw MalformedRow
/// with the offending line number.
std::vector<AssetSeries> load_price_csv(const std::filesystem::path& path,
                                        std::span<const std::string> tickers,
                                        std::span<const double> weights);

/// Same contract as load_price_csv, reading from an in-memory buffer.
std::vector<AssetSeries> parse_price_csv(std::string_view text,
                                         std::span<const std::string> tickers,
                                         std::span<const double> weights);

/// Throws InvalidWeights unless every weight is positive and the sum is 1
/// within 1e-9.
void validate_weights(std::span<const double> weights);

std::vector<double> compute_log_returns(const AssetSeries& series);

AssetStats estimate_asset_stats(const AssetSeries& series, double maturity_T,
                                double drift_shift = 0.05,
                                int trading_days = kTradingDaysPerYear);

enum class BasketDate { First, Last };

/// Weighted basket value on the first or last shared date.
double initial_basket_price(std::span<const AssetSeries> assets, BasketDate at);

}  // namespace qbasket
