#include "qbasket/serialization.hpp"

#include <cmath>
#include "json.hpp"

#include "qbasket/error.hpp"

namespace qbasket {

namespace {

std::string distribution_json(const std::vector<double>& values, const std::vector<double>& probs) {
  nlohmann::json j;
  j["values"] = values;
  j["probs"] = probs;
  return j.dump();
}

}  // namespace

std::string to_json(const AssetGrid& grid) { return distribution_json(grid.values, grid.probs); }

std::string to_json(const BinnedBasketDistribution& dist) { return distribution_json(dist.values, dist.probs); }

std::string to_json(const AmplitudeEstimate& est) {
  nlohmann::json j;
  j["a_hat"] = est.a_hat;
  j["ci"] = {est.ci_low, est.ci_high};
  j["oracle_queries"] = est.oracle_queries;
  j["price_estimate"] = est.price_estimate;
  return j.dump();
}

BinnedBasketDistribution binned_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, e.what());
  }
  if (!j.is_object() || !j.contains("values") || !j.contains("probs")) {
    throw Error(ErrorCode::InvalidInput, "expected an object with values and probs");
  }
  BinnedBasketDistribution out;
  try {
    out.values = j.at("values").get<std::vector<double>>();
    out.probs = j.at("probs").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, e.what());
  }
  const std::size_t n = out.values.size();
  if (n == 0 || n != out.probs.size() || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::InvalidInput, "values and probs must share a power-of-two length");
  }
  out.nbq = static_cast<int>(std::log2(static_cast<double>(n)));
  return out;
}

}  // namespace qbasket
