#pragma once

#include <string>

#include "qbasket/distribution.hpp"
#include "qbasket/estimation.hpp"

namespace qbasket {

/// {"values": [...], "probs": [...]}
std::string to_json(const AssetGrid& grid);
std::string to_json(const BinnedBasketDistribution& dist);

/// {"a_hat": ..., "ci": [lo, hi], "oracle_queries": ..., "price_estimate": ...}
std::string to_json(const AmplitudeEstimate& est);

/// Reads the distribution format written above. Throws InvalidInput.
BinnedBasketDistribution binned_from_json(const std::string& text);

}  // namespace qbasket
