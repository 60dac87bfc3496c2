#include "proxtrace/risk.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "proxtrace/error.hpp"

namespace proxtrace {

WeightConfig::WeightConfig(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(Errc::validation, "weight list must not be empty");
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k])) {
      throw Error(Errc::validation, fmt::format("weight {} must be positive and finite", k + 1));
    }
    if (k > 0 && !(weights_[k] < weights_[k - 1])) {
      throw Error(Errc::validation,
                  fmt::format("weights must be strictly descending (w{} >= w{})", k + 1, k));
    }
  }
}

WeightConfig WeightConfig::defaults() { return WeightConfig({0.7, 0.2, 0.09, 0.01}); }

char letter(RiskClass c) noexcept { return static_cast<char>('A' + static_cast<int>(c)); }

std::string_view label(RiskClass c) noexcept {
  switch (c) {
    case RiskClass::A: return "Very Low";
    case RiskClass::B: return "Low";
    case RiskClass::C: return "Medium";
    case RiskClass::D: return "High";
    case RiskClass::E: return "Very High";
  }
  return "";
}

RiskScore assess_area(const AreaObservation& area, const WeightConfig& weights) {
  if (area.observations.empty()) {
    throw Error(Errc::no_data, "no observations: the area score is undefined");
  }
  // Distances are summed per category first, so an all-top-category scan
  // yields numerator == denominator bit for bit.
  std::vector<double> per_category(weights.size(), 0.0);
  double total = 0.0;
  for (const auto& obs : area.observations) {
    if (!(obs.distance_m > 0.0)) {
      throw Error(Errc::validation, "observation distance must be > 0");
    }
    if (obs.distance_m > area.radius_m) {
      throw Error(Errc::validation, fmt::format("observation distance {} m exceeds radius {} m",
                                                obs.distance_m, area.radius_m));
    }
    if (obs.category >= weights.size()) {
      throw Error(Errc::validation, fmt::format("category {} has no weight (K = {})",
                                                obs.category + 1, weights.size()));
    }
    per_category[obs.category] += obs.distance_m;
    total += obs.distance_m;
  }
  double numerator = 0.0;
  for (std::size_t k = 0; k < per_category.size(); ++k) {
    numerator += weights[k] * per_category[k];
  }
  // N * w_1 * mean(d) == w_1 * sum(d).
  const double value = numerator / (weights.top() * total);
  return RiskScore{std::min(value, 1.0)};
}

RiskClass classify(RiskScore score) {
  const double v = score.value;
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(Errc::out_of_range, fmt::format("risk score {} outside [0, 1]", v));
  }
  if (v <= 0.2) return RiskClass::A;
  if (v <= 0.4) return RiskClass::B;
  if (v <= 0.6) return RiskClass::C;
  if (v <= 0.8) return RiskClass::D;
  return RiskClass::E;
}

}  // namespace proxtrace
