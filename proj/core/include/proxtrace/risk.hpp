#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "proxtrace/device_id.hpp"
#include "proxtrace/health.hpp"

namespace proxtrace {

/// Per-category weights w_1..w_K, category 1 the highest risk.
/// Every weight is strictly positive and the sequence is strictly descending.
class WeightConfig {
 public:
  /// Throws Error(validation) if the invariants do not hold or the list is empty.
  explicit WeightConfig(std::vector<double> weights);

  /// w_A = 0.7, w_B = 0.2, w_C = 0.09, w_D = 0.01.
  static WeightConfig defaults();

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](CategoryIndex k) const { return weights_.at(k); }
  double top() const noexcept { return weights_.front(); }
  double bottom() const noexcept { return weights_.back(); }
  std::span<const double> values() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

struct Observation {
  CategoryIndex category = 0;
  double distance_m = 0.0;
  DeviceId peer{};
};

/// Everything scanned within `radius_m` of the reference individual.
struct AreaObservation {
  double radius_m = 10.0;
  std::vector<Observation> observations;
};

struct RiskScore {
  double value = 0.0;
};

enum class RiskClass : std::uint8_t { A, B, C, D, E };

char letter(RiskClass c) noexcept;
/// "Very Low" .. "Very High".
std::string_view label(RiskClass c) noexcept;

/// Area risk score
///
///            sum_i w(cat_i) * d_i
///   A(r) = -----------------------   with D = mean distance,
///              N * w_1 * D
///
/// i.e. the weighted distance mass normalised by the mass the same scan would
/// have if every neighbour were in the top category. The result lies in
/// [w_K / w_1, 1]; it is exactly 1 when every observation is category 1.
///
/// Distances enter only through their mix: a farther category-1 neighbour
/// raises the score more than a nearer one when categories are mixed.
///
/// Throws Error(no_data) for an empty scan and Error(validation) for a
/// non-positive distance, a distance beyond the radius, or a category index
/// outside the weight vector.
RiskScore assess_area(const AreaObservation& area, const WeightConfig& weights);

/// Risk bands: A [0, 0.2], B (0.2, 0.4], C (0.4, 0.6], D (0.6, 0.8], E (0.8, 1].
/// Throws Error(out_of_range) outside [0, 1] (and for NaN).
RiskClass classify(RiskScore score);

}  // namespace proxtrace
