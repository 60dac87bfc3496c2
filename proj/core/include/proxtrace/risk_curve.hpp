#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "proxtrace/distributions.hpp"
#include "proxtrace/risk.hpp"

namespace proxtrace {

/// How distances are assigned to the individuals of a synthetic scan.
struct Placement {
  enum class Kind { uniform, fixed };

  Kind kind = Kind::uniform;
  double radius_m = 10.0;
  /// Uniform placements draw from (min_distance_m, radius_m].
  double min_distance_m = 0.5;
  /// Distance used by Kind::fixed.
  double fixed_distance_m = 5.0;

  static Placement uniform(double radius_m = 10.0, double min_distance_m = 0.5) {
    return {Kind::uniform, radius_m, min_distance_m, 0.0};
  }
  static Placement fixed(double distance_m, double radius_m = 10.0) {
    return {Kind::fixed, radius_m, 0.0, distance_m};
  }
};

struct SamplingOptions {
  std::uint64_t seed = 0;
  /// Random placements averaged per distribution (ignored for fixed placement).
  std::size_t repetitions = 100;
  /// Worker threads; output does not depend on it.
  std::size_t threads = 1;
};

struct CurvePoint {
  std::size_t index = 0;  // 1-based
  CategoryDistribution distribution;
  /// Empty for the all-zero distribution, where the score is undefined.
  std::optional<double> mean_score;
};

struct SurfaceCell {
  std::uint32_t n_a = 0;
  std::uint32_t n_b = 0;
  std::optional<double> mean_score;
};

/// Mean A(r) for every distribution of at most `population` individuals over
/// `weights.size()` categories, in DistributionEnumerator order.
/// Each distribution draws from its own stream keyed by (seed, index).
std::vector<CurvePoint> risk_curve(std::uint32_t population, const WeightConfig& weights,
                                   const Placement& placement, const SamplingOptions& options);

/// Mean A(r) over the (n_A, n_B) grid with n_A + n_B <= n_max and no
/// individuals in the remaining categories. Cells are ordered by n_A, then n_B.
std::vector<SurfaceCell> risk_surface(std::uint32_t n_max, const WeightConfig& weights,
                                      const Placement& placement, const SamplingOptions& options);

/// Mean score of one distribution. `stream` selects the random stream.
std::optional<double> mean_score(const CategoryDistribution& dist, const WeightConfig& weights,
                                 const Placement& placement, std::uint64_t seed,
                                 std::uint64_t stream, std::size_t repetitions);

/// Columns: index,n_1..n_K (n_A..n_D when K = 4),mean_score,class.
/// Undefined scores are written as an empty field with class "-".
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve, std::size_t categories);
/// Columns: n_A,n_B,mean_score,class.
void write_surface_csv(std::ostream& out, std::span<const SurfaceCell> surface);

}  // namespace proxtrace
