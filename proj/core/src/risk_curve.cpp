#include "proxtrace/risk_curve.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <ostream>
#include <thread>

#include "proxtrace/error.hpp"
#include "proxtrace/rng.hpp"

namespace proxtrace {

namespace {

constexpr std::uint64_t kCurveStream = 0xC0;
constexpr std::uint64_t kSurfaceStream = 0x5F;

void validate(const Placement& p) {
  if (!(p.radius_m > 0.0)) throw Error(Errc::validation, "placement radius must be > 0");
  if (p.kind == Placement::Kind::uniform) {
    if (!(p.min_distance_m >= 0.0 && p.min_distance_m < p.radius_m)) {
      throw Error(Errc::validation, "placement min distance must lie in [0, radius)");
    }
  } else if (!(p.fixed_distance_m > 0.0 && p.fixed_distance_m <= p.radius_m)) {
    throw Error(Errc::validation, "fixed placement distance must lie in (0, radius]");
  }
}

// Runs body(i) for i in [0, n) on up to `threads` workers, contiguous chunks.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body body) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
}

}  // namespace

std::optional<double> mean_score(const CategoryDistribution& dist, const WeightConfig& weights,
                                 const Placement& placement, std::uint64_t seed,
                                 std::uint64_t stream, std::size_t repetitions) {
  if (dist.cardinalities.size() > weights.size()) {
    throw Error(Errc::validation, "distribution has more categories than weights");
  }
  if (dist.total() == 0) return std::nullopt;

  AreaObservation area;
  area.radius_m = placement.radius_m;
  area.observations.reserve(dist.total());
  for (CategoryIndex k = 0; k < dist.cardinalities.size(); ++k) {
    for (std::uint32_t i = 0; i < dist.cardinalities[k]; ++i) {
      area.observations.push_back({k, placement.fixed_distance_m, {}});
    }
  }
  if (placement.kind == Placement::Kind::fixed) {
    return assess_area(area, weights).value;
  }

  if (repetitions == 0) throw Error(Errc::validation, "repetitions must be >= 1");
  Rng rng(hash_keys(seed, {stream}));
  const double span = placement.radius_m - placement.min_distance_m;
  double sum = 0.0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    for (auto& obs : area.observations) {
      // radius - u * span maps [0, 1) onto (min, radius].
      obs.distance_m = placement.radius_m - rng.uniform01() * span;
    }
    sum += assess_area(area, weights).value;
  }
  return sum / static_cast<double>(repetitions);
}

std::vector<CurvePoint> risk_curve(std::uint32_t population, const WeightConfig& weights,
                                   const Placement& placement, const SamplingOptions& options) {
  validate(placement);
  auto dists = enumerate_distributions(population, weights.size());
  std::vector<CurvePoint> curve(dists.size());
  parallel_for(dists.size(), options.threads, [&](std::size_t i) {
    curve[i].index = i + 1;
    curve[i].mean_score = mean_score(dists[i], weights, placement, options.seed,
                                     hash_keys(kCurveStream, {i}), options.repetitions);
    curve[i].distribution = std::move(dists[i]);
  });
  return curve;
}

std::vector<SurfaceCell> risk_surface(std::uint32_t n_max, const WeightConfig& weights,
                                      const Placement& placement, const SamplingOptions& options) {
  validate(placement);
  if (weights.size() < 2) throw Error(Errc::validation, "surface needs at least two categories");
  std::vector<SurfaceCell> cells;
  for (std::uint32_t a = 0; a <= n_max; ++a) {
    for (std::uint32_t b = 0; a + b <= n_max; ++b) cells.push_back({a, b, std::nullopt});
  }
  parallel_for(cells.size(), options.threads, [&](std::size_t i) {
    CategoryDistribution dist{{cells[i].n_a, cells[i].n_b}};
    cells[i].mean_score = mean_score(dist, weights, placement, options.seed,
                                     hash_keys(kSurfaceStream, {cells[i].n_a, cells[i].n_b}),
                                     options.repetitions);
  });
  return cells;
}

namespace {

void write_score(std::ostream& out, const std::optional<double>& score) {
  if (score) {
    fmt::print(out, "{:.9f},{}\n", *score, letter(classify(RiskScore{*score})));
  } else {
    out << ",-\n";
  }
}

}  // namespace

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve, std::size_t categories) {
  out << "index";
  for (std::size_t k = 0; k < categories; ++k) {
    if (categories <= 26) {
      fmt::print(out, ",n_{}", static_cast<char>('A' + k));
    } else {
      fmt::print(out, ",n_{}", k + 1);
    }
  }
  out << ",mean_score,class\n";
  for (const auto& p : curve) {
    out << p.index;
    for (auto c : p.distribution.cardinalities) out << ',' << c;
    out << ',';
    write_score(out, p.mean_score);
  }
}

void write_surface_csv(std::ostream& out, std::span<const SurfaceCell> surface) {
  out << "n_A,n_B,mean_score,class\n";
  for (const auto& c : surface) {
    fmt::print(out, "{},{},", c.n_a, c.n_b);
    write_score(out, c.mean_score);
  }
}

}  // namespace proxtrace
