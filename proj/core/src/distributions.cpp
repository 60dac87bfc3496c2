#include "proxtrace/distributions.hpp"

#include <numeric>

#include "proxtrace/error.hpp"

namespace proxtrace {

std::uint64_t CategoryDistribution::total() const noexcept {
  return std::accumulate(cardinalities.begin(), cardinalities.end(), std::uint64_t{0});
}

DistributionEnumerator::DistributionEnumerator(std::uint32_t population, std::size_t categories)
    : population_(population) {
  if (categories == 0) throw Error(Errc::validation, "category count must be >= 1");
  current_.cardinalities.assign(categories, 0);
  current_.cardinalities[0] = population;
}

void DistributionEnumerator::advance() {
  if (done_) return;
  auto& x = current_.cardinalities;
  // Rightmost non-zero entry: decrement it and pour everything that is now
  // unassigned into the slot right after it, which is the lexicographically
  // largest completion of the shorter prefix.
  std::size_t i = x.size();
  while (i > 0 && x[i - 1] == 0) --i;
  if (i == 0) {
    done_ = true;
    return;
  }
  --i;
  --x[i];
  if (i + 1 < x.size()) {
    std::uint64_t prefix = 0;
    for (std::size_t j = 0; j <= i; ++j) prefix += x[j];
    x[i + 1] = static_cast<std::uint32_t>(population_ - prefix);
    for (std::size_t j = i + 2; j < x.size(); ++j) x[j] = 0;
  }
}

std::vector<CategoryDistribution> enumerate_distributions(std::uint32_t population,
                                                          std::size_t categories) {
  std::vector<CategoryDistribution> out;
  for (DistributionEnumerator e(population, categories); !e.done(); e.advance()) {
    out.push_back(e.current());
  }
  return out;
}

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t count_distributions(std::uint32_t population, std::size_t categories) {
  if (categories == 0) throw Error(Errc::validation, "category count must be >= 1");
  // C(N + K, K) = C(N + K, min(N, K)), built as a running product in which
  // every intermediate value is itself a binomial coefficient.
  const std::uint64_t n = population;
  const std::uint64_t k = categories;
  const std::uint64_t small = n < k ? n : k;
  const std::uint64_t large = n < k ? k : n;
  u128 result = 1;
  for (std::uint64_t i = 1; i <= small; ++i) {
    u128 product;
    if (__builtin_mul_overflow(result, static_cast<u128>(large) + i, &product)) {
      throw Error(Errc::out_of_range, "distribution count exceeds 64 bits");
    }
    result = product / i;
    if (result > UINT64_MAX) {
      throw Error(Errc::out_of_range, "distribution count exceeds 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

}  // namespace proxtrace
