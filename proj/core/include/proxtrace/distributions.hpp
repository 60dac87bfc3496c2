#pragma once

#include <cstdint>
#include <vector>

namespace proxtrace {

/// Cardinalities |C_1|..|C_K| of one split of a scanned population over K categories.
struct CategoryDistribution {
  std::vector<std::uint32_t> cardinalities;

  std::uint64_t total() const noexcept;
  friend bool operator==(const CategoryDistribution&, const CategoryDistribution&) = default;
};

/// Walks every vector (x_1..x_K) of non-negative integers with sum <= N in
/// lexicographically descending order: the first vector is (N, 0, .., 0) and
/// the last is all-zero.
///
///   DistributionEnumerator e(2, 2);
///   for (; !e.done(); e.advance()) use(e.current());
///   // (2,0) (1,1) (1,0) (0,2) (0,1) (0,0)
class DistributionEnumerator {
 public:
  /// Throws Error(validation) if k == 0.
  DistributionEnumerator(std::uint32_t population, std::size_t categories);

  bool done() const noexcept { return done_; }
  const CategoryDistribution& current() const noexcept { return current_; }
  void advance();

 private:
  std::uint32_t population_;
  CategoryDistribution current_;
  bool done_ = false;
};

/// All distributions of at most `population` individuals over `categories`
/// categories, in DistributionEnumerator order.
std::vector<CategoryDistribution> enumerate_distributions(std::uint32_t population,
                                                          std::size_t categories);

/// Closed form C(N + K, K). Throws Error(out_of_range) if the result does not
/// fit in 64 bits, Error(validation) if k == 0.
std::uint64_t count_distributions(std::uint32_t population, std::size_t categories);

}  // namespace proxtrace
