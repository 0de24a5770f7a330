#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ckt {

struct PairCounts {
  std::int64_t concordant = 0;  // unordered pairs strictly increasing together
  std::int64_t discordant = 0;  // unordered pairs strictly moving apart
};

// O(N^2) enumeration; tied pairs count in neither total.
PairCounts count_pairs(std::span<const double> x, std::span<const double> y);

// Concordant minus discordant pairs in O(N log N) (Knight's merge-sort
// count). Equal to count_pairs(x, y) difference, ties included.
std::int64_t concordance_balance(std::span<const double> x, std::span<const double> y);
std::int64_t concordance_balance(std::span<const std::int32_t> x, std::span<const std::int32_t> y);

// Concordant and discordant counts in O(N log N). With ties the two totals are
// recovered from the balance plus the tie counts.
PairCounts fast_pair_counts(std::span<const double> x, std::span<const double> y);

// Kendall's tau without tie correction: 2 (C - D) / (N (N - 1)).
double kendall_tau_a(std::span<const double> x, std::span<const double> y);

// For every i: #{r : x_r < x_i, y_r < y_i} + #{r : x_r > x_i, y_r > y_i}.
// Twice the row sum of the concordance kernel. O(N log N).
std::vector<std::int64_t> concordance_row_counts(std::span<const double> x,
                                                 std::span<const double> y);

// Dense ranks 0..(distinct-1); equal values share a rank.
std::vector<std::int32_t> dense_ranks(std::span<const double> v);

}  // namespace ckt
