#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ckt/box.hpp"
#include "ckt/concordance.hpp"
#include "ckt/sample.hpp"

namespace ckt {

// Positions (a, b), a < b, among the conditioned columns (0-based).
struct PairIndex {
  std::size_t a = 0;
  std::size_t b = 1;
  bool operator==(const PairIndex&) const = default;
};

// (0,1), (0,2), ..., (0,p-1), (1,2), ..., (p-2,p-1).
std::vector<PairIndex> all_pairs(std::size_t p);
inline std::size_t pair_count(std::size_t p) { return p * (p - 1) / 2; }
std::size_t pair_position(PairIndex pair, std::size_t p);

enum class TauVariant { first, second, third, rescaled };

// Concordance kernel: (1{x1 < x2 in a and b} + 1{x2 < x1 in a and b}) / 2.
inline double concordance_kernel(double x1a, double x1b, double x2a, double x2b) {
  return ((x1a < x2a && x1b < x2b) ? 0.5 : 0.0) + ((x2a < x1a && x2b < x1b) ? 0.5 : 0.0);
}

// The four estimators from concordant/discordant counts on N box members,
// uniform weights 1/N.
struct TauFromCounts {
  double first, second, third, rescaled, s;
};
TauFromCounts tau_from_counts(PairCounts c, std::size_t members);

double tau_pair_box(const Sample& s, PairIndex pair, const Box& box,
                    TauVariant variant = TauVariant::rescaled,
                    std::optional<std::size_t> box_index = std::nullopt);

// Rescaled tau on an explicit row list (rows may repeat).
double tau_on_rows(const Sample& s, PairIndex pair, std::span<const std::size_t> rows);

struct TauEstimates {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t m = 0;
  std::vector<PairIndex> pairs;
  std::vector<double> tau;  // pair-major: tau[pair * m + k], rescaled
  std::vector<double> p_hat;
  std::vector<std::size_t> counts;
  std::vector<double> s_n;
  // Filled only on request; same layout as tau.
  std::vector<double> tau1, tau2, tau3;

  double at(std::size_t pair, std::size_t k) const { return tau[pair * m + k]; }
};

// All pairs by all boxes. Throws InsufficientSubsample naming the first box
// with fewer than 2 members.
TauEstimates tau_matrix(const Sample& s, const BoxFamily& family, bool with_variants = false,
                        unsigned threads = 1);
TauEstimates tau_matrix(const Sample& s, const Membership& mb, bool with_variants = false,
                        unsigned threads = 1);

// (1/(n(n-1))) sum_{i != j} 1{X_ia < X_ja, X_ib < X_jb, both rows in box}.
double d_hat(const Sample& s, PairIndex pair, const Box& box);

}  // namespace ckt
