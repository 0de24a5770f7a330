#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ckt/box.hpp"
#include "ckt/estimators.hpp"
#include "ckt/sample.hpp"

namespace ckt {

enum class CovariancePath { automatic, disjoint, general };

// Estimated limiting covariance of sqrt(n) (tau_hat - tau), indexed like
// TauEstimates::tau (pair * m + k).
struct CovarianceEstimate {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<PairIndex> pairs;
  bool disjoint_path = false;
  Eigen::MatrixXd delta;
  // Ingredients, kept for audit.
  Eigen::MatrixXd i_hat;             // same layout as delta
  std::vector<double> j_hat;         // [(pair * m + k) * m + l]
  std::vector<double> d_hat;         // [pair * m + k]
  std::vector<double> p_hat;         // [k]
  Eigen::MatrixXd p_overlap;         // m x m, p_hat_{k,l}

  double j(std::size_t pair, std::size_t k, std::size_t l) const {
    return j_hat[(pair * m + k) * m + l];
  }
};

// For each member of the box (in member order): twice the sum over box
// members of the concordance kernel with that row.
std::vector<std::int64_t> box_row_counts(const Sample& s, PairIndex pair,
                                         const std::vector<std::size_t>& rows);

// Triple-sum plug-in of the integral I_{ab,a'b',k,l}: x1 over box k, x2 over
// box l, x3 over their intersection, normalized by n^3 p_k p_l.
double i_hat(const Sample& s, PairIndex ab, PairIndex ab2, const Box& box_k, const Box& box_l);
double i_hat(const Sample& s, PairIndex ab, PairIndex ab2, const Box& box_k);

// (1/(n^2 p_k)) sum_{i in A_k, j in A_k and A_l} kernel(X_i, X_j).
double j_hat(const Sample& s, PairIndex ab, const Box& box_k, const Box& box_l);

// Disjoint families use the diagonal form; otherwise the full block formula.
// `tau` must come from tau_matrix on the same sample and family.
CovarianceEstimate delta_hat(const Sample& s, const BoxFamily& family, const TauEstimates& tau,
                             CovariancePath path = CovariancePath::automatic,
                             unsigned threads = 1);
CovarianceEstimate delta_hat(const Sample& s, const BoxFamily& family,
                             CovariancePath path = CovariancePath::automatic,
                             unsigned threads = 1);

}  // namespace ckt
