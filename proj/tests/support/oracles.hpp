#pragma once

// Brute-force reference implementations. Deliberately naive: direct loops over
// the defining sums, no shared code with the library beyond Sample and Box.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ckt/box.hpp"
#include "ckt/estimators.hpp"
#include "ckt/sample.hpp"

namespace oracle {

// sign-sum Kendall tau-a over all unordered pairs: (C - D) / (N choose 2).
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// Unordered concordant / discordant counts by enumeration.
std::pair<long long, long long> pair_counts(const std::vector<double>& x, const std::vector<double>& y);

std::vector<std::size_t> scan_members(const ckt::Sample& s, const ckt::Box& box);

// (1/(n(n-1))) sum over ordered i != j of 1{X_i < X_j in both, i and j in box}.
double d_hat(const ckt::Sample& s, ckt::PairIndex ab, const ckt::Box& box);

// (1/(n^3 p_k p_l)) sum_{i1,i2,i3} pi_ab(X_i1, X_i3) pi_a'b'(X_i2, X_i3)
//   1{i1 in A_k, i2 in A_l, i3 in A_k and A_l}.
double i_hat(const ckt::Sample& s, ckt::PairIndex ab, ckt::PairIndex ab2, const ckt::Box& k,
             const ckt::Box& l);

// (1/(n^2 p_k)) sum_{i in A_k, j in A_k and A_l} pi_ab(X_i, X_j).
double j_hat(const ckt::Sample& s, ckt::PairIndex ab, const ckt::Box& k, const ckt::Box& l);

// Rank by Gaussian elimination with partial pivoting.
std::size_t rank(Eigen::MatrixXd a, double tol = 1e-9);

// P(chi2_df > x) by adaptive Simpson integration of the density on [0, x].
double chisq_survival(double x, double df);

}  // namespace oracle
