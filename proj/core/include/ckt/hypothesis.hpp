#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ckt/covariance.hpp"
#include "ckt/estimators.hpp"

namespace ckt {

// Rows with exactly one +1 and one -1; full row rank.
class ContrastMatrix {
 public:
  ContrastMatrix() = default;
  // Validates entries and rank.
  explicit ContrastMatrix(Eigen::MatrixXd t);

  // [1_{m-1} | -I_{m-1}]: box 0 against every other box.
  static ContrastMatrix default_contrast(std::size_t m);
  // Block diagonal with one default_contrast(m) per conditioned pair.
  static ContrastMatrix extended(std::size_t m, std::size_t p);

  const Eigen::MatrixXd& matrix() const { return t_; }
  std::size_t rows() const { return static_cast<std::size_t>(t_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(t_.cols()); }
  // (column of +1, column of -1) for each row.
  const std::vector<std::pair<std::size_t, std::size_t>>& row_pairs() const { return pairs_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

std::size_t matrix_rank(const Eigen::MatrixXd& a);

enum class Method {
  wald,
  boot_inf_classical,
  boot_l2_classical,
  boot_inf_conditional,
  boot_l2_conditional,
};

const char* to_string(Method m);
Method parse_method(const std::string& s);
std::vector<Method> all_methods();

struct TestResult {
  Method method = Method::wald;
  double statistic = 0.0;
  std::optional<std::size_t> df;
  double p_value = 1.0;
  std::size_t m = 0;
  std::size_t p = 0;
  std::size_t n = 0;
  std::optional<std::size_t> B;
  std::optional<std::uint64_t> seed;
};

struct WaldOptions {
  bool ridge = false;
  double ridge_epsilon = 1e-8;
  double pivot_ratio = 1e-12;
};

// n tau' T' (T Delta T')^{-1} T tau with chi-square(rank T) calibration.
TestResult wald_statistic(const TauEstimates& tau, const CovarianceEstimate& cov,
                          const ContrastMatrix& contrast, const WaldOptions& options = {});
// Lower-level form on raw vectors.
double wald_quadratic_form(std::size_t n, const Eigen::VectorXd& tau, const Eigen::MatrixXd& delta,
                           const Eigen::MatrixXd& t, const WaldOptions& options = {});

// |sqrt(n) T tau|_inf and n |T tau|_2^2.
double stat_inf(std::size_t n, const std::vector<double>& tau, const ContrastMatrix& contrast);
double stat_l2(std::size_t n, const std::vector<double>& tau, const ContrastMatrix& contrast);
inline double stat_inf(const TauEstimates& t, const ContrastMatrix& c) { return stat_inf(t.n, t.tau, c); }
inline double stat_l2(const TauEstimates& t, const ContrastMatrix& c) { return stat_l2(t.n, t.tau, c); }

// P(chi2_df > x).
double chisq_survival(double x, double df);
double chisq_cdf(double x, double df);
double chisq_quantile(double prob, double df);

}  // namespace ckt
