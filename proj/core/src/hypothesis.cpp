#include "ckt/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "ckt/error.hpp"

namespace ckt {

std::size_t matrix_rank(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  return static_cast<std::size_t>(lu.rank());
}

ContrastMatrix::ContrastMatrix(Eigen::MatrixXd t) : t_(std::move(t)) {
  for (Eigen::Index r = 0; r < t_.rows(); ++r) {
    std::optional<std::size_t> plus, minus;
    for (Eigen::Index c = 0; c < t_.cols(); ++c) {
      const double v = t_(r, c);
      if (v == 1.0 && !plus) plus = static_cast<std::size_t>(c);
      else if (v == -1.0 && !minus) minus = static_cast<std::size_t>(c);
      else if (v != 0.0)
        throw Error(ErrorKind::invalid_input,
                    "contrast row " + std::to_string(r) + " is not one +1 and one -1");
    }
    if (!plus || !minus)
      throw Error(ErrorKind::invalid_input,
                  "contrast row " + std::to_string(r) + " is not one +1 and one -1");
    pairs_.emplace_back(*plus, *minus);
  }
  if (matrix_rank(t_) != static_cast<std::size_t>(t_.rows()))
    throw Error(ErrorKind::invalid_input, "contrast matrix does not have full row rank");
}

ContrastMatrix ContrastMatrix::default_contrast(std::size_t m) {
  if (m < 2) throw Error(ErrorKind::invalid_input, "at least 2 boxes required, got " + std::to_string(m));
  const auto q = static_cast<Eigen::Index>(m - 1);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(q, q + 1);
  t.col(0).setOnes();
  t.rightCols(q) = -Eigen::MatrixXd::Identity(q, q);
  return ContrastMatrix(std::move(t));
}

ContrastMatrix ContrastMatrix::extended(std::size_t m, std::size_t p) {
  if (p < 2) throw Error(ErrorKind::invalid_input, "at least 2 conditioned variables required");
  const Eigen::MatrixXd base = default_contrast(m).matrix();
  const auto P = static_cast<Eigen::Index>(pair_count(p));
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(P * base.rows(), P * base.cols());
  for (Eigen::Index b = 0; b < P; ++b)
    t.block(b * base.rows(), b * base.cols(), base.rows(), base.cols()) = base;
  return ContrastMatrix(std::move(t));
}

const char* to_string(Method m) {
  switch (m) {
    case Method::wald: return "wald";
    case Method::boot_inf_classical: return "boot_inf_classical";
    case Method::boot_l2_classical: return "boot_l2_classical";
    case Method::boot_inf_conditional: return "boot_inf_conditional";
    case Method::boot_l2_conditional: return "boot_l2_conditional";
  }
  return "unknown";
}

Method parse_method(const std::string& s) {
  for (auto m : all_methods())
    if (s == to_string(m)) return m;
  throw Error(ErrorKind::invalid_input, "unknown method '" + s + "'");
}

std::vector<Method> all_methods() {
  return {Method::wald, Method::boot_inf_classical, Method::boot_l2_classical,
          Method::boot_inf_conditional, Method::boot_l2_conditional};
}

double wald_quadratic_form(std::size_t n, const Eigen::VectorXd& tau, const Eigen::MatrixXd& delta,
                           const Eigen::MatrixXd& t, const WaldOptions& options) {
  if (t.cols() != tau.size() || delta.rows() != tau.size() || delta.cols() != tau.size())
    throw Error(ErrorKind::invalid_input, "contrast, tau and covariance dimensions differ");
  Eigen::MatrixXd s = t * delta * t.transpose();
  s = 0.5 * (s + s.transpose());
  if (options.ridge) {
    const double shift = options.ridge_epsilon * s.trace() / static_cast<double>(s.rows());
    s.diagonal().array() += shift;
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  const Eigen::VectorXd pivots = ldlt.vectorD();
  const double largest = pivots.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(largest > 0.0) ||
      pivots.minCoeff() <= options.pivot_ratio * largest)
    throw Error(ErrorKind::singular_matrix,
                "contrasted covariance is singular or not positive definite");
  const Eigen::VectorXd u = t * tau;
  const double value = static_cast<double>(n) * u.dot(ldlt.solve(u));
  if (!std::isfinite(value)) throw Error(ErrorKind::numerical, "non-finite Wald statistic");
  return value;
}

TestResult wald_statistic(const TauEstimates& tau, const CovarianceEstimate& cov,
                          const ContrastMatrix& contrast, const WaldOptions& options) {
  const Eigen::Map<const Eigen::VectorXd> w(tau.tau.data(), static_cast<Eigen::Index>(tau.tau.size()));
  TestResult r;
  r.method = Method::wald;
  r.statistic = wald_quadratic_form(tau.n, w, cov.delta, contrast.matrix(), options);
  r.df = contrast.rows();
  r.p_value = chisq_survival(r.statistic, static_cast<double>(*r.df));
  r.m = tau.m;
  r.p = tau.p;
  r.n = tau.n;
  return r;
}

double stat_inf(std::size_t n, const std::vector<double>& tau, const ContrastMatrix& contrast) {
  if (tau.size() != contrast.cols()) throw Error(ErrorKind::invalid_input, "contrast width mismatch");
  double best = 0.0;
  for (const auto& [plus, minus] : contrast.row_pairs())
    best = std::max(best, std::abs(tau[plus] - tau[minus]));
  return std::sqrt(static_cast<double>(n)) * best;
}

double stat_l2(std::size_t n, const std::vector<double>& tau, const ContrastMatrix& contrast) {
  if (tau.size() != contrast.cols()) throw Error(ErrorKind::invalid_input, "contrast width mismatch");
  double sum = 0.0;
  for (const auto& [plus, minus] : contrast.row_pairs()) {
    const double d = tau[plus] - tau[minus];
    sum += d * d;
  }
  return static_cast<double>(n) * sum;
}

double chisq_survival(double x, double df) {
  if (!(df > 0.0) || std::isnan(x) || x < 0.0)
    throw Error(ErrorKind::invalid_input, "chi-square survival needs x >= 0 and df > 0");
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double chisq_cdf(double x, double df) {
  if (!(df > 0.0) || std::isnan(x) || x < 0.0)
    throw Error(ErrorKind::invalid_input, "chi-square cdf needs x >= 0 and df > 0");
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(df / 2.0, x / 2.0);
}

double chisq_quantile(double prob, double df) {
  if (!(prob > 0.0 && prob < 1.0) || !(df > 0.0))
    throw Error(ErrorKind::invalid_input, "chi-square quantile needs 0 < prob < 1 and df > 0");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(df), prob);
}

}  // namespace ckt
