#include "ckt/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "ckt/error.hpp"
#include "ckt/estimators.hpp"
#include "ckt/parallel.hpp"

namespace ckt {

double tau_from_rho(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw Error(ErrorKind::invalid_input, "rho must lie in [-1, 1]");
  return 2.0 / std::numbers::pi * std::asin(rho);
}

double rho_from_tau(double tau) {
  if (!(tau >= -1.0 && tau <= 1.0)) throw Error(ErrorKind::invalid_input, "tau must lie in [-1, 1]");
  return std::sin(std::numbers::pi * tau / 2.0);
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0))
    throw Error(ErrorKind::invalid_input, "normal quantile needs 0 < prob < 1");
  return boost::math::quantile(boost::math::normal_distribution<double>(), prob);
}

void sample_equicorr_gaussian(std::span<double> out, double rho, std::span<const double> mean,
                              Rng& rng) {
  const std::size_t p = mean.size();
  const double dp = static_cast<double>(p);
  if (p == 0 || out.size() < p) throw Error(ErrorKind::invalid_input, "bad dimension");
  if (!(rho < 1.0) || (p > 1 && !(rho > -1.0 / (dp - 1.0))))
    throw Error(ErrorKind::invalid_input, "equicorrelation " + std::to_string(rho) +
                                              " is not positive definite in dimension " +
                                              std::to_string(p));
  // X = a Z + b (1'Z) 1 has unit variances and correlation rho.
  const double a = std::sqrt(1.0 - rho);
  const double b = (-a + std::sqrt(1.0 + (dp - 1.0) * rho)) / dp;
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    out[i] = rng.normal();
    total += out[i];
  }
  for (std::size_t i = 0; i < p; ++i) out[i] = mean[i] + a * out[i] + b * total;
}

std::pair<double, double> sample_clayton_pair(double theta, Rng& rng) {
  if (!(theta > 0.0)) throw Error(ErrorKind::invalid_input, "Clayton theta must be positive");
  const double u = rng.uniform_open();
  const double w = rng.uniform_open();
  const double v = std::pow(std::pow(u, -theta) * (std::pow(w, -theta / (1.0 + theta)) - 1.0) + 1.0,
                            -1.0 / theta);
  return {u, v};
}

const char* to_string(ScenarioTag t) {
  switch (t) {
    case ScenarioTag::gauss_level: return "gauss_level";
    case ScenarioTag::gauss_power: return "gauss_power";
    case ScenarioTag::clayton_break: return "clayton_break";
    case ScenarioTag::dvine_datadriven: return "dvine_datadriven";
    case ScenarioTag::counterexample_1: return "counterexample_1";
    case ScenarioTag::counterexample_2: return "counterexample_2";
  }
  return "unknown";
}

ScenarioTag parse_scenario(const std::string& s) {
  for (auto t : {ScenarioTag::gauss_level, ScenarioTag::gauss_power, ScenarioTag::clayton_break,
                 ScenarioTag::dvine_datadriven, ScenarioTag::counterexample_1,
                 ScenarioTag::counterexample_2})
    if (s == to_string(t)) return t;
  throw Error(ErrorKind::invalid_input, "unknown scenario '" + s + "'");
}

std::vector<double> gauss_means(std::size_t m, std::size_t k) {
  if (m == 4) {
    static const double table[3][4] = {{0.0, 2.0 / 3.0, 4.0 / 3.0, 2.0},
                                       {0.0, -2.0 / 3.0, -4.0 / 3.0, -2.0},
                                       {1.0, 1.0 / 3.0, -1.0 / 3.0, 1.0}};
    return {table[0][k], table[1][k], table[2][k]};
  }
  const double f = m > 1 ? static_cast<double>(k) / static_cast<double>(m - 1) : 0.0;
  return {2.0 * f, -2.0 * f, 1.0 - 2.0 * f};
}

namespace {

// Cut points of m equiprobable boxes, given the quantile function.
template <class Quantile>
std::vector<double> cut_points(std::size_t m, Quantile quantile) {
  std::vector<double> cuts;
  for (std::size_t k = 1; k < m; ++k)
    cuts.push_back(quantile(static_cast<double>(k) / static_cast<double>(m)));
  return cuts;
}

BoxFamily interval_family(const std::vector<double>& cuts) {
  std::vector<Box> boxes;
  double lower = -kInf;
  for (std::size_t k = 0; k <= cuts.size(); ++k) {
    const double upper = k < cuts.size() ? cuts[k] : kInf;
    boxes.emplace_back(std::vector<Constraint>{Interval{lower, upper, true, k == cuts.size()}});
    lower = upper;
  }
  return BoxFamily(std::move(boxes));
}

std::size_t box_of(double v, const std::vector<double>& cuts) {
  return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

void check_scenario(const Scenario& sc) {
  if (sc.n < 2) throw Error(ErrorKind::invalid_input, "scenario needs n >= 2");
  const bool fixed = sc.tag == ScenarioTag::gauss_level || sc.tag == ScenarioTag::gauss_power ||
                     sc.tag == ScenarioTag::clayton_break;
  if (fixed && sc.m < 2) throw Error(ErrorKind::invalid_input, "scenario needs m >= 2");
  if (sc.tag == ScenarioTag::clayton_break && !(sc.lambda > 0.0 && sc.lambda < 1.0))
    throw Error(ErrorKind::invalid_input, "lambda must lie in (0, 1)");
  if (sc.tag == ScenarioTag::dvine_datadriven) {
    if (sc.p < 2 || sc.q < 1) throw Error(ErrorKind::invalid_input, "dvine needs p >= 2, q >= 1");
    if (!(sc.split_fraction > 0.0 && sc.split_fraction <= 1.0))
      throw Error(ErrorKind::invalid_input, "split fraction must lie in (0, 1]");
  }
}

Sample gauss_sample(const Scenario& sc, Rng& rng, bool power) {
  const std::size_t n = sc.n, m = sc.m;
  const auto cuts = cut_points(m, normal_quantile);
  std::vector<std::vector<double>> means(m);
  std::vector<double> rhos(m);
  for (std::size_t k = 0; k < m; ++k) {
    means[k] = gauss_means(m, k);
    const double tau = power ? 0.5 * static_cast<double>(k) / static_cast<double>(m - 1) : 0.5;
    rhos[k] = power ? rho_from_tau(tau) : 0.7071;
  }
  std::vector<std::vector<double>> x(3, std::vector<double>(n)), z(1, std::vector<double>(n));
  double draw[3];
  for (std::size_t i = 0; i < n; ++i) {
    const double v = rng.normal();
    const std::size_t k = box_of(v, cuts);
    sample_equicorr_gaussian(draw, rhos[k], means[k], rng);
    z[0][i] = v;
    for (std::size_t a = 0; a < 3; ++a) x[a][i] = draw[a];
  }
  return Sample(std::move(x), std::move(z));
}

Sample clayton_sample(const Scenario& sc, Rng& rng) {
  std::vector<std::vector<double>> x(2, std::vector<double>(sc.n)), z(1, std::vector<double>(sc.n));
  for (std::size_t i = 0; i < sc.n; ++i) {
    const double x3 = rng.uniform();
    const auto [u, v] = sample_clayton_pair(x3 <= sc.lambda ? 1.0 : 5.0, rng);
    x[0][i] = u;
    x[1][i] = v;
    z[0][i] = x3;
  }
  return Sample(std::move(x), std::move(z));
}

void correlated_normal_pair(double rho, Rng& rng, double& a, double& b) {
  const double z1 = rng.normal();
  const double z2 = rng.normal();
  a = z1;
  b = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
}

Sample dvine_sample(const Scenario& sc, Rng& rng) {
  std::vector<std::vector<double>> x(sc.p, std::vector<double>(sc.n)),
      z(sc.q, std::vector<double>(sc.n));
  const double rho_low = rho_from_tau(0.7), rho_high = rho_from_tau(0.1);
  for (std::size_t i = 0; i < sc.n; ++i) {
    for (std::size_t j = 0; j < sc.q; ++j) z[j][i] = rng.normal();
    const double rho = sc.alternative ? (z[0][i] > 1.0 ? rho_high : rho_low) : 0.0;
    correlated_normal_pair(rho, rng, x[0][i], x[1][i]);
    for (std::size_t a = 2; a < sc.p; ++a) x[a][i] = rng.normal();
  }
  return Sample(std::move(x), std::move(z));
}

Sample counterexample_sample(const Scenario& sc, Rng& rng, int model) {
  std::vector<std::vector<double>> x(2, std::vector<double>(sc.n)), z(1, std::vector<double>(sc.n));
  for (std::size_t i = 0; i < sc.n; ++i) {
    const double x3 = 4.0 * rng.uniform();
    const int quarter = std::min(3, static_cast<int>(x3));
    z[0][i] = x3;
    if (model == 1) {
      static const double off1[4] = {0.0, 2.0, 0.0, 2.0};
      static const double off2[4] = {0.0, 2.0, 2.0, 0.0};
      x[0][i] = off1[quarter] + rng.uniform();
      x[1][i] = off2[quarter] + rng.uniform();
    } else {
      correlated_normal_pair(quarter % 2 == 0 ? 0.5 : -0.5, rng, x[0][i], x[1][i]);
    }
  }
  return Sample(std::move(x), std::move(z));
}

}  // namespace

Sample generate_scenario(const Scenario& sc, Rng& rng) {
  check_scenario(sc);
  switch (sc.tag) {
    case ScenarioTag::gauss_level: return gauss_sample(sc, rng, false);
    case ScenarioTag::gauss_power: return gauss_sample(sc, rng, true);
    case ScenarioTag::clayton_break: return clayton_sample(sc, rng);
    case ScenarioTag::dvine_datadriven: return dvine_sample(sc, rng);
    case ScenarioTag::counterexample_1: return counterexample_sample(sc, rng, 1);
    case ScenarioTag::counterexample_2: return counterexample_sample(sc, rng, 2);
  }
  throw Error(ErrorKind::invalid_input, "unknown scenario");
}

BoxFamily scenario_boxes(const Scenario& sc) {
  check_scenario(sc);
  switch (sc.tag) {
    case ScenarioTag::gauss_level:
    case ScenarioTag::gauss_power: return interval_family(cut_points(sc.m, normal_quantile));
    case ScenarioTag::clayton_break:
      return interval_family(cut_points(sc.m, [](double u) { return u; }));
    case ScenarioTag::counterexample_1:
    case ScenarioTag::counterexample_2: return interval_family({2.0});
    case ScenarioTag::dvine_datadriven: break;
  }
  throw Error(ErrorKind::invalid_input, "dvine_datadriven boxes come from the tree");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReplicateOutcome {
  std::vector<double> p_values;
  std::vector<double> statistics;
  std::size_t leaves = 0;
};

bool wants(const std::vector<Method>& methods, Scheme scheme) {
  for (auto m : methods) {
    if (scheme == Scheme::classical &&
        (m == Method::boot_inf_classical || m == Method::boot_l2_classical))
      return true;
    if (scheme == Scheme::conditional &&
        (m == Method::boot_inf_conditional || m == Method::boot_l2_conditional))
      return true;
  }
  return false;
}

ReplicateOutcome run_replicate(const Scenario& sc, const StudyOptions& opt, std::size_t r) {
  ReplicateOutcome out;
  out.p_values.assign(opt.methods.size(), kNaN);
  out.statistics.assign(opt.methods.size(), kNaN);

  Rng data_rng(derive_seed(opt.seed, 4 * r));
  Sample sample = generate_scenario(sc, data_rng);
  BoxFamily family;

  if (sc.tag == ScenarioTag::dvine_datadriven) {
    std::vector<std::size_t> rows(sample.n());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Rng split_rng(derive_seed(opt.seed, 4 * r + 3));
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[split_rng.index(i)]);
    const auto build_n = static_cast<std::size_t>(std::floor(sc.split_fraction * static_cast<double>(sample.n())));
    std::vector<std::size_t> build(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(build_n));
    std::vector<std::size_t> test(rows.begin() + static_cast<std::ptrdiff_t>(build_n), rows.end());
    std::sort(build.begin(), build.end());
    std::sort(test.begin(), test.end());
    const DependenceTree tree = cut_ckt(sample.subset(build), sc.tree);
    out.leaves = tree.leaf_count();
    if (out.leaves < 2 || test.size() < 2) return out;
    family = leaves(tree);
    sample = sample.subset(test);
  } else {
    family = scenario_boxes(sc);
  }

  for (std::size_t mi = 0; mi < opt.methods.size(); ++mi) {
    if (opt.methods[mi] != Method::wald) continue;
    try {
      const TauEstimates tau = tau_matrix(sample, family);
      const CovarianceEstimate cov = delta_hat(sample, family, tau, opt.path);
      const TestResult res =
          wald_statistic(tau, cov, ContrastMatrix::extended(family.m(), sample.p()), opt.wald);
      out.p_values[mi] = res.p_value;
      out.statistics[mi] = res.statistic;
    } catch (const Error&) {
    }
  }

  for (Scheme scheme : {Scheme::classical, Scheme::conditional}) {
    if (!wants(opt.methods, scheme)) continue;
    BootstrapConfig cfg;
    cfg.B = opt.B;
    cfg.scheme = scheme;
    cfg.seed = derive_seed(opt.seed, 4 * r + (scheme == Scheme::classical ? 1 : 2));
    cfg.threads = 1;
    try {
      const BootstrapOutcome b = bootstrap_test(sample, family, cfg);
      for (std::size_t mi = 0; mi < opt.methods.size(); ++mi) {
        if (opt.methods[mi] == method_for(Statistic::inf, scheme)) {
          out.p_values[mi] = b.inf.p_value;
          out.statistics[mi] = b.inf.statistic;
        } else if (opt.methods[mi] == method_for(Statistic::l2, scheme)) {
          out.p_values[mi] = b.l2.p_value;
          out.statistics[mi] = b.l2.statistic;
        }
      }
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace

MonteCarloReport run_study(const Scenario& sc, const StudyOptions& opt) {
  check_scenario(sc);
  if (opt.R < 1) throw Error(ErrorKind::invalid_input, "R must be at least 1");
  if (opt.methods.empty()) throw Error(ErrorKind::invalid_input, "no method requested");
  const auto start = std::chrono::steady_clock::now();

  std::vector<ReplicateOutcome> reps(opt.R);
  parallel_for(opt.R, opt.threads, [&](std::size_t r) { reps[r] = run_replicate(sc, opt, r); });

  MonteCarloReport report;
  report.scenario = sc;
  report.options = opt;
  for (std::size_t mi = 0; mi < opt.methods.size(); ++mi) {
    MethodSummary ms;
    ms.method = opt.methods[mi];
    for (const auto& rep : reps) {
      const double pv = rep.p_values[mi];
      ms.p_values.push_back(pv);
      ms.statistics.push_back(rep.statistics[mi]);
      if (std::isnan(pv)) {
        // A single-leaf tree is a decision not to test, not a failure.
        if (!(sc.tag == ScenarioTag::dvine_datadriven && rep.leaves < 2)) ++ms.failures;
      } else if (pv < opt.level) {
        ++ms.rejections;
      }
    }
    ms.frequency = static_cast<double>(ms.rejections) / static_cast<double>(opt.R);
    report.methods.push_back(std::move(ms));
  }
  if (sc.tag == ScenarioTag::dvine_datadriven) {
    double total = 0.0;
    for (const auto& rep : reps) {
      report.leaf_counts.push_back(rep.leaves);
      total += static_cast<double>(rep.leaves);
      if (rep.leaves < 2) ++report.single_leaf;
    }
    report.mean_leaves = total / static_cast<double>(opt.R);
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

const char* to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::pass: return "PASS";
    case ClaimStatus::warn: return "WARN";
    case ClaimStatus::fail: return "FAIL";
  }
  return "?";
}

std::vector<ClaimResult> verify_counterexamples(std::size_t n, std::uint64_t seed) {
  if (n < 16) throw Error(ErrorKind::invalid_input, "counter-example check needs n >= 16");
  const double widen = n < 100000 ? std::sqrt(1e5 / static_cast<double>(n)) : 1.0;
  const bool lenient = n < 10000;
  std::vector<ClaimResult> out;

  auto judge = [&](ClaimResult c) {
    const bool ok = c.lower_bound ? c.value >= c.target - c.tolerance
                                  : std::abs(c.value - c.target) <= c.tolerance;
    c.status = ok ? ClaimStatus::pass : (lenient ? ClaimStatus::warn : ClaimStatus::fail);
    out.push_back(std::move(c));
  };

  auto tau_where = [](const Sample& s, auto pred) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < s.n(); ++i)
      if (pred(s.z(i, 0))) rows.push_back(i);
    return tau_on_rows(s, {0, 1}, rows);
  };
  auto in_quarter = [](int j) {
    return [j](double v) { return std::min(3, static_cast<int>(v)) == j; };
  };
  auto low_half = [](double v) { return v <= 2.0; };
  auto high_half = [](double v) { return v > 2.0; };

  {
    Scenario sc;
    sc.tag = ScenarioTag::counterexample_1;
    sc.n = n;
    Rng rng(derive_seed(seed, 1));
    const Sample s = generate_scenario(sc, rng);
    judge({"counterexample_1", "subset tau on [0,2] equals 1/2", tau_where(s, low_half), 0.5,
           0.02 * widen});
    judge({"counterexample_1", "subset tau on (2,4] equals -1/2", tau_where(s, high_half), -0.5,
           0.02 * widen});
    for (int j = 0; j < 4; ++j)
      judge({"counterexample_1",
             "regime tau on [" + std::to_string(j) + "," + std::to_string(j + 1) + ") equals 0",
             tau_where(s, in_quarter(j)), 0.0, 0.03 * widen});
  }
  {
    Scenario sc;
    sc.tag = ScenarioTag::counterexample_2;
    sc.n = n;
    Rng rng(derive_seed(seed, 2));
    const Sample s = generate_scenario(sc, rng);
    const double lo = tau_where(s, low_half);
    const double hi = tau_where(s, high_half);
    judge({"counterexample_2", "subset taus on [0,2] and (2,4] are equal", lo - hi, 0.0,
           0.02 * widen});
    const double pos = tau_where(s, [](double v) { return std::min(3, static_cast<int>(v)) % 2 == 0; });
    const double neg = tau_where(s, [](double v) { return std::min(3, static_cast<int>(v)) % 2 == 1; });
    const double gap = pos - neg;
    judge({"counterexample_2", "regime taus differ by at least 0.5", gap, 0.5, 0.0, true});
    judge({"counterexample_2", "regime tau difference equals 2*(2/pi)*asin(1/2)", gap,
           2.0 * tau_from_rho(0.5), 0.03 * widen});
  }
  return out;
}

}  // namespace ckt
