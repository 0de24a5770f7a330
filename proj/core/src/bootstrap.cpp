#include "ckt/bootstrap.hpp"

#include <cmath>

#include "ckt/concordance.hpp"
#include "ckt/error.hpp"
#include "ckt/estimators.hpp"
#include "ckt/parallel.hpp"

namespace ckt {

const char* to_string(Scheme s) { return s == Scheme::classical ? "classical" : "conditional"; }

Method method_for(Statistic statistic, Scheme scheme) {
  if (scheme == Scheme::classical)
    return statistic == Statistic::inf ? Method::boot_inf_classical : Method::boot_l2_classical;
  return statistic == Statistic::inf ? Method::boot_inf_conditional : Method::boot_l2_conditional;
}

Resample resample_classical(std::size_t n, Rng& rng) {
  Resample r;
  r.conditioned_rows.resize(n);
  for (auto& i : r.conditioned_rows) i = rng.index(n);
  r.conditioning_rows = r.conditioned_rows;
  return r;
}

Resample resample_conditional(const Membership& mb, Rng& rng) {
  Resample r;
  r.conditioned_rows.resize(mb.n);
  r.conditioning_rows.resize(mb.n);
  for (std::size_t d = 0; d < mb.n; ++d) {
    const std::size_t j = rng.index(mb.n);
    const std::ptrdiff_t k = mb.first_box[j];
    if (k < 0)
      throw Error(ErrorKind::coverage, "observation " + std::to_string(j) + " lies in no box");
    const auto& pool = mb.rows[static_cast<std::size_t>(k)];
    r.conditioning_rows[d] = j;
    r.conditioned_rows[d] = pool[rng.index(pool.size())];
  }
  return r;
}

Sample materialize(const Sample& s, const Resample& r) {
  return s.recombine(r.conditioned_rows, r.conditioning_rows);
}

namespace {

// Tau vector of a resample, using precomputed ranks of the conditioned
// columns. Returns false if some box ends up with fewer than 2 draws.
bool resample_taus(const std::vector<std::vector<std::int32_t>>& ranks,
                   const std::vector<PairIndex>& pairs, const Membership& mb, const Resample& r,
                   std::vector<double>& tau) {
  const std::size_t m = mb.m;
  std::vector<std::vector<std::size_t>> in_box(m);
  for (std::size_t d = 0; d < r.conditioning_rows.size(); ++d) {
    const std::size_t j = r.conditioning_rows[d];
    for (std::size_t k = 0; k < m; ++k)
      if (mb.in(j, k)) in_box[k].push_back(r.conditioned_rows[d]);
  }
  for (std::size_t k = 0; k < m; ++k)
    if (in_box[k].size() < 2) return false;

  tau.assign(pairs.size() * m, 0.0);
  std::vector<std::int32_t> xa, xb;
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const auto& ra = ranks[pairs[pi].a];
    const auto& rb = ranks[pairs[pi].b];
    for (std::size_t k = 0; k < m; ++k) {
      const auto& rows = in_box[k];
      xa.resize(rows.size());
      xb.resize(rows.size());
      for (std::size_t t = 0; t < rows.size(); ++t) {
        xa[t] = ra[rows[t]];
        xb[t] = rb[rows[t]];
      }
      const double N = static_cast<double>(rows.size());
      tau[pi * m + k] = 2.0 * static_cast<double>(concordance_balance(xa, xb)) / (N * (N - 1.0));
    }
  }
  return true;
}

}  // namespace

BootstrapOutcome bootstrap_test(const Sample& s, const BoxFamily& family,
                                const BootstrapConfig& config) {
  if (config.B < 1) throw Error(ErrorKind::invalid_input, "B must be at least 1");
  const Membership mb = membership(s, family);
  const TauEstimates observed = tau_matrix(s, mb);
  const ContrastMatrix contrast = ContrastMatrix::extended(mb.m, s.p());
  const double t_inf = stat_inf(observed, contrast);
  const double t_l2 = stat_l2(observed, contrast);

  std::vector<std::vector<std::int32_t>> ranks(s.p());
  for (std::size_t a = 0; a < s.p(); ++a) ranks[a] = dense_ranks(s.conditioned(a));

  if (config.scheme == Scheme::conditional)
    for (std::size_t i = 0; i < s.n(); ++i)
      if (mb.first_box[i] < 0)
        throw Error(ErrorKind::coverage, "observation " + std::to_string(i) + " lies in no box");

  BootstrapOutcome out;
  out.replicates_inf.assign(config.B, 0.0);
  out.replicates_l2.assign(config.B, 0.0);
  const double root_n = std::sqrt(static_cast<double>(s.n()));

  parallel_for(config.B, config.threads, [&](std::size_t b) {
    Rng rng(derive_seed(config.seed, b));
    std::vector<double> tau;
    std::size_t attempt = 0;
    for (;;) {
      const Resample r = config.scheme == Scheme::classical ? resample_classical(s.n(), rng)
                                                            : resample_conditional(mb, rng);
      if (resample_taus(ranks, observed.pairs, mb, r, tau)) break;
      if (++attempt >= config.max_redraws)
        throw Error(ErrorKind::insufficient_subsample,
                    "bootstrap replicate " + std::to_string(b) + " left a box with fewer than 2 draws after " +
                        std::to_string(config.max_redraws) + " attempts");
    }
    double worst = 0.0, sq = 0.0;
    for (const auto& [plus, minus] : contrast.row_pairs()) {
      const double d = (tau[plus] - tau[minus]) - (observed.tau[plus] - observed.tau[minus]);
      worst = std::max(worst, std::abs(d));
      sq += d * d;
    }
    out.replicates_inf[b] = root_n * worst;
    out.replicates_l2[b] = static_cast<double>(s.n()) * sq;
  });

  auto finish = [&](Statistic which, double observed_stat, const std::vector<double>& reps) {
    std::size_t exceed = 0;
    for (double v : reps)
      if (v > observed_stat) ++exceed;
    TestResult r;
    r.method = method_for(which, config.scheme);
    r.statistic = observed_stat;
    r.p_value = config.smoothed
                    ? static_cast<double>(exceed + 1) / static_cast<double>(config.B + 1)
                    : static_cast<double>(exceed) / static_cast<double>(config.B);
    r.m = mb.m;
    r.p = s.p();
    r.n = s.n();
    r.B = config.B;
    r.seed = config.seed;
    return r;
  };
  out.inf = finish(Statistic::inf, t_inf, out.replicates_inf);
  out.l2 = finish(Statistic::l2, t_l2, out.replicates_l2);
  return out;
}

std::pair<double, double> centered_statistics(const Sample& s, const BoxFamily& family,
                                              const Resample& r) {
  const Membership mb = membership(s, family);
  const TauEstimates observed = tau_matrix(s, mb);
  const ContrastMatrix contrast = ContrastMatrix::extended(mb.m, s.p());
  const TauEstimates star = tau_matrix(materialize(s, r), family);
  std::vector<double> diff(observed.tau.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = star.tau[i] - observed.tau[i];
  return {stat_inf(s.n(), diff, contrast), stat_l2(s.n(), diff, contrast)};
}

TestResult bootstrap_test(const Sample& s, const BoxFamily& family, Statistic statistic,
                          const BootstrapConfig& config) {
  auto out = bootstrap_test(s, family, config);
  return statistic == Statistic::inf ? out.inf : out.l2;
}

}  // namespace ckt
