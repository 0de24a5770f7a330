#include "ckt/estimators.hpp"

#include "ckt/error.hpp"
#include "ckt/parallel.hpp"

namespace ckt {

std::vector<PairIndex> all_pairs(std::size_t p) {
  std::vector<PairIndex> out;
  out.reserve(pair_count(p));
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) out.push_back({a, b});
  return out;
}

std::size_t pair_position(PairIndex pair, std::size_t p) {
  if (pair.a >= pair.b || pair.b >= p) throw Error(ErrorKind::invalid_input, "invalid pair index");
  // Pairs before row a: sum_{r<a} (p - 1 - r).
  return pair.a * (2 * p - pair.a - 1) / 2 + (pair.b - pair.a - 1);
}

TauFromCounts tau_from_counts(PairCounts c, std::size_t members) {
  const double N = static_cast<double>(members);
  const double C = static_cast<double>(c.concordant);
  const double D = static_cast<double>(c.discordant);
  TauFromCounts t{};
  t.s = 1.0 / N;
  t.first = 4.0 * C / (N * N) - 1.0;
  t.second = 2.0 * (C - D) / (N * N);
  t.third = 1.0 - 4.0 * D / (N * N);
  t.rescaled = 2.0 * (C - D) / (N * (N - 1.0));
  return t;
}

namespace {

void check_pair(const Sample& s, PairIndex pair) {
  if (pair.a >= pair.b || pair.b >= s.p())
    throw Error(ErrorKind::invalid_input, "pair (" + std::to_string(pair.a) + ", " +
                                              std::to_string(pair.b) + ") out of range");
}

void gather(const Sample& s, PairIndex pair, std::span<const std::size_t> rows,
            std::vector<double>& xa, std::vector<double>& xb) {
  xa.resize(rows.size());
  xb.resize(rows.size());
  const auto ca = s.conditioned(pair.a);
  const auto cb = s.conditioned(pair.b);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    xa[r] = ca[rows[r]];
    xb[r] = cb[rows[r]];
  }
}

}  // namespace

double tau_pair_box(const Sample& s, PairIndex pair, const Box& box, TauVariant variant,
                    std::optional<std::size_t> box_index) {
  check_pair(s, pair);
  const auto rows = members(s, box);
  if (rows.size() < 2) throw InsufficientSubsample(box_index, rows.size());
  std::vector<double> xa, xb;
  gather(s, pair, rows, xa, xb);
  const auto t = tau_from_counts(fast_pair_counts(xa, xb), rows.size());
  switch (variant) {
    case TauVariant::first: return t.first;
    case TauVariant::second: return t.second;
    case TauVariant::third: return t.third;
    case TauVariant::rescaled: break;
  }
  return t.rescaled;
}

double tau_on_rows(const Sample& s, PairIndex pair, std::span<const std::size_t> rows) {
  check_pair(s, pair);
  if (rows.size() < 2) throw InsufficientSubsample(std::nullopt, rows.size());
  std::vector<double> xa, xb;
  gather(s, pair, rows, xa, xb);
  return kendall_tau_a(xa, xb);
}

TauEstimates tau_matrix(const Sample& s, const BoxFamily& family, bool with_variants,
                        unsigned threads) {
  return tau_matrix(s, membership(s, family), with_variants, threads);
}

TauEstimates tau_matrix(const Sample& s, const Membership& mb, bool with_variants,
                        unsigned threads) {
  TauEstimates est;
  est.n = s.n();
  est.p = s.p();
  est.m = mb.m;
  est.pairs = all_pairs(s.p());
  for (std::size_t k = 0; k < mb.m; ++k) {
    const std::size_t count = mb.rows[k].size();
    if (count < 2) throw InsufficientSubsample(k, count);
    est.counts.push_back(count);
    est.p_hat.push_back(static_cast<double>(count) / static_cast<double>(s.n()));
    est.s_n.push_back(1.0 / static_cast<double>(count));
  }
  const std::size_t P = est.pairs.size();
  est.tau.assign(P * mb.m, 0.0);
  if (with_variants) {
    est.tau1.assign(P * mb.m, 0.0);
    est.tau2.assign(P * mb.m, 0.0);
    est.tau3.assign(P * mb.m, 0.0);
  }
  parallel_for(P * mb.m, threads, [&](std::size_t cell) {
    const std::size_t pi = cell / mb.m;
    const std::size_t k = cell % mb.m;
    std::vector<double> xa, xb;
    gather(s, est.pairs[pi], mb.rows[k], xa, xb);
    if (with_variants) {
      const auto t = tau_from_counts(fast_pair_counts(xa, xb), mb.rows[k].size());
      est.tau[cell] = t.rescaled;
      est.tau1[cell] = t.first;
      est.tau2[cell] = t.second;
      est.tau3[cell] = t.third;
    } else {
      est.tau[cell] = kendall_tau_a(xa, xb);
    }
  });
  return est;
}

double d_hat(const Sample& s, PairIndex pair, const Box& box) {
  check_pair(s, pair);
  const auto rows = members(s, box);
  std::vector<double> xa, xb;
  gather(s, pair, rows, xa, xb);
  const double n = static_cast<double>(s.n());
  const auto c = fast_pair_counts(xa, xb);
  return static_cast<double>(c.concordant) / (n * (n - 1.0));
}

}  // namespace ckt
