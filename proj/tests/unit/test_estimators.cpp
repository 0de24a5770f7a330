#include <gtest/gtest.h>

#include <cmath>

#include "ckt/error.hpp"
#include "ckt/estimators.hpp"
#include "ckt/simulation.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ckt;

namespace {

Sample from_pairs(const std::vector<std::pair<double, double>>& pts) {
  std::vector<double> a, b, z;
  for (auto [u, v] : pts) {
    a.push_back(u);
    b.push_back(v);
    z.push_back(0.0);
  }
  return Sample({a, b}, {z});
}

}  // namespace

TEST(Tau, PerfectConcordanceIsOne) {
  const Sample s = from_pairs({{1, 1}, {2, 2}, {3, 3}});
  EXPECT_DOUBLE_EQ(tau_pair_box(s, {0, 1}, Box::universal(1)), 1.0);
}

TEST(Tau, SingleDiscordantPair) {
  const Sample s = from_pairs({{1, 2}, {2, 1}});
  const Box all = Box::universal(1);
  EXPECT_DOUBLE_EQ(tau_pair_box(s, {0, 1}, all), -1.0);
  EXPECT_DOUBLE_EQ(tau_pair_box(s, {0, 1}, all, TauVariant::second), -0.5);
  EXPECT_DOUBLE_EQ(tau_from_counts({0, 1}, 2).s, 0.5);
}

TEST(Tau, FivePointsGiveZeroPointFour) {
  const Sample s = from_pairs({{1, 3}, {2, 1}, {3, 4}, {4, 2}, {5, 5}});
  EXPECT_DOUBLE_EQ(tau_pair_box(s, {0, 1}, Box::universal(1)), 0.4);
}

TEST(Tau, FewerThanTwoMembersNamesTheBox) {
  const Sample s({{1, 2, 3}, {1, 2, 3}}, {{0, 1, 5}});
  const BoxFamily fam({Box({Interval{-kInf, 1.0, true, false}}), Box({Interval{1.0, kInf, true, true}})});
  try {
    tau_matrix(s, fam);
    FAIL() << "expected insufficient subsample";
  } catch (const InsufficientSubsample& e) {
    ASSERT_TRUE(e.box().has_value());
    EXPECT_EQ(*e.box(), 1u);
    EXPECT_EQ(e.count(), 1u);
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_subsample);
  }
}

TEST(Tau, UniversalBoxIsClassicalKendall) {
  gen::Engine e(3);
  const Sample s = gen::sample(e, {50, 50, 2, 1, false});
  const TauEstimates t = tau_matrix(s, BoxFamily({Box::universal(1)}));
  const std::vector<double> a(s.conditioned(0).begin(), s.conditioned(0).end());
  const std::vector<double> b(s.conditioned(1).begin(), s.conditioned(1).end());
  EXPECT_NEAR(t.at(0, 0), oracle::kendall_tau(a, b), 1e-15);
}

TEST(Tau, IndependentCoordinatesNearZero) {
  Rng rng(99);
  const std::size_t n = 10000;
  std::vector<double> a(n), b(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    z[i] = rng.uniform();
  }
  const Sample s({a, b}, {z});
  const BoxFamily fam({Box({Interval{-kInf, 0.3, true, false}}), Box({Interval{0.3, kInf, true, true}})});
  const TauEstimates t = tau_matrix(s, fam);
  for (double v : t.tau) EXPECT_NEAR(v, 0.0, 0.05);
}

TEST(Tau, EquicorrelatedGaussianPerBox) {
  Scenario sc;
  sc.tag = ScenarioTag::gauss_level;
  sc.n = 10000;
  Rng rng(5);
  const Sample s = generate_scenario(sc, rng);
  const TauEstimates t = tau_matrix(s, scenario_boxes(sc));
  for (double v : t.tau) EXPECT_NEAR(v, 0.5, 0.03);
}

TEST(DHat, ConcordantTriple) {
  const Sample s = from_pairs({{1, 1}, {2, 2}, {3, 3}});
  EXPECT_DOUBLE_EQ(d_hat(s, {0, 1}, Box::universal(1)), 0.5);
}

TEST(DHat, EmptyBoxIsZero) {
  const Sample s = from_pairs({{1, 1}, {2, 2}, {3, 3}});
  EXPECT_DOUBLE_EQ(d_hat(s, {0, 1}, Box({Interval{5.0, 6.0, true, true}})), 0.0);
}

TEST(DHat, FourPointsAgainstDoubleLoop) {
  const Sample s({{0.1, 0.4, 0.2, 0.9}, {1.0, 0.5, 0.7, 2.0}}, {{0, 1, 2, 3}});
  const Box box({Interval{0.0, 3.0, false, false}});
  EXPECT_DOUBLE_EQ(d_hat(s, {0, 1}, box), oracle::d_hat(s, {0, 1}, box));
}

TEST(Pairs, OrderAndPosition) {
  const auto pairs = all_pairs(4);
  ASSERT_EQ(pairs.size(), 6u);
  EXPECT_EQ(pairs[0], (PairIndex{0, 1}));
  EXPECT_EQ(pairs[2], (PairIndex{0, 3}));
  EXPECT_EQ(pairs[3], (PairIndex{1, 2}));
  for (std::size_t k = 0; k < pairs.size(); ++k) EXPECT_EQ(pair_position(pairs[k], 4), k);
}

// Property: the four estimators line up exactly on continuous data, and the
// rescaled one equals Kendall's tau on the box subsample.
TEST(TauProperty, VariantIdentities) {
  gen::Engine e(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Sample s = gen::sample(e, {4, 120, 3, 2, false});
    const BoxFamily fam({gen::interval_box(e, s), Box::universal(s.q())});
    const Membership mb = membership(s, fam);
    if (mb.rows[0].size() < 2) continue;
    const TauEstimates t = tau_matrix(s, fam, true);
    for (std::size_t pi = 0; pi < t.pairs.size(); ++pi)
      for (std::size_t k = 0; k < fam.m(); ++k) {
        const std::size_t c = pi * fam.m() + k;
        const double sn = t.s_n[k];
        ASSERT_NEAR(t.tau1[c] + sn, t.tau2[c], 1e-12);
        ASSERT_NEAR(t.tau3[c] - sn, t.tau2[c], 1e-12);
        ASSERT_NEAR(t.tau2[c] / (1.0 - sn), t.tau[c], 1e-12);
        std::vector<double> a, b;
        for (auto i : mb.rows[k]) {
          a.push_back(s.x(i, t.pairs[pi].a));
          b.push_back(s.x(i, t.pairs[pi].b));
        }
        ASSERT_NEAR(t.tau[c], oracle::kendall_tau(a, b), 1e-12);
      }
  }
}

// Property: first variant equals 4 D (n - 1) / (n p^2) - 1.
TEST(TauProperty, FirstVariantFromDHat) {
  gen::Engine e(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Sample s = gen::sample(e, {4, 80, 2, 1, trial % 2 == 0});
    const Box box = gen::interval_box(e, s);
    const auto rows = oracle::scan_members(s, box);
    if (rows.size() < 2) continue;
    const double n = static_cast<double>(s.n());
    const double p = static_cast<double>(rows.size()) / n;
    const double d = oracle::d_hat(s, {0, 1}, box);
    ASSERT_NEAR(d_hat(s, {0, 1}, box), d, 1e-15);
    ASSERT_NEAR(tau_pair_box(s, {0, 1}, box, TauVariant::first), 4.0 * d * (n - 1.0) / (n * p * p) - 1.0, 1e-12);
  }
}

// Property: tau is invariant to strictly increasing transforms of each coordinate.
TEST(TauProperty, RankInvariance) {
  gen::Engine e(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Sample s = gen::sample(e, {4, 100, 2, 1, trial % 2 == 0});
    std::vector<double> a(s.conditioned(0).begin(), s.conditioned(0).end());
    std::vector<double> b(s.conditioned(1).begin(), s.conditioned(1).end());
    for (auto& v : a) v = std::exp(v);
    for (auto& v : b) v = v * v * v + 2.0 * v;
    const Sample t({a, b}, {std::vector<double>(s.conditioning(0).begin(), s.conditioning(0).end())});
    ASSERT_EQ(tau_pair_box(s, {0, 1}, Box::universal(1)), tau_pair_box(t, {0, 1}, Box::universal(1)));
  }
}
