#include <gtest/gtest.h>

#include <cmath>

#include "ckt/bootstrap.hpp"
#include "ckt/error.hpp"
#include "ckt/rng.hpp"
#include "generators.hpp"

using namespace ckt;

namespace {

BoxFamily halves(double cut) {
  return BoxFamily({Box({Interval{-kInf, cut, true, false}}), Box({Interval{cut, kInf, true, true}})});
}

}  // namespace

TEST(Resample, SingleRowRepeats) {
  Rng rng(1);
  const Resample r = resample_classical(1, rng);
  EXPECT_EQ(r.conditioned_rows, std::vector<std::size_t>{0});
  EXPECT_EQ(r.conditioning_rows, std::vector<std::size_t>{0});
}

TEST(Resample, SeededDrawsRepeat) {
  Rng a(77), b(77);
  const Resample ra = resample_classical(50, a), rb = resample_classical(50, b);
  EXPECT_EQ(ra.conditioned_rows, rb.conditioned_rows);
  EXPECT_EQ(ra.conditioned_rows, ra.conditioning_rows);
}

TEST(Resample, RowFrequencyIsUniform) {
  Rng rng(3);
  std::size_t hits = 0, draws = 0;
  for (int rep = 0; rep < 100000; ++rep) {
    for (auto i : resample_classical(4, rng).conditioned_rows) hits += i == 1;
    draws += 4;
  }
  EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(draws), 0.25, 0.01);
}

TEST(Conditional, UniversalBoxDecouplesTheParts) {
  gen::Engine e(5);
  const Sample s = gen::sample(e, {40, 40, 2, 1, false});
  const Membership mb = membership(s, BoxFamily({Box::universal(1)}));
  Rng rng(6);
  std::size_t same = 0, total = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    const Resample r = resample_conditional(mb, rng);
    for (std::size_t i = 0; i < r.conditioned_rows.size(); ++i) same += r.conditioned_rows[i] == r.conditioning_rows[i];
    total += r.conditioned_rows.size();
  }
  // independent draws coincide with probability 1/n
  EXPECT_NEAR(static_cast<double>(same) / static_cast<double>(total), 1.0 / 40.0, 0.005);
}

TEST(Conditional, DrawsStayInTheirBox) {
  gen::Engine e(7);
  const Sample s = gen::sample(e, {60, 60, 2, 1, false});
  const BoxFamily fam = halves(0.0);
  const Membership mb = membership(s, fam);
  Rng rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const Resample r = resample_conditional(mb, rng);
    for (std::size_t i = 0; i < r.conditioned_rows.size(); ++i)
      ASSERT_EQ(mb.first_box[r.conditioned_rows[i]], mb.first_box[r.conditioning_rows[i]]);
  }
}

TEST(Conditional, SingleMemberBoxAlwaysPairsWithItself) {
  const Sample s({{1, 2, 3}, {3, 1, 2}}, {{-1.0, 1.0, 2.0}});
  const Membership mb = membership(s, halves(0.0));
  Rng rng(9);
  for (int rep = 0; rep < 500; ++rep) {
    const Resample r = resample_conditional(mb, rng);
    for (std::size_t i = 0; i < 3; ++i)
      if (r.conditioning_rows[i] == 0) ASSERT_EQ(r.conditioned_rows[i], 0u);
  }
}

TEST(Conditional, RowOutsideEveryBoxIsCoverageError) {
  const Sample s({{1, 2, 3, 4, 5}, {3, 1, 2, 4, 5}}, {{-1.0, -2.0, 1.0, 2.0, 3.0}});
  const BoxFamily fam({Box({Interval{-kInf, 0.0, true, false}}), Box({Interval{1.5, kInf, true, true}})});
  BootstrapConfig cfg;
  cfg.scheme = Scheme::conditional;
  cfg.B = 10;
  try {
    bootstrap_test(s, fam, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::coverage);
  }
}

TEST(Bootstrap, IdentityResampleIsCentered) {
  gen::Engine e(10);
  const Sample s = gen::sample(e, {80, 80, 3, 1, false});
  const BoxFamily fam = halves(0.0);
  Resample id;
  for (std::size_t i = 0; i < s.n(); ++i) {
    id.conditioned_rows.push_back(i);
    id.conditioning_rows.push_back(i);
  }
  const auto [inf, l2] = centered_statistics(s, fam, id);
  EXPECT_EQ(inf, 0.0);
  EXPECT_EQ(l2, 0.0);
}

TEST(Bootstrap, ZeroStatisticGivesPValueOne) {
  // two boxes holding the same points, so the taus coincide
  std::vector<double> a, b, z;
  gen::Engine e(11);
  const auto col = gen::column(e, 30, false);
  for (int copy = 0; copy < 2; ++copy)
    for (std::size_t i = 0; i < col.size(); ++i) {
      a.push_back(col[i]);
      b.push_back(col[(i * 7) % col.size()]);
      z.push_back(copy == 0 ? -1.0 : 1.0);
    }
  const Sample s({a, b}, {z});
  BootstrapConfig cfg;
  cfg.B = 200;
  cfg.seed = 12;
  const auto out = bootstrap_test(s, halves(0.0), cfg);
  EXPECT_EQ(out.inf.statistic, 0.0);
  EXPECT_EQ(out.inf.p_value, 1.0);
  EXPECT_EQ(out.l2.p_value, 1.0);
}

TEST(Bootstrap, ClearDifferenceGivesPValueZero) {
  const std::size_t n = 400;
  std::vector<double> a(n), b(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<double>(i % 200);
    b[i] = i < 200 ? a[i] : -a[i];
    z[i] = i < 200 ? -1.0 : 1.0;
  }
  const Sample s({a, b}, {z});
  BootstrapConfig cfg;
  cfg.B = 200;
  cfg.seed = 13;
  for (Scheme scheme : {Scheme::classical, Scheme::conditional}) {
    cfg.scheme = scheme;
    const auto out = bootstrap_test(s, halves(0.0), cfg);
    EXPECT_NEAR(out.inf.statistic, std::sqrt(400.0) * 2.0, 1e-9);
    EXPECT_EQ(out.inf.p_value, 0.0);
    EXPECT_EQ(out.l2.p_value, 0.0);
    cfg.smoothed = true;
    EXPECT_DOUBLE_EQ(bootstrap_test(s, halves(0.0), Statistic::inf, cfg).p_value, 1.0 / 201.0);
    cfg.smoothed = false;
  }
}

TEST(Bootstrap, ReplicatesIndependentOfThreads) {
  gen::Engine e(14);
  const Sample s = gen::sample(e, {200, 200, 3, 1, true});
  BootstrapConfig cfg;
  cfg.B = 100;
  cfg.seed = 15;
  for (Scheme scheme : {Scheme::classical, Scheme::conditional}) {
    cfg.scheme = scheme;
    cfg.threads = 1;
    const auto one = bootstrap_test(s, halves(2.5), cfg);
    cfg.threads = 3;
    const auto three = bootstrap_test(s, halves(2.5), cfg);
    EXPECT_EQ(one.replicates_inf, three.replicates_inf);
    EXPECT_EQ(one.replicates_l2, three.replicates_l2);
    EXPECT_EQ(one.inf.p_value, three.inf.p_value);
  }
}

// Property: the fast replicate path equals recomputation from a materialized
// resample, for replicate b drawn from stream derive_seed(seed, b).
TEST(BootstrapProperty, ReplicatesMatchRecomputation) {
  gen::Engine e(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Sample s = gen::sample(e, {30, 120, 3, 1, trial % 2 == 0});
    BoxFamily fam;
    try {
      fam = gen::partition(e, s, 2);
    } catch (const Error&) {
      continue;
    }
    const Membership mb = membership(s, fam);
    if (mb.rows[0].size() < 8 || mb.rows[1].size() < 8) continue;
    BootstrapConfig cfg;
    cfg.B = 20;
    cfg.seed = static_cast<std::uint64_t>(trial);
    for (Scheme scheme : {Scheme::classical, Scheme::conditional}) {
      cfg.scheme = scheme;
      BootstrapOutcome out;
      try {
        out = bootstrap_test(s, fam, cfg);
      } catch (const InsufficientSubsample&) {
        continue;
      }
      for (std::size_t b = 0; b < cfg.B; ++b) {
        Rng rng(derive_seed(cfg.seed, b));
        const Resample r = scheme == Scheme::classical ? resample_classical(s.n(), rng) : resample_conditional(mb, rng);
        try {
          const auto [inf, l2] = centered_statistics(s, fam, r);
          ASSERT_NEAR(out.replicates_inf[b], inf, 1e-12);
          ASSERT_NEAR(out.replicates_l2[b], l2, 1e-9);
        } catch (const InsufficientSubsample&) {
          // redrawn inside the bootstrap; not comparable
        }
      }
    }
  }
}
