#include <gtest/gtest.h>

#include <random>

#include "chaingeo/chaingeo.hpp"
#include "oracles.hpp"

using namespace chaingeo;

namespace {

const char* const desk_rings[] = {"gf(4)/gf(2)",    "gf(9)/gf(3)",    "gf(2)[t]/(t^2)", "gf(3)[t]/(t^2)",
                                  "gf(2)[t]/(t^3)", "gf(2) x gf(2)",  "gf(3)x gf(3)",   "gf(4)[t]/(t^2) over gf(2)"};

}  // namespace

TEST(Glynn, FrozenBoundValues) {
  // Independently computed by exact polynomial scans.
  const unsigned d2[] = {3, 4, 7, 9, 11, 13, 15, 18};
  for (unsigned q = 2; q <= 9; ++q) EXPECT_EQ(glynn_bound(q, 2, 0), d2[q - 2]) << q;
  const unsigned d3[] = {5,   13,  27,  44,  66,  91,  120, 153, 190, 231, 276, 325,
                         378, 435, 496, 561, 630, 704, 781, 862, 947, 1036, 1129, 1226};
  for (unsigned q = 2; q <= 25; ++q) EXPECT_EQ(glynn_bound(q, 3, 0), d3[q - 2]) << q;
  EXPECT_EQ(glynn_bound(2, 2, 1), 2);
  EXPECT_EQ(glynn_bound(3, 2, 1), 3);
  EXPECT_EQ(glynn_bound(2, 3, 1), 5);
  EXPECT_EQ(glynn_bound(2, 3, 2), 4);
  EXPECT_EQ(glynn_bound(2, 4, 2), 9);
}

TEST(Glynn, PolynomialValues) {
  const glynn_polynomial p220(2, 2, 0), p221(2, 2, 1), p230(2, 3, 0);
  EXPECT_EQ(p220(2), -6);
  EXPECT_EQ(p220(3), 12);
  EXPECT_EQ(p221(2), 0);
  const int expected[] = {-672, -406, -204, -60, 32, 78, 84};
  for (int x = 1; x <= 7; ++x) EXPECT_EQ(p230(x), expected[x - 1]) << x;
  EXPECT_THROW(glynn_polynomial(2, 2, 2), error);
  EXPECT_THROW(glynn_polynomial(1, 2, 0), error);
}

TEST(Glynn, WeightIsNonnegativeOnIntegers) {
  for (long long i = 1; i <= 1000000; ++i) ASSERT_GE(glynn_weight(bigint(i)), 0) << i;
  EXPECT_LT(glynn_weight(bigint(0)), 0);
}

TEST(Glynn, CubicExpansion) {
  for (unsigned q = 2; q <= 20; ++q)
    for (long long t = -3; t <= 3; ++t) EXPECT_NO_THROW(glynn_polynomial_check_3d(q, t));
}

TEST(Glynn, Crossovers) {
  const auto rows = glynn_crossovers(25);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].computed, 4u);
  EXPECT_EQ(rows[1].computed, 6u);
  EXPECT_EQ(rows[2].computed, 19u);
  for (const auto& r : rows) EXPECT_LE(r.computed, r.published_threshold);
}

TEST(Bounds, PerGeometry) {
  struct row {
    const char* spec;
    int trivial, elf, glynn;  // glynn < 0: not local
  };
  const row rows[] = {
      {"gf(4)/gf(2)", 2, 2, 3},    {"gf(9)/gf(3)", 3, 3, 4},    {"gf(2)[t]/(t^2)", 2, 2, 2},
      {"gf(3)[t]/(t^2)", 3, 3, 3}, {"gf(2)[t]/(t^3)", 4, 4, 4}, {"gf(2) x gf(2)", 3, 3, -1},
      {"gf(3)x gf(3)", 4, 4, -1},
  };
  for (const auto& r : rows) {
    const geometry g(algebra_from_spec(r.spec));
    EXPECT_EQ(bound_trivial(g), r.trivial) << r.spec;
    EXPECT_EQ(geometry_bound_elf(g), r.elf) << r.spec;
    const auto gl = geometry_bound_glynn(g);
    if (r.glynn < 0) EXPECT_FALSE(gl) << r.spec;
    else EXPECT_EQ(*gl, r.glynn) << r.spec;
  }
}

TEST(Search, MatchesExhaustiveCombinations) {
  for (const char* spec : {"gf(4)/gf(2)", "gf(9)/gf(3)", "gf(2)[t]/(t^2)", "gf(3)[t]/(t^2)", "gf(2)[t]/(t^3)",
                           "gf(2) x gf(2)", "gf(3)x gf(3)"}) {
    const geometry g(algebra_from_spec(spec));
    const auto brute = oracle::brute_min_hitting(g.v(), g.chains());
    const auto res = min_blocking(g);
    ASSERT_TRUE(res.found);
    EXPECT_EQ(res.witness, brute) << spec;
    min_blocking_options plain;
    plain.use_theory_bounds = false;
    EXPECT_EQ(min_blocking(g, plain).witness, brute) << spec;
  }
}

TEST(Search, AllMinimaMatchExhaustive) {
  for (const char* spec : {"gf(4)/gf(2)", "gf(2)[t]/(t^2)", "gf(3)[t]/(t^2)", "gf(2) x gf(2)", "gf(3)x gf(3)"}) {
    const geometry g(algebra_from_spec(spec));
    min_blocking_options opt;
    opt.all_minima = true;
    EXPECT_EQ(min_blocking(g, opt).minima, oracle::brute_all_minima(g.v(), g.chains())) << spec;
  }
}

TEST(Search, BoundsNeverExceedMinimum) {
  for (const char* spec : desk_rings) {
    const geometry g(algebra_from_spec(spec));
    min_blocking_options plain;
    plain.use_theory_bounds = false;
    const auto res = min_blocking(g, plain);
    ASSERT_TRUE(res.found);
    const bigint m = res.size;
    EXPECT_LE(bound_trivial(g), m) << spec;
    EXPECT_LE(geometry_bound_elf(g), m) << spec;
    if (auto gl = geometry_bound_glynn(g)) {
      EXPECT_LE(*gl, m) << spec;
    }
    const auto inc = incidence::from_geometry(g);
    EXPECT_TRUE(is_minimal_blocking(inc, res.witness));
  }
}

TEST(Search, DeterministicAcrossJobs) {
  const geometry g(algebra_from_spec("gf(4)[t]/(t^2) over gf(2)"));
  min_blocking_options one, many;
  many.jobs = 6;
  const auto a = min_blocking(g, one), b = min_blocking(g, many);
  EXPECT_EQ(a.size, 12u);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Search, MaxSizeAndGenericIncidence) {
  const geometry g(algebra_from_spec("gf(9)/gf(3)"));
  min_blocking_options opt;
  opt.max_size = 4;
  EXPECT_FALSE(min_blocking(g, opt).found);
  // Fano plane lines: minimum blocking set has size 3.
  incidence fano{7, 3, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}}};
  const auto res = min_hitting_set(fano);
  EXPECT_EQ(res.size, 3u);
  EXPECT_EQ(res.witness, oracle::brute_min_hitting(7, fano.blocks));
}

TEST(Counting, RandomSetsSatisfyIdentities) {
  std::mt19937_64 rng(20261016);
  for (const char* spec : desk_rings) {
    const geometry g(algebra_from_spec(spec));
    const auto& l = g.lambdas().formula;
    std::vector<point_id> all(g.v());
    std::iota(all.begin(), all.end(), 0);
    for (int trial = 0; trial < 200; ++trial) {
      std::shuffle(all.begin(), all.end(), rng);
      const std::size_t x = std::uniform_int_distribution<std::size_t>(0, g.v())(rng);
      std::vector<point_id> set(all.begin(), all.begin() + x);
      const auto rep = is_blocking(g, set);
      ASSERT_TRUE(rep.checks_hold()) << spec;
      // Independent pair count: each distant pair lies on lambda_2 chains.
      std::uint64_t distant_pairs = 0;
      for (std::size_t i = 0; i < x; ++i)
        for (std::size_t j = i + 1; j < x; ++j) distant_pairs += g.line().distant(set[i], set[j]);
      ASSERT_EQ(rep.distribution.moment(2), bigint(2 * distant_pairs * l.l2)) << spec;
      ASSERT_EQ(rep.distribution.moment(0), bigint(l.l0));
      ASSERT_EQ(rep.distribution.moment(1), bigint(x * l.l1));
      std::vector<bool> in(g.v(), false);
      for (auto p : set) in[p] = true;
      const bool blocks = std::all_of(g.chains().begin(), g.chains().end(), [&](const chain& c) {
        return std::any_of(c.begin(), c.end(), [&](point_id p) { return in[p]; });
      });
      ASSERT_EQ(rep.is_blocking, blocks);
    }
  }
}

TEST(BoseBurton, MinimaAreParallelClasses) {
  for (const char* spec : {"gf(2)[t]/(t^2)", "gf(3)[t]/(t^2)", "gf(2)[t]/(t^3)"}) {
    const geometry g(algebra_from_spec(spec));
    const auto rep = bose_burton_check(g);
    EXPECT_TRUE(rep.minima_are_classes);
    EXPECT_EQ(rep.minima.size(), rep.classes.size()) << spec;
  }
  EXPECT_THROW(bose_burton_check(geometry(algebra_from_spec("gf(9)/gf(3)"))), error);
}

TEST(Lift, MoebiusPlaneToTwentyPoints) {
  const geometry g(algebra_from_spec("gf(4)[t]/(t^2) over gf(2)"));
  const geometry down = residue_geometry(g);
  EXPECT_EQ(down.v(), 5u);
  const auto m = min_blocking(down);
  ASSERT_EQ(m.size, 3u);
  const auto rep = lift_blocking(g, m.witness);
  EXPECT_EQ(rep.lifted.size(), 12u);
  EXPECT_EQ(rep.fiber_size, 4u);
  EXPECT_TRUE(rep.report.is_blocking);
  EXPECT_TRUE(rep.chains_map_to_chains);
  EXPECT_TRUE(rep.fibers_are_parallel_classes);
  try {
    lift_blocking(g, {0, 1});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), error_code::not_blocking_downstairs);
  }
}

TEST(Lift, OtherLocalRings) {
  for (const char* spec : {"gf(2)[t]/(t^2)", "gf(3)[t]/(t^2)", "gf(2)[t]/(t^3)"}) {
    const geometry g(algebra_from_spec(spec));
    // Residue field is K itself; any single point blocks P(K).
    const auto rep = lift_blocking(g, {0});
    EXPECT_TRUE(rep.report.is_blocking) << spec;
    EXPECT_EQ(rep.lifted.size(), rep.fiber_size);
  }
}
