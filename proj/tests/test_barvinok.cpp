#include <gtest/gtest.h>

#include <algorithm>

#include "ehrhart/barvinok.hpp"
#include "ehrhart/oracle.hpp"
#include "ehrhart/random_instances.hpp"
#include "test_support.hpp"

namespace ehrhart {
namespace {

using test::q;
using test::qv;

std::vector<RatVector> sorted(std::vector<RatVector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

SimplicialAffineCone cone_at(RatVector vertex, std::vector<RatVector> gens) {
  return SimplicialAffineCone::make(std::move(vertex), std::move(gens));
}

/// Random direction for which both the decomposition and the oracle are defined.
template <typename F>
void with_generic_lambda(testing::Rng& rng, std::size_t d, const std::vector<RatVector>& avoid, F&& body) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    const RatVector lam = testing::random_generic_direction(rng, d, avoid);
    try {
      body(lam);
      return;
    } catch (const Error& e) {
      if (e.code() != Errc::lambda_not_generic) throw;
    }
  }
  FAIL() << "no generic direction found";
}

TEST(DualCone, Examples) {
  EXPECT_EQ(sorted(dual_cone({qv({"1", "0"}), qv({"0", "1"})})), sorted({qv({"1", "0"}), qv({"0", "1"})}));
  EXPECT_EQ(sorted(dual_cone({qv({"1", "0"}), qv({"1", "2"})})), sorted({qv({"0", "1"}), qv({"2", "-1"})}));
  EXPECT_ERRC(dual_cone({qv({"1", "1"}), qv({"2", "2"})}), Errc::not_solid);
}

TEST(DualCone, PairingsNonnegativeAndInvolutive) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testing::random_cone(rng, static_cast<std::size_t>(testing::uniform(rng, 2, 4)), 5, 1);
    const auto duals = dual_cone(a.generators);
    for (const auto& w : duals) {
      int positive = 0;
      for (const auto& v : a.generators) {
        EXPECT_GE(dot(w, v), 0);
        positive += dot(w, v) > 0;
      }
      EXPECT_EQ(positive, 1);
    }
    EXPECT_EQ(sorted(dual_cone(duals)), sorted(a.generators));
  }
}

TEST(Decompose, UnimodularConeIsItself) {
  const auto list = unimodular_decompose(cone_at(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})}),
                                         LatticeBasis::standard(2));
  ASSERT_EQ(list.cones.size(), 1u);
  EXPECT_EQ(list.cones[0].sign, 1);
  EXPECT_EQ(sorted(list.cones[0].generators), sorted({qv({"1", "0"}), qv({"0", "1"})}));
}

TEST(Decompose, PiecesAreUnimodular) {
  testing::Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 2, 4));
    const auto a = testing::random_cone(rng, d, 5, 3);
    for (auto rule : {ShortVectorRule::smallest, ShortVectorRule::largest}) {
      const auto list = unimodular_decompose(a, LatticeBasis::standard(d), rule);
      ASSERT_FALSE(list.cones.empty());
      for (const auto& c : list.cones) {
        EXPECT_EQ(c.vertex, a.vertex);
        EXPECT_TRUE(c.sign == 1 || c.sign == -1);
        EXPECT_TRUE(c.generator_matrix().is_integral());
        EXPECT_EQ(abs(determinant(c.generator_matrix())), 1);
      }
    }
  }
}

TEST(ExpSum, IndexTwoAndFourMatchOracle) {
  for (const char* top : {"2", "4"}) {
    const auto a = cone_at(qv({"0", "0"}), {qv({"1", "0"}), qv({"1", top})});
    testing::Rng rng(1);
    with_generic_lambda(rng, 2, a.generators, [&](const RatVector& lam) {
      const RatVector ell(2);
      EXPECT_TRUE(equal_on_common_window(exp_sum_series(a, lam, ell, 4, 0), cone_exp_sum_oracle(a, lam, ell, 4, 0)));
    });
  }
}

TEST(ExpSum, OneDimensionalRays) {
  const RatVector one = qv({"1"}), zero(1);
  const BiSeries s0 = exp_sum_series(cone_at(qv({"0"}), {one}), one, zero, 1, 0);
  EXPECT_EQ(s0.coeff(-1), -1);
  EXPECT_EQ(s0.coeff(0), q("1/2"));
  EXPECT_EQ(s0.coeff(1), q("-1/12"));
  const BiSeries s1 = exp_sum_series(cone_at(qv({"1/2"}), {one}), one, zero, 1, 0);
  EXPECT_EQ(s1.coeff(-1), -1);
  EXPECT_EQ(s1.coeff(0), q("-1/2"));
  EXPECT_EQ(s1.coeff(1), q("-1/12"));
}

TEST(ExpSum, QuadrantFactorizes) {
  const RatVector lam = qv({"1", "2"}), ell(2);
  const BiSeries s = exp_sum_series(cone_at(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})}), lam, ell, 3, 0);
  const BiSeries expected = mul(geometric_exp_factor(1, 0, 5, 0), geometric_exp_factor(2, 0, 5, 0), 3);
  EXPECT_TRUE(equal_on_common_window(s, expected));
  EXPECT_EQ(s.coeff(-2), q("1/2"));
}

TEST(ExpSum, NonGenericLambdaIsReported) {
  const auto a = cone_at(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})});
  EXPECT_ERRC(exp_sum_series(a, qv({"0", "1"}), RatVector(2), 1, 0), Errc::lambda_not_generic);
}

TEST(ExpSum, RandomConesMatchParallelepipedOracle) {
  testing::Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 2, 3));
    const auto a = testing::random_cone(rng, d, d == 2 ? 5 : 3, 4);
    const int t_max = static_cast<int>(testing::uniform(rng, 0, 1));
    const RatVector ell = testing::random_integer_vector(rng, d, 3);
    with_generic_lambda(rng, d, a.generators, [&](const RatVector& lam) {
      const BiSeries got = exp_sum_series(a, lam, ell, 2, t_max);
      const BiSeries want = cone_exp_sum_oracle(a, lam, ell, 2, t_max);
      EXPECT_TRUE(equal_on_common_window(got, want)) << got.dump() << "vs\n" << want.dump();
    });
  }
}

TEST(ExpSum, ShortVectorRulesAgree) {
  testing::Rng rng(202);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 2, 3));
    const auto a = testing::random_cone(rng, d, 4, 4);
    const LatticeBasis z = LatticeBasis::standard(d);
    const RatVector ell = testing::random_integer_vector(rng, d, 2);
    with_generic_lambda(rng, d, a.generators, [&](const RatVector& lam) {
      const auto small = exp_sum_series(a, z, lam, ell, 1, 1, ShortVectorRule::smallest);
      const auto large = exp_sum_series(a, z, lam, ell, 1, 1, ShortVectorRule::largest);
      EXPECT_TRUE(equal_on_common_window(small, large));
    });
  }
}

TEST(ExpSum, NonStandardLattice) {
  // S over B Z^d of a equals S over Z^d of B^{-1} a at the pulled-back direction
  testing::Rng rng(303);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 2, 3));
    RatMatrix b(d, d);
    do {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) b(i, j) = testing::random_rational(rng, 2, 2);
    } while (determinant(b) == 0);
    const auto base = testing::random_cone(rng, d, 3, 3);
    std::vector<RatVector> gens;
    for (const auto& g : base.generators) gens.push_back(b * g);
    const auto a = SimplicialAffineCone::make(b * base.vertex, gens);
    const RatMatrix bt = b.transpose();
    with_generic_lambda(rng, d, base.generators, [&](const RatVector& mu) {
      // lam with B^T lam = mu
      const RatVector lam = solve(bt, mu);
      const BiSeries got = exp_sum_series(a, LatticeBasis(b), lam, RatVector(d), 2, 0);
      const BiSeries want = cone_exp_sum_oracle(base, mu, RatVector(d), 2, 0);
      EXPECT_TRUE(equal_on_common_window(got, want));
    });
  }
}

TEST(Integral, Examples) {
  const RatVector ell2(2), ell1(1);
  const BiSeries quad =
      integral_series(cone_at(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})}), qv({"1", "1"}), ell2, 2, 0);
  EXPECT_EQ(quad.coeff(-2), 1);
  EXPECT_EQ(quad.coeff(-1), 0);
  EXPECT_EQ(quad.coeff(0), 0);
  const BiSeries ray = integral_series(cone_at(qv({"0"}), {qv({"1"})}), qv({"1"}), ell1, 2, 0);
  EXPECT_EQ(ray.coeff(-1), -1);
  EXPECT_EQ(ray.coeff(0), 0);
  const BiSeries shifted = integral_series(cone_at(qv({"1"}), {qv({"1"})}), qv({"1"}), ell1, 1, 0);
  EXPECT_EQ(shifted.coeff(-1), -1);
  EXPECT_EQ(shifted.coeff(0), -1);
  EXPECT_EQ(shifted.coeff(1), q("-1/2"));
}

TEST(Integral, HomogeneousAtOrigin) {
  testing::Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
    auto a = testing::random_cone(rng, d, 5, 1);
    a.vertex = RatVector(d);
    const RatVector lam = testing::random_generic_direction(rng, d, a.generators);
    const BiSeries s = integral_series(a, lam, RatVector(d), 3, 0);
    for (int j = s.tau_min(); j <= 3; ++j) {
      if (j == -static_cast<int>(d))
        EXPECT_NE(s.coeff(j), 0);
      else
        EXPECT_EQ(s.coeff(j), 0);
    }
  }
}

TEST(ConeSumPlan, VertexReuseMatchesFreshComputation) {
  testing::Rng rng(505);
  const auto a = testing::random_cone(rng, 3, 4, 1);
  const ConeSumPlan plan(SimplicialAffineCone{RatVector(3), a.generators, 1}, LatticeBasis::standard(3));
  with_generic_lambda(rng, 3, a.generators, [&](const RatVector& lam) {
    const RatVector ell = qv({"1", "0", "-1"});
    const auto den = plan.denominators(lam, ell, 2, 1);
    for (int trial = 0; trial < 5; ++trial) {
      RatVector s{testing::random_rational(rng, 3, 4), testing::random_rational(rng, 3, 4),
                  testing::random_rational(rng, 3, 4)};
      const auto fresh = cone_exp_sum_oracle(SimplicialAffineCone::make(s, a.generators), lam, ell, 2, 1);
      EXPECT_TRUE(equal_on_common_window(plan.series(den, s), fresh));
    }
  });
}

}  // namespace
}  // namespace ehrhart
