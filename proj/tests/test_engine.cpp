#include <gtest/gtest.h>

#include "ehrhart/engine.hpp"
#include "ehrhart/oracle.hpp"
#include "ehrhart/random_instances.hpp"
#include "test_support.hpp"

namespace ehrhart {
namespace {

using test::q;
using test::qv;

RationalSimplex standard_triangle() { return RationalSimplex({qv({"0", "0"}), qv({"1", "0"}), qv({"0", "1"})}); }
RationalSimplex half_segment() { return RationalSimplex({qv({"0"}), qv({"1/2"})}); }

std::vector<Rational> known(const std::vector<std::optional<Rational>>& v) {
  std::vector<Rational> out;
  for (const auto& x : v) {
    EXPECT_TRUE(x.has_value());
    out.push_back(x.value_or(Rational(0)));
  }
  return out;
}

std::vector<Rational> rats(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(q(x));
  return out;
}

TEST(DecomposeMonomial, Examples) {
  const WeightPoly x1 = decompose_monomial({1});
  ASSERT_EQ(x1.terms.size(), 1u);
  EXPECT_EQ(x1.terms[0].coef, 1);
  EXPECT_EQ(x1.terms[0].form, qv({"1"}));
  EXPECT_EQ(x1.terms[0].power, 1);

  const WeightPoly x1x2 = decompose_monomial({1, 1});
  ASSERT_EQ(x1x2.terms.size(), 3u);
  for (const auto& t : x1x2.terms) {
    EXPECT_EQ(t.power, 2);
    EXPECT_EQ(t.coef, t.form == qv({"1", "1"}) ? q("1/2") : q("-1/2"));
  }

  const WeightPoly sq = decompose_monomial({2});
  ASSERT_EQ(sq.terms.size(), 1u);
  EXPECT_EQ(sq.terms[0].coef, 1);
  EXPECT_EQ(sq.terms[0].form, qv({"1"}));

  EXPECT_ERRC(decompose_monomial({-1}), Errc::bad_args);
}

TEST(DecomposeMonomial, EvaluatesToMonomial) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 1, 3));
    std::vector<int> e(d);
    for (auto& x : e) x = static_cast<int>(testing::uniform(rng, 0, 3));
    const WeightPoly h = decompose_monomial(e);
    for (int point = 0; point < 5; ++point) {
      RatVector x;
      Rational direct = 1;
      for (std::size_t i = 0; i < d; ++i) {
        x.push_back(testing::random_rational(rng, 5, 3));
        direct *= pow(x.back(), static_cast<unsigned long>(e[i]));
      }
      EXPECT_EQ(h.evaluate(x), direct);
    }
  }
}

TEST(GenericLambda, DeterministicAndGeneric) {
  const auto cones = vertex_cones(standard_triangle());
  const RatVector a = generic_lambda(cones, 0);
  EXPECT_EQ(a, generic_lambda(cones, 0));
  for (const auto& c : cones)
    for (const auto& g : c.generators) EXPECT_NE(dot(a, g), 0);
  const std::vector<SimplicialAffineCone> ray{SimplicialAffineCone{qv({"0", "0"}), {qv({"1", "0"})}, 1}};
  EXPECT_NE(generic_lambda(ray, 3)[0], 0);
}

TEST(GenericLambda, ExhaustionIsReported) {
  // every direction pairs to zero with the zero vector
  const std::vector<SimplicialAffineCone> bad{SimplicialAffineCone{qv({"0"}), {qv({"0"})}, 1}};
  EXPECT_ERRC(generic_lambda(bad, 1), Errc::exhausted_genericity);
}

TEST(WeightedConeSeries, RayWithLinearWeight) {
  const auto ray = SimplicialAffineCone::make(qv({"0"}), {qv({"1"})});
  WeightPoly h;
  h.add_term(1, qv({"1"}), 1);
  const BiSeries s = weighted_cone_series(ray, h, Mode::exact, 1, LatticeBasis::standard(1), qv({"1"}), 0);
  EXPECT_EQ(s.coeff(-2), 1);
  EXPECT_EQ(s.coeff(-1), 0);
  EXPECT_EQ(s.coeff(0), q("-1/12"));
}

TEST(WeightedConeSeries, ConstantWeightIsPlainSum) {
  const auto quad = SimplicialAffineCone::make(qv({"1/2", "0"}), {qv({"1", "0"}), qv({"1", "3"})});
  const RatVector lam = qv({"2", "-1"});
  const auto z2 = LatticeBasis::standard(2);
  EXPECT_TRUE(equal_on_common_window(weighted_cone_series(quad, WeightPoly::one(2), Mode::exact, 2, z2, lam, 2),
                                     exp_sum_series(quad, z2, lam, RatVector(2), 2, 0)));
}

TEST(WeightedConeSeries, QuadrantSeparates) {
  const auto quad = SimplicialAffineCone::make(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})});
  const auto ray = SimplicialAffineCone::make(qv({"0"}), {qv({"1"})});
  const RatVector lam = qv({"1", "3"});
  WeightPoly x;
  x.add_term(1, qv({"1"}), 1);
  const BiSeries s1 = weighted_cone_series(ray, x, Mode::exact, 1, LatticeBasis::standard(1), qv({"1"}), 3);
  const BiSeries s2 = weighted_cone_series(ray, x, Mode::exact, 1, LatticeBasis::standard(1), qv({"3"}), 3);
  const BiSeries both = weighted_cone_series(quad, decompose_monomial({1, 1}), Mode::exact, 2,
                                             LatticeBasis::standard(2), lam, 1);
  EXPECT_TRUE(equal_on_common_window(both, mul(s1, s2, 1)));
}

TEST(ResiduePoly, StandardTriangle) {
  EXPECT_EQ(known(ehrhart_residue_poly(standard_triangle(), WeightPoly::one(2), 0, {})), rats({"1", "3/2", "1/2"}));
}

TEST(ResiduePoly, HalfSegment) {
  EXPECT_EQ(known(ehrhart_residue_poly(half_segment(), WeightPoly::one(1), 0, {})), rats({"1", "1"}));
  EXPECT_EQ(known(ehrhart_residue_poly(half_segment(), WeightPoly::one(1), 1, {})), rats({"1", "1"}));
}

TEST(ResiduePoly, TriangleFirstCoordinate) {
  EXPECT_EQ(known(ehrhart_residue_poly(standard_triangle(), decompose_monomial({1, 0}), 0, {})),
            rats({"0", "1/3", "1/2", "1/6"}));
}

TEST(ResiduePoly, RejectsBadResidueAndCodimension) {
  EXPECT_ERRC(ehrhart_residue_poly(half_segment(), WeightPoly::one(1), 2, {}), Errc::bad_args);
  EngineOptions top;
  top.mode = Mode::top;
  top.r = 3;
  EXPECT_ERRC(ehrhart_residue_poly(standard_triangle(), WeightPoly::one(2), 0, top), Errc::bad_codimension);
}

TEST(TopCoeffs, Examples) {
  const auto tri = standard_triangle();
  const auto r0 = ehrhart_top_coeffs(tri, WeightPoly::one(2), 0);
  ASSERT_EQ(r0.size(), 1u);
  EXPECT_EQ(r0.at(2), rats({"1/2"}));
  const auto r1 = ehrhart_top_coeffs(tri, WeightPoly::one(2), 1);
  ASSERT_EQ(r1.size(), 2u);
  EXPECT_EQ(r1.at(1), rats({"3/2"}));
  const auto seg = ehrhart_top_coeffs(half_segment(), WeightPoly::one(1), 1);
  EXPECT_EQ(seg.at(1), rats({"1", "1"}));
  EXPECT_EQ(seg.at(0), rats({"1", "1"}));
}

TEST(TopCoeffs, HalfSegmentNFormLeadingCoefficient) {
  const auto seg = ehrhart_top_coeffs(half_segment(), WeightPoly::one(1), 0);
  ASSERT_EQ(seg.size(), 1u);
  for (long k = 0; k < 2; ++k) {
    std::vector<std::optional<Rational>> u{std::nullopt, seg.at(1)[static_cast<std::size_t>(k)]};
    const auto e = n_form_from_u_form(u, k, 2);
    EXPECT_FALSE(e[0].has_value());
    EXPECT_EQ(*e[1], q("1/2"));
  }
}

TEST(TopCoeffs, MatchExactOnRandomSimplices) {
  testing::Rng rng(61);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t d = static_cast<std::size_t>(testing::uniform(rng, 2, 3));
    const auto p = testing::random_simplex(rng, d, 2);
    const WeightPoly h = trial % 2 ? decompose_monomial(std::vector<int>(d, 0)) : [&] {
      std::vector<int> e(d, 0);
      e[0] = 1;
      return decompose_monomial(e);
    }();
    const auto exact = ehrhart_quasipolynomial(p, h);
    for (long r = 0; r <= static_cast<long>(d); ++r) {
      const auto top = ehrhart_top_coeffs(p, h, r, 5);
      EXPECT_EQ(top.begin()->first, top_threshold(d, h.max_degree(), r));
      for (const auto& [m, values] : top)
        for (std::size_t k = 0; k < values.size(); ++k)
          EXPECT_EQ(values[k], exact.residue_polys[k][static_cast<std::size_t>(m)]) << "r=" << r << " m=" << m;
    }
  }
}

TEST(Engine, LambdaIndependence) {
  const RationalSimplex p({qv({"0", "0", "0"}), qv({"1/2", "0", "0"}), qv({"0", "2/3", "0"}), qv({"1/3", "1/3", "3/4"})});
  const WeightPoly h = decompose_monomial({1, 1, 0});
  EngineOptions a, b;
  a.seed = 1;
  b.seed = 2;
  EhrhartEngine ea(p, h, a), eb(p, h, b);
  const auto ra = ea.compute({0, 5}), rb = eb.compute({0, 5});
  EXPECT_NE(ea.lambda(), eb.lambda());
  for (std::size_t i = 0; i < ra.size(); ++i) EXPECT_EQ(known(ra[i].u_coeffs), known(rb[i].u_coeffs));
}

TEST(Engine, ShortVectorRuleDoesNotMatter) {
  const RationalSimplex p({qv({"0", "0"}), qv({"7/2", "1"}), qv({"1/3", "5/3"})});
  EngineOptions a, b;
  b.rule = ShortVectorRule::largest;
  EXPECT_EQ(known(EhrhartEngine(p, WeightPoly::one(2), a).compute({1}).front().u_coeffs),
            known(EhrhartEngine(p, WeightPoly::one(2), b).compute({1}).front().u_coeffs));
}

TEST(Engine, DegreeBound) {
  const auto p = standard_triangle();
  const WeightPoly h = decompose_monomial({2, 1});
  EhrhartEngine e(p, h, {});
  EXPECT_EQ(e.degree(), 5);
  EXPECT_EQ(e.compute().front().u_coeffs.size(), 6u);
}

TEST(Engine, OracleAgreementOnRationalTetrahedron) {
  const RationalSimplex p({qv({"0", "0", "0"}), qv({"1/2", "0", "0"}), qv({"0", "2/3", "0"}), qv({"1/3", "1/3", "3/4"})});
  const WeightPoly h = decompose_monomial({1, 1, 0});
  const auto qp = ehrhart_quasipolynomial(p, h);
  EXPECT_EQ(qp.period, 12);
  for (long n : {0L, 1L, 7L, 13L, 25L}) EXPECT_EQ(qp.evaluate(n), weighted_sum_oracle(p, h, n).value) << n;
}

TEST(Assemble, Examples) {
  const auto one = assemble_quasipoly({rats({"1", "3/2", "1/2"})}, 1);
  EXPECT_EQ(one.n_form[0], rats({"1", "3/2", "1/2"}));
  const auto two = assemble_quasipoly({rats({"1", "1"}), rats({"1", "1"})}, 2);
  EXPECT_EQ(two.n_form[0], rats({"1", "1/2"}));
  EXPECT_EQ(two.n_form[1], rats({"1/2", "1/2"}));
  for (long n = 0; n < 10; ++n) EXPECT_EQ(two.evaluate(n), Rational(n / 2 + 1));
  const auto constants = assemble_quasipoly({rats({"3"}), rats({"-1"}), rats({"1/2"})}, 3);
  EXPECT_EQ(constants.evaluate(4), -1);
  EXPECT_EQ(constants.evaluate_n_form(8), q("1/2"));
  EXPECT_ERRC(assemble_quasipoly({rats({"1", "1"}), rats({"1"})}, 2), Errc::inconsistent_degree);
  EXPECT_ERRC(assemble_quasipoly({rats({"1"})}, 2), Errc::inconsistent_degree);
}

TEST(MixedBrion, EdgeLineMatchesSliceOracle) {
  const auto tri = standard_triangle();
  for (long n = 1; n <= 4; ++n) {
    EXPECT_EQ(mixed_brion_constant_term_2d(tri, {qv({"1", "0"})}, n), slice_sum_oracle_2d(tri, qv({"1", "0"}), n));
    EXPECT_EQ(mixed_brion_constant_term_2d(tri, {}, n), Rational((n + 1) * (n + 2) / 2));
    EXPECT_EQ(mixed_brion_constant_term_2d(tri, {qv({"1", "0"}), qv({"0", "1"})}, n), make_rational(n * n, 2));
  }
  EXPECT_EQ(mixed_brion_constant_term_2d(tri, {qv({"1", "0"})}, 2), 3);
}

}  // namespace
}  // namespace ehrhart
