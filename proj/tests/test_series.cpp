#include <gtest/gtest.h>

#include "ehrhart/random_instances.hpp"
#include "ehrhart/series.hpp"
#include "test_support.hpp"

namespace ehrhart {
namespace {

using test::q;

BiSeries monomial(const Rational& c, int j, int k, int tau_max, int t_max) {
  BiSeries s(j, tau_max, t_max);
  s.at(j, k) = c;
  return s;
}

BiSeries random_series(testing::Rng& rng, int tau_min, int tau_max, int t_max) {
  BiSeries s(tau_min, tau_max, t_max);
  for (int j = tau_min; j <= tau_max; ++j)
    for (int k = 0; k <= t_max; ++k) s.at(j, k) = testing::random_rational(rng, 6, 5);
  return s;
}

TEST(BiSeriesArith, InverseTimesTau) {
  const BiSeries p = mul(monomial(1, -1, 0, 3, 0), monomial(1, 1, 0, 5, 0), 2);
  EXPECT_EQ(p.coeff(0), 1);
  EXPECT_EQ(p.coeff(1), 0);
  EXPECT_EQ(p.coeff(-1), 0);
}

TEST(BiSeriesArith, TIsNilpotent) {
  BiSeries one_plus_t(0, 3, 1);
  one_plus_t.at(0, 0) = 1;
  one_plus_t.at(0, 1) = 1;
  const BiSeries sq = mul(one_plus_t, one_plus_t, 3);
  EXPECT_EQ(sq.coeff(0, 0), 1);
  EXPECT_EQ(sq.coeff(0, 1), 2);
  EXPECT_EQ(sq.t_max(), 1);
}

TEST(BiSeriesArith, ShiftTau) {
  BiSeries s(0, 1, 0);
  s.at(0, 0) = q("1/2");
  s.at(1, 0) = q("-1/12");
  const BiSeries r = shift_tau(s, 3);
  EXPECT_EQ(r.coeff(3), q("1/2"));
  EXPECT_EQ(r.coeff(4), q("-1/12"));
  EXPECT_EQ(r.coeff(2), 0);
}

TEST(BiSeriesArith, WindowIsEnforced) {
  const BiSeries a(0, 2, 0);
  EXPECT_ERRC(a.coeff(3), Errc::window_mismatch);
  EXPECT_ERRC(mul(a, BiSeries(-1, 2, 0), 2), Errc::window_mismatch);
  EXPECT_ERRC(add(BiSeries(0, 2, 0), BiSeries(0, 2, 1)), Errc::window_mismatch);
}

TEST(BiSeriesArith, DumpFormat) {
  BiSeries s(-1, 1, 1);
  s.at(-1, 0) = -1;
  s.at(0, 1) = q("3/4");
  EXPECT_EQ(s.dump(), "tau^-1 t^0: -1\ntau^0 t^1: 3/4\n");
}

TEST(BiSeriesArith, MulAssociativeAndCommutative) {
  testing::Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int tm = static_cast<int>(testing::uniform(rng, 0, 2));
    const BiSeries a = random_series(rng, -2, 4, tm);
    const BiSeries b = random_series(rng, -1, 4, tm);
    const BiSeries c = random_series(rng, 0, 4, tm);
    EXPECT_TRUE(equal_on_common_window(mul(a, b), mul(b, a)));
    EXPECT_TRUE(equal_on_common_window(mul(mul(a, b), c), mul(a, mul(b, c))));
  }
}

TEST(Bernoulli, Values) {
  EXPECT_EQ(bernoulli(0), 1);
  EXPECT_EQ(bernoulli(1), q("-1/2"));
  EXPECT_EQ(bernoulli(2), q("1/6"));
  EXPECT_EQ(bernoulli(3), 0);
  EXPECT_EQ(bernoulli(4), q("-1/30"));
  EXPECT_EQ(bernoulli(12), q("-691/2730"));
}

TEST(GeometricFactor, UnitSlope) {
  const BiSeries g = geometric_exp_factor(1, 0, 3, 0);
  EXPECT_EQ(g.coeff(-1), -1);
  EXPECT_EQ(g.coeff(0), q("1/2"));
  EXPECT_EQ(g.coeff(1), q("-1/12"));
  EXPECT_EQ(g.coeff(2), 0);
  EXPECT_EQ(g.coeff(3), q("1/720"));
}

TEST(GeometricFactor, RationalSlope) {
  const BiSeries g = geometric_exp_factor(q("3/2"), 0, 1, 0);
  EXPECT_EQ(g.coeff(-1), q("-2/3"));
  EXPECT_EQ(g.coeff(0), q("1/2"));
  EXPECT_EQ(g.coeff(1), q("-1/8"));
}

TEST(GeometricFactor, WithTDirection) {
  const BiSeries g = geometric_exp_factor(1, 1, 1, 1);
  EXPECT_EQ(g.coeff(-1, 0), -1);
  EXPECT_EQ(g.coeff(-2, 1), 1);
  EXPECT_EQ(g.coeff(0, 1), q("-1/12"));
  EXPECT_ERRC(geometric_exp_factor(0, 1, 1, 1), Errc::zero_tau_coefficient);
}

TEST(GeometricFactor, ReflectionIdentity) {
  testing::Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Rational c = testing::random_rational(rng, 7, 6);
    if (c == 0) c = 1;
    const Rational ct = testing::random_rational(rng, 5, 4);
    const int tm = static_cast<int>(testing::uniform(rng, 0, 2));
    const BiSeries s = add(geometric_exp_factor(c, ct, 8, tm), geometric_exp_factor(-c, -ct, 8, tm));
    EXPECT_TRUE(equal_on_common_window(s, BiSeries::constant(1, 8, tm)));
  }
}

TEST(GeometricFactor, HolomorphicPart) {
  for (const char* c : {"1", "-2", "5/3"}) {
    const BiSeries b = add(geometric_exp_factor(q(c), 0, 4, 0), inv_linear_factor(q(c), 0, 4, 0));
    EXPECT_EQ(b.coeff(-1), 0);
    EXPECT_EQ(b.coeff(0), q("1/2"));
  }
}

TEST(ExpFactor, Examples) {
  const BiSeries one = exp_factor(0, 0, 3, 0);
  EXPECT_EQ(one.coeff(0), 1);
  EXPECT_EQ(one.coeff(1), 0);
  const BiSeries e = exp_factor(1, 0, 2, 0);
  EXPECT_EQ(e.coeff(0), 1);
  EXPECT_EQ(e.coeff(1), 1);
  EXPECT_EQ(e.coeff(2), q("1/2"));
  const BiSeries et = exp_factor(1, 1, 1, 1);
  EXPECT_EQ(et.coeff(0, 0), 1);
  EXPECT_EQ(et.coeff(0, 1), 1);
  EXPECT_EQ(et.coeff(1, 1), 1);
}

TEST(ExpFactor, Additive) {
  testing::Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Rational a = testing::random_rational(rng, 5, 4), b = testing::random_rational(rng, 5, 4);
    const Rational at = testing::random_rational(rng, 5, 4), bt = testing::random_rational(rng, 5, 4);
    EXPECT_TRUE(equal_on_common_window(mul(exp_factor(a, at, 6, 2), exp_factor(b, bt, 6, 2), 6),
                                       exp_factor(a + b, at + bt, 6, 2)));
  }
}

TEST(InverseLinear, Examples) {
  const BiSeries a = inv_linear_factor(2, 0, 2, 0);
  EXPECT_EQ(a.coeff(-1), q("1/2"));
  EXPECT_EQ(a.coeff(0), 0);
  const BiSeries b = inv_linear_factor(1, 1, 1, 2);
  EXPECT_EQ(b.coeff(-1, 0), 1);
  EXPECT_EQ(b.coeff(-2, 1), -1);
  EXPECT_EQ(b.coeff(-3, 2), 1);
  EXPECT_EQ(inv_linear_factor(-1, 0, 0, 0).coeff(-1), -1);
  EXPECT_ERRC(inv_linear_factor(0, 0, 0, 0), Errc::zero_tau_coefficient);
}

TEST(InverseLinear, TimesLinearIsOne) {
  BiSeries linear(0, 6, 2);
  linear.at(1, 0) = q("3/2");
  linear.at(0, 1) = q("-2/5");
  const BiSeries inv = inv_linear_factor(q("3/2"), q("-2/5"), 6, 2);
  EXPECT_TRUE(equal_on_common_window(mul(linear, inv, 3), BiSeries::constant(1, 3, 2)));
}

}  // namespace
}  // namespace ehrhart
