#include <gtest/gtest.h>

#include "ehrhart/mu_dim2.hpp"
#include "ehrhart/random_instances.hpp"
#include "test_support.hpp"

namespace ehrhart {
namespace {

using test::q;
using test::qv;

ScalarProduct2 skewed() { return ScalarProduct2(RatMatrix::from_rows({{2, 1}, {1, 3}})); }

bool is_zero_series(const BiSeries& s) { return max_abs_coefficient(s) == 0; }

TEST(ScalarProduct, Validation) {
  EXPECT_EQ(skewed()(qv({"1", "0"}), qv({"0", "1"})), 1);
  EXPECT_ERRC(ScalarProduct2(RatMatrix::from_rows({{1, 2}, {0, 1}})), Errc::bad_args);
  EXPECT_ERRC(ScalarProduct2(RatMatrix::from_rows({{1, 2}, {2, 1}})), Errc::bad_args);
  EXPECT_ERRC(ScalarProduct2(RatMatrix::identity(3)), Errc::dimension_not_2);
}

TEST(Mu, TransverseQuadrantConstantTerm) {
  const auto quad = SimplicialAffineCone::make(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})});
  const auto line = PlaneLine::transverse_to(qv({"1", "1"}));
  for (const char* l2 : {"2", "5", "-3"}) {
    const BiSeries mu = mu_L_dim2(quad, line, ScalarProduct2::identity(), qv({"1", l2}), 3);
    EXPECT_EQ(mu.coeff(0), q("1/12"));
  }
}

TEST(Mu, TransverseConstantTermIndependentOfLambda) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 15; ++trial) {
    const auto a = testing::random_cone(rng, 2, 5, 1);
    const RatVector u = testing::random_integer_vector(rng, 2, 4);
    if (is_zero(u)) continue;
    const auto line = PlaneLine::transverse_to(u);
    const std::vector<RatVector> avoid{a.generators[0], a.generators[1], u};
    try {
      const BiSeries m1 = mu_L_dim2(a, line, ScalarProduct2::identity(), testing::random_generic_direction(rng, 2, avoid), 2);
      const BiSeries m2 = mu_L_dim2(a, line, ScalarProduct2::identity(), testing::random_generic_direction(rng, 2, avoid), 2);
      EXPECT_EQ(m1.coeff(0), m2.coeff(0));
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::bad_args);  // u parallel to an edge
    }
  }
}

TEST(Mu, EdgeWithOrthogonalGeneratorsVanishes) {
  const auto quad = SimplicialAffineCone::make(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})});
  EXPECT_TRUE(is_zero_series(mu_L_dim2(quad, PlaneLine::along_edge(0), ScalarProduct2::identity(), qv({"2", "7"}), 5)));
}

TEST(EulerMaclaurin, EdgeExample) {
  const auto a = SimplicialAffineCone::make(qv({"0", "0"}), {qv({"1", "0"}), qv({"1", "2"})});
  for (const auto& qp : {ScalarProduct2::identity(), skewed()})
    EXPECT_TRUE(is_zero_series(verify_euler_maclaurin_dim2(a, PlaneLine::along_edge(0), qp, qv({"1", "1"}), 4)));
}

TEST(EulerMaclaurin, TransverseExample) {
  const auto a = SimplicialAffineCone::make(qv({"0", "0"}), {qv({"1", "0"}), qv({"0", "1"})});
  EXPECT_TRUE(is_zero_series(verify_euler_maclaurin_dim2(a, PlaneLine::transverse_to(qv({"1", "1"})),
                                                         ScalarProduct2::identity(), qv({"1", "3"}), 4)));
}

TEST(EulerMaclaurin, ShiftedVertexKeepsMu) {
  const auto at0 = SimplicialAffineCone::make(qv({"0", "0"}), {qv({"1", "0"}), qv({"1", "2"})});
  const auto at1 = SimplicialAffineCone::make(qv({"1", "1"}), {qv({"1", "0"}), qv({"1", "2"})});
  const RatVector lam = qv({"1", "1"});
  for (const auto& line : {PlaneLine::along_edge(0), PlaneLine::along_edge(1), PlaneLine::transverse_to(qv({"0", "1"}))}) {
    EXPECT_TRUE(is_zero_series(verify_euler_maclaurin_dim2(at1, line, skewed(), lam, 4)));
    EXPECT_TRUE(equal_on_common_window(mu_from_expansion_dim2(at1, line, skewed(), lam, 4),
                                       mu_from_expansion_dim2(at0, line, skewed(), lam, 4)));
    EXPECT_TRUE(equal_on_common_window(mu_from_expansion_dim2(at0, line, skewed(), lam, 4),
                                       mu_L_dim2(at0, line, skewed(), lam, 4)));
  }
}

TEST(EulerMaclaurin, RandomCones) {
  testing::Rng rng(77);
  int checked = 0;
  while (checked < 20) {
    auto a = testing::random_cone(rng, 2, 5, 1);
    a.vertex = testing::random_integer_vector(rng, 2, 4);
    const RatVector u = testing::random_integer_vector(rng, 2, 5);
    const auto det_u = [&](const RatVector& v) -> Rational { return u[0] * v[1] - u[1] * v[0]; };
    if (is_zero(u) || det_u(a.generators[0]) == 0 || det_u(a.generators[1]) == 0) continue;
    const RatVector lam = testing::random_generic_direction(rng, 2, {a.generators[0], a.generators[1], u});
    for (const auto& qp : {ScalarProduct2::identity(), skewed()})
      for (const auto& line : {PlaneLine::along_edge(0), PlaneLine::along_edge(1), PlaneLine::transverse_to(u)})
        EXPECT_TRUE(is_zero_series(verify_euler_maclaurin_dim2(a, line, qp, lam, 6)));
    ++checked;
  }
}

TEST(EulerMaclaurin, RequiresLatticeVertex) {
  const auto a = SimplicialAffineCone::make(qv({"1/2", "0"}), {qv({"1", "0"}), qv({"0", "1"})});
  EXPECT_ERRC(verify_euler_maclaurin_dim2(a, PlaneLine::along_edge(0), ScalarProduct2::identity(), qv({"1", "2"}), 2),
              Errc::not_integral_vertex);
  const auto flat = SimplicialAffineCone{qv({"0", "0", "0"}), {qv({"1", "0", "0"})}, 1};
  EXPECT_ERRC(mu_L_dim2(flat, PlaneLine::along_edge(0), ScalarProduct2::identity(), qv({"1", "2", "3"}), 2),
              Errc::dimension_not_2);
}

}  // namespace
}  // namespace ehrhart
