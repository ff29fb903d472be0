#pragma once

// Explicit local Euler-Maclaurin coefficients mu^L for planar cones and the
// check S^L(a) = sum_f mu(t(a,f)) I(f) coefficient by coefficient.

#include <optional>
#include <vector>

#include "ehrhart/barvinok.hpp"
#include "ehrhart/cone.hpp"
#include "ehrhart/error.hpp"
#include "ehrhart/mixed.hpp"
#include "ehrhart/series.hpp"

namespace ehrhart {

/// A rational scalar product on the plane.
class ScalarProduct2 {
 public:
  explicit ScalarProduct2(RatMatrix gram) : gram_(std::move(gram)) {
    if (gram_.rows() != 2 || gram_.cols() != 2) fail(Errc::dimension_not_2, "scalar product must be 2x2");
    if (gram_(0, 1) != gram_(1, 0)) fail(Errc::bad_args, "scalar product must be symmetric");
    if (gram_(0, 0) <= 0 || determinant(gram_) <= 0) fail(Errc::bad_args, "scalar product must be positive definite");
  }

  static ScalarProduct2 identity() { return ScalarProduct2(RatMatrix::identity(2)); }

  Rational operator()(const RatVector& x, const RatVector& y) const { return dot(x, gram_ * y); }
  const RatMatrix& gram() const { return gram_; }

 private:
  RatMatrix gram_;
};

/// L = R v_edge (an edge of the cone) or L = R direction (transverse).
struct PlaneLine {
  enum class Kind { edge, transverse } kind = Kind::edge;
  std::size_t edge = 0;
  RatVector direction;

  static PlaneLine along_edge(std::size_t i) { return {Kind::edge, i, {}}; }
  static PlaneLine transverse_to(RatVector u) { return {Kind::transverse, 0, std::move(u)}; }
};

namespace detail {

inline Rational det2(const RatVector& x, const RatVector& y) { return x[0] * y[1] - x[1] * y[0]; }

/// B(c tau) through tau^order.
inline BiSeries b_series(const Rational& c, int order) { return b_factor(c, Rational(0), order, 0); }

/// numerator(tau) / (c tau), which must be a power series; known through `order`.
inline BiSeries divide_by_linear(const BiSeries& numerator, const Rational& c, int order) {
  if (c == 0) fail(Errc::lambda_not_generic, "lambda vanishes on a divisor");
  BiSeries q = mul(numerator, inv_linear_factor(c, Rational(0), order + 1, 0), order);
  BiSeries out(0, order, 0);
  for (int j = q.tau_min(); j <= order; ++j) {
    const Rational v = q.coeff(j);
    if (j < 0) {
      if (v != 0) fail(Errc::not_regular, "mu series has a pole at tau^" + std::to_string(j));
    } else {
      out.at(j, 0) = v;
    }
  }
  return out;
}

struct EdgeData {
  RatVector v1, v2;  // v1 spans L
  Rational det;      // |det(v1, v2)|
};

inline EdgeData edge_data(const SimplicialAffineCone& a, std::size_t edge) {
  if (edge > 1) fail(Errc::bad_args, "edge index must be 0 or 1");
  EdgeData e{primitive_vector(a.generators[edge]), primitive_vector(a.generators[1 - edge]), 0};
  e.det = abs(det2(e.v1, e.v2));
  return e;
}

inline void require_plane_cone(const SimplicialAffineCone& a) {
  if (a.ambient_dimension() != 2 || a.dimension() != 2) fail(Errc::dimension_not_2, "planar solid cone expected");
  if (det2(a.generators[0], a.generators[1]) == 0) fail(Errc::not_solid, "cone generators are parallel");
}

}  // namespace detail

/// mu^L(a) along xi = tau*lambda, through tau^order. Depends only on the
/// generators of a.
inline BiSeries mu_L_dim2(const SimplicialAffineCone& a, const PlaneLine& line, const ScalarProduct2& q,
                          const RatVector& lam, int order) {
  detail::require_plane_cone(a);
  if (line.kind == PlaneLine::Kind::transverse) {
    const RatVector u = primitive_vector(line.direction);
    RatVector v1 = primitive_vector(a.generators[0]), v2 = primitive_vector(a.generators[1]);
    if (detail::det2(v1, v2) < 0) std::swap(v1, v2);
    const Rational d1 = detail::det2(u, v1), d2 = detail::det2(u, v2);
    if (d1 == 0 || d2 == 0) fail(Errc::bad_args, "direction is parallel to an edge");
    const BiSeries num = detail::b_series(dot(lam, v1) / d1, order + 1) - detail::b_series(dot(lam, v2) / d2, order + 1);
    return detail::divide_by_linear(num, dot(lam, u), order);
  }
  const auto e = detail::edge_data(a, line.edge);
  const Rational c1 = q(e.v1, e.v2) / q(e.v1, e.v1);
  const BiSeries num = detail::b_series((dot(lam, e.v2) - c1 * dot(lam, e.v1)) / e.det, order + 1) -
                       detail::b_series(dot(lam, e.v2) / e.det, order + 1);
  return detail::divide_by_linear(num, dot(lam, e.v1), order);
}

/// mu^{0}(t(a, f)) for the edge f spanning L: the transverse cone is
/// one-dimensional and its coefficient is B(<xi, v2 - C1 v1> / |det|).
inline BiSeries mu_edge_transverse_dim2(const SimplicialAffineCone& a, std::size_t edge, const ScalarProduct2& q,
                                        const RatVector& lam, int order) {
  detail::require_plane_cone(a);
  const auto e = detail::edge_data(a, edge);
  const Rational c1 = q(e.v1, e.v2) / q(e.v1, e.v1);
  return detail::b_series((dot(lam, e.v2) - c1 * dot(lam, e.v1)) / e.det, order);
}

/// S^L(a) along tau*lambda through tau^order (standard lattice).
inline BiSeries plane_mixed_series(const SimplicialAffineCone& a, const PlaneLine& line, const RatVector& lam,
                                   int order) {
  detail::require_plane_cone(a);
  const RatVector ell(2);
  if (line.kind == PlaneLine::Kind::transverse)
    return transverse_mixed_series_2d(a, line.direction, lam, ell, order, 0);
  if (line.edge > 1) fail(Errc::bad_args, "edge index must be 0 or 1");
  return mixed_exp_sum_series(SimplicialAffineCone::make(a.vertex, a.generators, a.sign), FaceSubset{{line.edge}},
                              LatticeBasis::standard(2), lam, ell, order, 0);
}

/// Sum of the face terms other than the vertex term:
/// transverse: I(a); edge: mu^{0}(t(a,f1)) I(f1) + I(a).
inline BiSeries euler_maclaurin_face_terms(const SimplicialAffineCone& a, const PlaneLine& line,
                                           const ScalarProduct2& q, const RatVector& lam, int order) {
  const RatVector ell(2);
  const auto cone = SimplicialAffineCone::make(a.vertex, a.generators);
  BiSeries total = integral_series(cone, lam, ell, order, 0);
  if (line.kind == PlaneLine::Kind::edge) {
    const auto e = detail::edge_data(a, line.edge);
    // I(x + R_+ v1) = -e^{<xi,x>} / <xi, v1>, lattice Z v1
    const Rational c = dot(lam, e.v1);
    if (c == 0) fail(Errc::lambda_not_generic, "lambda vanishes on the edge");
    BiSeries face = scale(mul(inv_linear_factor(c, Rational(0), order + 2, 0),
                              exp_factor(dot(lam, a.vertex), Rational(0), order + 2, 0), order + 1),
                          Rational(-1));
    total = add(total, mul(face, mu_edge_transverse_dim2(a, line.edge, q, lam, order + 2), order));
  }
  return total;
}

inline void require_integral_vertex(const SimplicialAffineCone& a) {
  if (!is_integral(a.vertex)) fail(Errc::not_integral_vertex, "closed forms need a lattice vertex");
}

/// S^L(a) - sum_f mu(t(a,f)) I(f), through tau^order; identically zero.
inline BiSeries verify_euler_maclaurin_dim2(const SimplicialAffineCone& a, const PlaneLine& line,
                                            const ScalarProduct2& q, const RatVector& lam, int order) {
  require_integral_vertex(a);
  const BiSeries lhs = plane_mixed_series(a, line, lam, order);
  const BiSeries vertex_term = mul(mu_L_dim2(a, line, q, lam, order + 2),
                                   exp_factor(dot(lam, a.vertex), Rational(0), order + 2, 0), order);
  const BiSeries rhs = add(vertex_term, euler_maclaurin_face_terms(a, line, q, lam, order));
  return lhs - rhs;
}

/// mu^L(a) recovered from the expansion: e^{-<xi,x>}(S^L(a) - other face terms).
/// Equals mu_L_dim2 of the cone at the origin whenever x is a lattice point.
inline BiSeries mu_from_expansion_dim2(const SimplicialAffineCone& a, const PlaneLine& line, const ScalarProduct2& q,
                                       const RatVector& lam, int order) {
  require_integral_vertex(a);
  const BiSeries rest = plane_mixed_series(a, line, lam, order) - euler_maclaurin_face_terms(a, line, q, lam, order);
  BiSeries shifted = mul(rest, exp_factor(-dot(lam, a.vertex), Rational(0), order + 3, 0), order);
  BiSeries out(0, order, 0);
  for (int j = shifted.tau_min(); j <= order; ++j) {
    const Rational v = shifted.coeff(j);
    if (j < 0) {
      if (v != 0) fail(Errc::not_regular, "expansion residual has a pole");
    } else {
      out.at(j, 0) = v;
    }
  }
  return out;
}

/// Largest |coefficient| of a series (0 for the zero series).
inline Rational max_abs_coefficient(const BiSeries& s) {
  Rational m = 0;
  for (int j = s.tau_min(); j <= s.tau_max(); ++j)
    for (int k = 0; k <= s.t_max(); ++k) m = std::max(m, Rational(abs(s.coeff(j, k))));
  return m;
}

}  // namespace ehrhart
