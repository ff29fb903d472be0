#pragma once

// Mixed sums S^L(a): integrate along L = span(v_I), sum over the projected
// lattice in the complementary directions. Patchwork coefficients rho_{d,q}
// combine them into the Barvinok valuation S^{(L,rho)}.

#include <map>
#include <optional>
#include <vector>

#include "ehrhart/barvinok.hpp"
#include "ehrhart/cone.hpp"
#include "ehrhart/error.hpp"
#include "ehrhart/series.hpp"

namespace ehrhart {

/// (-1)^(n-q) C(n-1, q-1).
inline Integer patchwork_coefficient(long n, long q) {
  if (q < 1 || q > n) fail(Errc::bad_args, "patchwork coefficient needs 1 <= q <= n");
  Integer c = binomial(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(q - 1));
  return (n - q) % 2 == 0 ? c : Integer(-c);
}

/// Faces of codimension <= r of a d-dimensional simplicial cone with their
/// patchwork coefficients. For r >= d every face carries coefficient 0 except
/// the empty one (the exact sum is used directly).
struct PatchworkFamily {
  long d = 0;
  long r = 0;
  std::vector<FaceSubset> members;
  std::map<FaceSubset, Integer> coefficients;

  static PatchworkFamily make(long d, long r) {
    if (d < 0) fail(Errc::bad_args, "negative dimension");
    PatchworkFamily f;
    f.d = d;
    f.r = r;
    f.members = face_family(static_cast<std::size_t>(d), r);
    const long q = d - r;
    for (const auto& m : f.members) {
      if (q >= 1)
        f.coefficients[m] = patchwork_coefficient(static_cast<long>(m.size()), q);
      else
        f.coefficients[m] = m.size() == 0 ? 1 : 0;
    }
    return f;
  }
};

/// S^{L_I}(s + c) for a fixed solid simplicial cone c and face I, with the
/// vertex s supplied per evaluation. Geometry and, per direction pair, the
/// vertex-independent factors are computed once.
class FaceValuationPlan {
 public:
  FaceValuationPlan(const std::vector<RatVector>& generators, const FaceSubset& face, const LatticeBasis& lattice,
                    ShortVectorRule rule = ShortVectorRule::smallest)
      : face_(face), d_(lattice.dimension()) {
    if (generators.size() != d_) fail(Errc::not_solid, "face valuation needs a solid cone");
    const SimplicialAffineCone apex{RatVector(d_), generators, 1};
    const SplitData split = split_cone_along_face(apex, face, lattice);
    complement_ = split.complement;
    generators_ = generators;
    inverse_generators_ = inverse(apex.generator_matrix());
    const std::size_t k = face.size();
    volume_ = k == 0 ? Rational(1) : Rational(1) / abs(split.face_lattice.determinant());

    std::vector<RatVector> unit;
    RatMatrix embedding(d_, complement_.size());
    for (std::size_t j = 0; j < complement_.size(); ++j) {
      RatVector e(complement_.size());
      e[j] = 1;
      unit.push_back(e);
      embedding.set_column(j, generators[complement_[j]]);
    }
    quotient_.emplace(SimplicialAffineCone{RatVector(complement_.size()), unit, 1}, split.quotient_lattice,
                      embedding, rule);
  }

  const FaceSubset& face() const { return face_; }

  struct Prepared {
    BiSeries integral_part;  // (-1)^k vol prod 1/<xi, v_i>, i in I
    ConeSumPlan::Denominators quotient;
    RatVector lam;
    RatVector ell;
    int tau_max = 0;
    int t_max = 0;
  };

  Prepared prepare(const RatVector& lam, const RatVector& ell, int tau_max, int t_max) const {
    const long k = static_cast<long>(face_.size());
    const long rest = static_cast<long>(d_) - k;
    const int integral_min = static_cast<int>(-k * (1 + t_max));
    const int quotient_min = static_cast<int>(-rest * (1 + t_max));
    Prepared p;
    p.lam = lam;
    p.ell = ell;
    p.tau_max = tau_max;
    p.t_max = t_max;
    std::vector<Rational> ct, cl;
    std::vector<int> mins;
    for (auto i : face_.indices) {
      ct.push_back(dot(lam, generators_[i]));
      cl.push_back(dot(ell, generators_[i]));
      if (ct.back() == 0) fail(Errc::lambda_not_generic, "lambda vanishes on a face generator");
      mins.push_back(inv_linear_min_degree(cl.back(), t_max));
    }
    BiSeries prod = product_of_factors(
        mins, [&](std::size_t i, int need) { return inv_linear_factor(ct[i], cl[i], need, t_max); },
        tau_max - quotient_min, t_max);
    p.integral_part = scale(prod, k % 2 == 0 ? volume_ : Rational(-volume_));
    p.quotient = quotient_->denominators(lam, ell, tau_max - integral_min, t_max);
    return p;
  }

  BiSeries series(const Prepared& p, const RatVector& vertex) const {
    if (vertex.size() != d_) fail(Errc::dimension_mismatch, "vertex dimension");
    const RatVector sigma = inverse_generators_ * vertex;
    RatVector s1(d_);
    for (auto i : face_.indices) s1 = s1 + sigma[i] * generators_[i];
    RatVector s2_coords;
    for (auto i : complement_) s2_coords.push_back(sigma[i]);
    const BiSeries& ip = p.integral_part;
    BiSeries e = exp_factor(dot(p.lam, s1), dot(p.ell, s1), ip.tau_max() - ip.tau_min(), p.t_max);
    BiSeries integral = mul(ip, e, ip.tau_max());
    BiSeries discrete = quotient_->series(p.quotient, s2_coords);
    return mul(integral, discrete, p.tau_max);
  }

  BiSeries series(const RatVector& vertex, const RatVector& lam, const RatVector& ell, int tau_max, int t_max) const {
    return series(prepare(lam, ell, tau_max, t_max), vertex);
  }

 private:
  FaceSubset face_;
  std::size_t d_;
  std::vector<std::size_t> complement_;
  std::vector<RatVector> generators_;
  RatMatrix inverse_generators_;
  Rational volume_;
  std::optional<ConeSumPlan> quotient_;
};

/// S^{L_I}(a)(tau*lambda + t*ell), L_I = span{v_i : i in I}.
inline BiSeries mixed_exp_sum_series(const SimplicialAffineCone& a, const FaceSubset& face, const LatticeBasis& lattice,
                                     const RatVector& lam, const RatVector& ell, int tau_max, int t_max) {
  FaceValuationPlan plan(a.generators, face, lattice);
  BiSeries s = plan.series(a.vertex, lam, ell, tau_max, t_max);
  return a.sign < 0 ? scale(s, Rational(-1)) : s;
}

/// sum_I rho(L_I) S^{L_I}(s + c) over the faces of codimension <= r, prepared
/// like FaceValuationPlan. For r >= d this is the exact sum S.
class ValuationPlan {
 public:
  ValuationPlan(const std::vector<RatVector>& generators, long r, const LatticeBasis& lattice,
                ShortVectorRule rule = ShortVectorRule::smallest) {
    const long d = static_cast<long>(lattice.dimension());
    if (r < 0) fail(Errc::bad_codimension, "codimension must be nonnegative");
    if (r >= d) {
      terms_.push_back({Rational(1), FaceValuationPlan(generators, FaceSubset{}, lattice, rule)});
      return;
    }
    const auto family = PatchworkFamily::make(d, r);
    for (const auto& face : family.members)
      terms_.push_back({Rational(family.coefficients.at(face)), FaceValuationPlan(generators, face, lattice, rule)});
  }

  using Prepared = std::vector<FaceValuationPlan::Prepared>;

  Prepared prepare(const RatVector& lam, const RatVector& ell, int tau_max, int t_max) const {
    Prepared p;
    for (const auto& t : terms_) p.push_back(t.plan.prepare(lam, ell, tau_max, t_max));
    return p;
  }

  BiSeries series(const Prepared& p, const RatVector& vertex) const {
    std::optional<BiSeries> total;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      BiSeries s = scale(terms_[i].plan.series(p[i], vertex), terms_[i].coefficient);
      total = total ? add(*total, s) : s;
    }
    return *total;
  }

 private:
  struct Term {
    Rational coefficient;
    FaceValuationPlan plan;
  };
  std::vector<Term> terms_;
};

/// S^{(L,rho)}(a) for the family of faces of codimension <= r.
inline BiSeries barvinok_valuation_series(const SimplicialAffineCone& a, long r, const LatticeBasis& lattice,
                                          const RatVector& lam, const RatVector& ell, int tau_max, int t_max) {
  ValuationPlan plan(a.generators, r, lattice);
  BiSeries s = plan.series(plan.prepare(lam, ell, tau_max, t_max), a.vertex);
  return a.sign < 0 ? scale(s, Rational(-1)) : s;
}

/// S^L(a) in the plane for L = R u transverse to both edges of a, via
/// inclusion-exclusion into cones having u as an edge. Standard lattice.
inline BiSeries transverse_mixed_series_2d(const SimplicialAffineCone& a, const RatVector& direction,
                                           const RatVector& lam, const RatVector& ell, int tau_max, int t_max) {
  if (a.ambient_dimension() != 2 || a.dimension() != 2) fail(Errc::dimension_not_2, "transverse series is planar");
  auto det2 = [](const RatVector& x, const RatVector& y) -> Rational { return x[0] * y[1] - x[1] * y[0]; };
  RatVector v1 = a.generators[0], v2 = a.generators[1];
  RatVector u = primitive_vector(direction);
  if (det2(v1, v2) < 0) std::swap(v1, v2);
  if (det2(u, v1) == 0 || det2(u, v2) == 0) fail(Errc::bad_args, "direction is parallel to an edge");
  if (det2(u, v2) < 0) u = Rational(-1) * u;
  const LatticeBasis z2 = LatticeBasis::standard(2);
  const FaceSubset along_u{{0}};
  auto part = [&](const RatVector& v) {
    return mixed_exp_sum_series(SimplicialAffineCone::make(a.vertex, {u, v}), along_u, z2, lam, ell, tau_max, t_max);
  };
  BiSeries with_v2 = part(v2);
  BiSeries with_v1 = part(v1);
  const bool inside = det2(v1, u) > 0;  // u strictly between v1 and v2
  BiSeries total = inside ? add(with_v2, with_v1) : add(with_v2, scale(with_v1, Rational(-1)));
  if (inside) {
    // subtract the ray s + R_+ u, which lies in a single slice
    if (is_integer(det2(u, a.vertex))) {
      const Rational cu = dot(lam, u);
      if (cu == 0) fail(Errc::lambda_not_generic, "lambda vanishes on the direction");
      BiSeries ray = mul(scale(inv_linear_factor(cu, dot(ell, u), tau_max + 1 + t_max, t_max), Rational(-1)),
                         exp_factor(dot(lam, a.vertex), dot(ell, a.vertex), tau_max + 1 + t_max, t_max), tau_max);
      total = add(total, scale(ray, Rational(-1)));
    }
  }
  // the ray s + R_+ v1 meets every slice in a point and contributes nothing
  return a.sign < 0 ? scale(total, Rational(-1)) : total;
}

}  // namespace ehrhart
