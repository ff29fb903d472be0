#pragma once

// Signed unimodular decomposition of simplicial cones (carried out on the
// dual cone) and the series of the exponential sum S(a) and the exponential
// integral I(a) along xi = tau*lambda + t*ell.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ehrhart/cone.hpp"
#include "ehrhart/error.hpp"
#include "ehrhart/linalg.hpp"
#include "ehrhart/series.hpp"

namespace ehrhart {

/// Primitive generators of {xi : <xi, v_i> >= 0 for all i}: the rows of the
/// inverse generator matrix.
inline std::vector<RatVector> dual_cone(std::span<const RatVector> generators) {
  if (generators.empty()) fail(Errc::not_solid, "dual of an empty cone");
  const std::size_t d = generators.front().size();
  if (generators.size() != d) fail(Errc::not_solid, "dual_cone needs d generators in dimension d");
  RatMatrix g = RatMatrix::from_columns(generators, d);
  if (determinant(g) == 0) fail(Errc::not_solid, "generators are dependent");
  RatMatrix inv = inverse(g);
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(primitive_vector(inv.row(i)));
  return out;
}

inline std::vector<RatVector> dual_cone(const std::vector<RatVector>& generators) {
  return dual_cone(std::span<const RatVector>(generators));
}

/// Which admissible short vector drives an index-reduction step. Both give
/// valid decompositions; the second exists to cross-check sign bookkeeping.
enum class ShortVectorRule { smallest, largest };

struct SignedConeList {
  std::vector<SimplicialAffineCone> cones;
  LatticeBasis lattice;
};

namespace detail {

/// Integer r with r^d <= n < (r+1)^d.
inline Integer integer_root(const Integer& n, unsigned long d) {
  Integer r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), d);
  return r;
}

/// Nonzero z = W alpha in Z^d with ind * |alpha_i|^d <= 1 for all i (Minkowski
/// guarantees one). Returns alpha.
inline RatVector short_vector(const RatMatrix& w, const Integer& index, ShortVectorRule rule) {
  const std::size_t d = w.rows();
  // alpha ranges over W^{-1} Z^d; take a lower-triangular basis of it.
  const LatticeBasis alpha_lattice = lattice_from_generators(inverse(w));
  const RatMatrix& h = alpha_lattice.basis();
  const Integer root = std::max(integer_root(index, d), Integer(1));
  const Rational bound(Integer(1), root);  // ind^{-1/d} <= 1/floor(ind^{1/d})

  std::optional<RatVector> best;
  Rational best_norm;
  RatVector alpha(d);
  std::vector<Integer> coeff(d);

  auto admissible = [&](const RatVector& a) {
    for (const auto& x : a)
      if (Rational(index) * pow(abs(x), static_cast<unsigned long>(d)) > 1) return false;
    return !is_zero(a);
  };
  auto better = [&](const RatVector& a, const Rational& norm) {
    if (!best) return true;
    if (norm != best_norm) return rule == ShortVectorRule::smallest ? norm < best_norm : norm > best_norm;
    return a < *best;
  };

  std::function<void(std::size_t)> descend = [&](std::size_t i) {
    if (i == d) {
      if (!admissible(alpha)) return;
      Rational norm = 0;
      for (const auto& x : alpha) norm = std::max(norm, Rational(abs(x)));
      if (better(alpha, norm)) {
        best = alpha;
        best_norm = norm;
      }
      return;
    }
    Rational partial = 0;
    for (std::size_t j = 0; j < i; ++j) partial += h(i, j) * coeff[j];
    const Integer lo = ceil_of((-bound - partial) / h(i, i));
    const Integer hi = floor_of((bound - partial) / h(i, i));
    for (Integer c = lo; c <= hi; ++c) {
      coeff[i] = c;
      alpha[i] = partial + h(i, i) * c;
      descend(i + 1);
    }
  };
  descend(0);
  ensure(best.has_value(), "Minkowski box contains no nonzero lattice point");
  return *best;
}

inline void decompose_dual(const RatMatrix& w, int sign, ShortVectorRule rule, std::vector<std::pair<int, RatMatrix>>& out) {
  const Integer index = abs(Integer(determinant(w)));
  ensure(index != 0, "degenerate cone in decomposition");
  if (index == 1) {
    out.emplace_back(sign, w);
    return;
  }
  RatVector alpha = short_vector(w, index, rule);
  if (std::none_of(alpha.begin(), alpha.end(), [](const Rational& x) { return x > 0; }))
    for (auto& x : alpha) x = -x;
  const RatVector z = w * alpha;
  ensure(is_integral(z), "short vector is not integral");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0) continue;
    RatMatrix wi = w;
    wi.set_column(i, z);
    const Integer sub_index = abs(Integer(determinant(wi)));
    ensure(sub_index < index, "index did not decrease");
    decompose_dual(wi, alpha[i] > 0 ? sign : -sign, rule, out);
  }
}

}  // namespace detail

/// Signed unimodular cones with sum_i eps_i [s + c_i] = [s + c] modulo cones
/// containing lines. Generators are expressed in ambient coordinates and are
/// unimodular with respect to `lattice`.
inline SignedConeList unimodular_decompose(const SimplicialAffineCone& c, const LatticeBasis& lattice,
                                           ShortVectorRule rule = ShortVectorRule::smallest) {
  const std::size_t d = c.ambient_dimension();
  if (c.dimension() != d) fail(Errc::not_solid, "decomposition needs a solid cone");
  if (lattice.dimension() != d) fail(Errc::dimension_mismatch, "lattice dimension");
  SignedConeList result{{}, lattice};
  if (d == 0) {
    result.cones.push_back(SimplicialAffineCone{c.vertex, {}, c.sign});
    return result;
  }
  // Lattice coordinates: the lattice becomes Z^d.
  const RatMatrix to_lattice = inverse(lattice.basis());
  std::vector<RatVector> gens;
  for (const auto& g : c.generators) gens.push_back(primitive_vector(to_lattice * g));
  const auto duals = dual_cone(gens);
  std::vector<std::pair<int, RatMatrix>> pieces;
  detail::decompose_dual(RatMatrix::from_columns(duals, d), c.sign, rule, pieces);
  for (const auto& [s, w] : pieces) {
    const RatMatrix primal = inverse(w);  // rows are the primal generators
    std::vector<RatVector> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back(lattice.basis() * primal.row(i));
    result.cones.push_back(SimplicialAffineCone{c.vertex, std::move(out), s});
  }
  return result;
}

/// Decomposition of one cone (fixed generators, varying vertex) prepared for
/// repeated evaluation of S(s + c)(tau*lambda + t*ell).
class ConeSumPlan {
 public:
  /// `generators` and later vertices are in ambient coordinates; `embedding`
  /// maps them to the space where lambda and ell act (identity when omitted).
  ConeSumPlan(const SimplicialAffineCone& cone, const LatticeBasis& lattice,
              ShortVectorRule rule = ShortVectorRule::smallest)
      : ConeSumPlan(cone, lattice, RatMatrix::identity(cone.ambient_dimension()), rule) {}

  ConeSumPlan(const SimplicialAffineCone& cone, const LatticeBasis& lattice, RatMatrix embedding,
              ShortVectorRule rule = ShortVectorRule::smallest)
      : dim_(cone.ambient_dimension()), lattice_(lattice), embedding_(std::move(embedding)) {
    if (embedding_.cols() != dim_) fail(Errc::dimension_mismatch, "embedding shape");
    auto list = unimodular_decompose(cone, lattice, rule);
    if (dim_ == 0) return;
    const RatMatrix to_lattice = inverse(lattice.basis());
    for (const auto& c : list.cones) {
      Piece p;
      p.sign = c.sign;
      RatMatrix u(dim_, dim_);
      for (std::size_t j = 0; j < dim_; ++j) u.set_column(j, to_lattice * c.generators[j]);
      p.inverse = inverse(u);
      p.ambient_generators = c.generators;
      pieces_.push_back(std::move(p));
    }
  }

  std::size_t dimension() const { return dim_; }
  std::size_t piece_count() const { return dim_ == 0 ? 1 : pieces_.size(); }

  /// Products of geometric factors, one per unimodular piece, for a fixed
  /// direction pair; independent of the vertex.
  struct Denominators {
    std::vector<BiSeries> per_piece;
    RatVector lam;  // pulled back through the embedding
    RatVector ell;
    int tau_max = 0;
    int t_max = 0;
  };

  Denominators denominators(const RatVector& lam, const RatVector& ell, int tau_max, int t_max) const {
    Denominators den;
    den.lam = pullback(lam);
    den.ell = pullback(ell);
    den.tau_max = tau_max;
    den.t_max = t_max;
    for (const auto& p : pieces_) {
      std::vector<Rational> ct, cl;
      std::vector<int> mins;
      for (const auto& g : p.ambient_generators) {
        ct.push_back(dot(den.lam, g));
        cl.push_back(dot(den.ell, g));
        if (ct.back() == 0) fail(Errc::lambda_not_generic, "lambda vanishes on a unimodular generator");
        mins.push_back(inv_linear_min_degree(cl.back(), t_max));
      }
      den.per_piece.push_back(product_of_factors(
          mins, [&](std::size_t i, int need) { return geometric_exp_factor(ct[i], cl[i], need, t_max); }, tau_max,
          t_max));
    }
    return den;
  }

  /// S(vertex + c) along the directions of `den`.
  BiSeries series(const Denominators& den, const RatVector& vertex) const {
    if (vertex.size() != dim_) fail(Errc::dimension_mismatch, "vertex dimension");
    if (dim_ == 0) return BiSeries::constant(Rational(1), den.tau_max, den.t_max);
    const RatMatrix to_lattice = inverse(lattice_.basis());
    const RatVector y = to_lattice * vertex;
    std::optional<BiSeries> total;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      const RatVector sigma = p.inverse * y;
      // lowest lattice point: sum_j ceil(sigma_j) w_j
      RatVector apex(dim_);
      for (std::size_t j = 0; j < dim_; ++j) apex = apex + Rational(ceil_of(sigma[j])) * p.ambient_generators[j];
      const BiSeries& d = den.per_piece[i];
      BiSeries e = exp_factor(dot(den.lam, apex), dot(den.ell, apex), den.tau_max - d.tau_min(), den.t_max);
      BiSeries term = mul(d, e, den.tau_max);
      if (p.sign < 0) term = scale(term, Rational(-1));
      total = total ? add(*total, term) : term;
    }
    return *total;
  }

  BiSeries series(const RatVector& vertex, const RatVector& lam, const RatVector& ell, int tau_max, int t_max) const {
    return series(denominators(lam, ell, tau_max, t_max), vertex);
  }

 private:
  struct Piece {
    int sign = 1;
    RatMatrix inverse;  // of the generator matrix in lattice coordinates
    std::vector<RatVector> ambient_generators;
  };

  RatVector pullback(const RatVector& v) const {
    if (v.size() != embedding_.rows()) fail(Errc::dimension_mismatch, "direction vector dimension");
    return embedding_.transpose() * v;
  }

  std::size_t dim_;
  LatticeBasis lattice_;
  RatMatrix embedding_;
  std::vector<Piece> pieces_;
};

/// Series of S(a)(tau*lambda + t*ell) for a solid simplicial affine cone.
inline BiSeries exp_sum_series(const SimplicialAffineCone& a, const LatticeBasis& lattice, const RatVector& lam,
                               const RatVector& ell, int tau_max, int t_max,
                               ShortVectorRule rule = ShortVectorRule::smallest) {
  ConeSumPlan plan(SimplicialAffineCone{RatVector(a.ambient_dimension()), a.generators, a.sign}, lattice, rule);
  return plan.series(a.vertex, lam, ell, tau_max, t_max);
}

inline BiSeries exp_sum_series(const SimplicialAffineCone& a, const RatVector& lam, const RatVector& ell, int tau_max,
                               int t_max) {
  return exp_sum_series(a, LatticeBasis::standard(a.ambient_dimension()), lam, ell, tau_max, t_max);
}

/// I(a1)(tau*lambda + t*ell) for a simplicial cone a1 = s1 + cone(u) with
/// |det(u)| measured in the basis `face_lattice_ambient` of Lambda ∩ span(u).
inline BiSeries integral_series(const SimplicialAffineCone& a1, const RatMatrix& face_lattice_ambient,
                                const RatVector& lam, const RatVector& ell, int tau_max, int t_max) {
  const std::size_t k = a1.dimension();
  if (face_lattice_ambient.cols() != k) fail(Errc::dimension_mismatch, "face lattice rank");
  Rational volume = 1;
  if (k > 0) {
    RatMatrix coords(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      auto c = solve_full_column_rank(face_lattice_ambient, a1.generators[j]);
      if (!c) fail(Errc::bad_args, "generator outside the face lattice span");
      for (std::size_t i = 0; i < k; ++i) coords(i, j) = (*c)[i];
    }
    volume = abs(determinant(coords));
  }
  std::vector<Rational> ct, cl;
  std::vector<int> mins;
  for (const auto& u : a1.generators) {
    ct.push_back(dot(lam, u));
    cl.push_back(dot(ell, u));
    if (ct.back() == 0) fail(Errc::lambda_not_generic, "lambda vanishes on a face generator");
    mins.push_back(inv_linear_min_degree(cl.back(), t_max));
  }
  mins.push_back(0);
  const Rational es = dot(lam, a1.vertex), el = dot(ell, a1.vertex);
  BiSeries s = product_of_factors(
      mins,
      [&](std::size_t i, int need) {
        return i < k ? inv_linear_factor(ct[i], cl[i], need, t_max) : exp_factor(es, el, need, t_max);
      },
      tau_max, t_max);
  if (k % 2 == 1) volume = -volume;
  return scale(s, volume * a1.sign);
}

/// I(a) for a solid cone in the standard lattice.
inline BiSeries integral_series(const SimplicialAffineCone& a, const RatVector& lam, const RatVector& ell, int tau_max,
                                int t_max) {
  return integral_series(a, RatMatrix::identity(a.ambient_dimension()), lam, ell, tau_max, t_max);
}

}  // namespace ehrhart
