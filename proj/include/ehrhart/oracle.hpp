#pragma once

// Brute-force ground truth: lattice points of dilated simplices, weighted
// sums over them, slice lengths of planar triangles along a line direction,
// and exact interpolation of quasi-polynomials from samples.
//
// Nothing here shares code with the series pipeline beyond exact linear
// algebra, so agreement between the two is meaningful.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

#include "ehrhart/cone.hpp"
#include "ehrhart/engine.hpp"
#include "ehrhart/error.hpp"
#include "ehrhart/linalg.hpp"

namespace ehrhart {

struct OracleResult {
  long n = 0;
  Rational value;
  std::size_t point_count = 0;
};

/// A monomial weight coef * x^exponents, evaluated directly.
struct Monomial {
  Rational coef;
  std::vector<int> exponents;
};

namespace detail {

/// Integer half-spaces g.x + h >= 0 describing n*p.
struct HalfSpaces {
  std::vector<std::vector<std::int64_t>> g;
  std::vector<std::int64_t> h;
};

inline std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) fail(Errc::bad_args, "oracle coefficient exceeds 64 bits");
  return z.get_si();
}

inline HalfSpaces half_spaces(const RationalSimplex& p, long n) {
  const std::size_t d = p.dimension();
  const auto& v = p.vertices();
  RatMatrix edges(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) edges(i, j) = v[j + 1][i] - v[0][i];
  // barycentric beta = E^{-1}(x/n - v0); scaled by n these are the rows below
  const RatMatrix inv = inverse(edges);
  const RatVector base = inv * v[0];
  std::vector<RatVector> rows;
  std::vector<Rational> consts;
  RatVector sum_row(d);
  Rational sum_const = n;
  for (std::size_t i = 0; i < d; ++i) {
    rows.push_back(inv.row(i));
    consts.push_back(-Rational(n) * base[i]);
    sum_row = sum_row - inv.row(i);
    sum_const += Rational(n) * base[i];
  }
  rows.push_back(sum_row);
  consts.push_back(sum_const);
  HalfSpaces out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Integer den = consts[r].get_den();
    for (const auto& x : rows[r]) den = lcm(den, x.get_den());
    std::vector<std::int64_t> g;
    for (const auto& x : rows[r]) g.push_back(to_int64(Rational(x * den).get_num()));
    out.g.push_back(std::move(g));
    out.h.push_back(to_int64(Rational(consts[r] * den).get_num()));
  }
  return out;
}

inline std::int64_t floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

inline std::int64_t ceil_div(__int128 a, __int128 b) { return -floor_div(-a, b); }

}  // namespace detail

/// Calls `visit` with every integer point of n*p.
inline void for_each_lattice_point(const RationalSimplex& p, long n,
                                   const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  if (n < 0) fail(Errc::bad_args, "negative dilation");
  const std::size_t d = p.dimension();
  std::vector<std::int64_t> x(d, 0);
  if (n == 0) {
    visit(x);
    return;
  }
  if (d == 0) {
    visit(x);
    return;
  }
  const auto hs = detail::half_spaces(p, n);
  std::vector<std::int64_t> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    Rational mn = p.vertex(0)[i], mx = mn;
    for (const auto& v : p.vertices()) {
      mn = std::min(mn, Rational(v[i]));
      mx = std::max(mx, Rational(v[i]));
    }
    lo[i] = detail::to_int64(ceil_of(mn * n));
    hi[i] = detail::to_int64(floor_of(mx * n));
  }
  const std::size_t last = d - 1;
  std::function<void(std::size_t)> descend = [&](std::size_t i) {
    if (i < last) {
      for (x[i] = lo[i]; x[i] <= hi[i]; ++x[i]) descend(i + 1);
      return;
    }
    // exact range of the last coordinate
    std::int64_t a = lo[last], b = hi[last];
    for (std::size_t r = 0; r < hs.g.size() && a <= b; ++r) {
      __int128 rest = hs.h[r];
      for (std::size_t j = 0; j < last; ++j) rest += static_cast<__int128>(hs.g[r][j]) * x[j];
      const std::int64_t c = hs.g[r][last];
      if (c > 0)
        a = std::max(a, detail::ceil_div(-rest, c));
      else if (c < 0)
        b = std::min(b, detail::floor_div(rest, -c));
      else if (rest < 0)
        b = a - 1;
    }
    for (x[last] = a; x[last] <= b; ++x[last]) visit(x);
  };
  descend(0);
}

inline std::vector<RatVector> enumerate_lattice_points(const RationalSimplex& p, long n) {
  std::vector<RatVector> out;
  for_each_lattice_point(p, n, [&](const std::vector<std::int64_t>& x) {
    RatVector v;
    for (auto c : x) v.push_back(Rational(c));
    out.push_back(std::move(v));
  });
  return out;
}

/// sum_{x in np ∩ Z^d} h(x) for h given by powers of linear forms.
inline OracleResult weighted_sum_oracle(const RationalSimplex& p, const WeightPoly& h, long n) {
  OracleResult r{n, Rational(0), 0};
  RatVector v(p.dimension());
  for_each_lattice_point(p, n, [&](const std::vector<std::int64_t>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = Rational(x[i]);
    r.value += h.evaluate(v);
    ++r.point_count;
  });
  return r;
}

/// sum over np ∩ Z^d of the monomials, evaluated coordinatewise.
inline OracleResult monomial_sum_oracle(const RationalSimplex& p, const std::vector<Monomial>& h, long n) {
  std::vector<Integer> sums(h.size());
  std::vector<__int128> partial(h.size(), 0);
  OracleResult r{n, Rational(0), 0};
  for (const auto& m : h)
    if (m.exponents.size() != p.dimension()) fail(Errc::dimension_mismatch, "monomial dimension");
  auto flush = [&](std::size_t i) {
    // __int128 -> Integer through two 64-bit halves
    const __int128 v = partial[i];
    const bool neg = v < 0;
    unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Integer z = static_cast<unsigned long>(mag >> 64);
    z <<= 64;
    z += static_cast<unsigned long>(mag & 0xffffffffffffffffULL);
    sums[i] += neg ? Integer(-z) : z;
    partial[i] = 0;
  };
  for_each_lattice_point(p, n, [&](const std::vector<std::int64_t>& x) {
    ++r.point_count;
    for (std::size_t i = 0; i < h.size(); ++i) {
      __int128 term = 1;
      for (std::size_t j = 0; j < x.size(); ++j)
        for (int e = 0; e < h[i].exponents[j]; ++e) term *= x[j];
      partial[i] += term;
      if (partial[i] > (static_cast<__int128>(1) << 100) || partial[i] < -(static_cast<__int128>(1) << 100)) flush(i);
    }
  });
  for (std::size_t i = 0; i < h.size(); ++i) {
    flush(i);
    r.value += h[i].coef * Rational(sums[i]);
  }
  return r;
}

/// sum over lines y + R u (y in the projected lattice) of the length of the
/// slice of n*p, measured in units of the primitive vector u.
inline Rational slice_sum_oracle_2d(const RationalSimplex& p, const RatVector& direction, long n) {
  if (p.dimension() != 2) fail(Errc::dimension_not_2, "slice oracle is planar");
  if (n < 0) fail(Errc::bad_args, "negative dilation");
  const RatVector u = primitive_vector(direction);
  const RatVector w = u[0] != 0 ? make_vector({0, 1}) : make_vector({1, 0});
  const std::vector<RatVector> lgen{u}, wgen{w};
  const LatticeBasis proj = projected_lattice_basis(LatticeBasis::standard(2), lgen, wgen);
  const Rational step = proj.basis()(0, 0);  // lines are y = j * step * w
  // coordinates along (u, w)
  const RatMatrix uw = RatMatrix::from_columns(std::vector<RatVector>{u, w}, 2);
  const RatMatrix to_uw = inverse(uw);
  std::vector<RatVector> pts;
  for (const auto& v : p.vertices()) pts.push_back(to_uw * (Rational(n) * v));
  Rational wmin = pts[0][1], wmax = pts[0][1];
  for (const auto& q : pts) {
    wmin = std::min(wmin, Rational(q[1]));
    wmax = std::max(wmax, Rational(q[1]));
  }
  const Rational astep = abs(step);
  Rational total = 0;
  for (Integer j = ceil_of(wmin / astep); j * astep <= wmax; ++j) {
    const Rational y = j * astep;
    // slice of the triangle at w-coordinate y: u-range from intersecting edges
    bool any = false;
    Rational lo, hi;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) {
        const auto &pa = pts[a], &pb = pts[b];
        if ((pa[1] - y) * (pb[1] - y) > 0) continue;
        std::vector<Rational> xs;
        if (pa[1] == pb[1]) {
          xs = {pa[0], pb[0]};
        } else {
          const Rational t = (y - pa[1]) / (pb[1] - pa[1]);
          xs = {pa[0] + t * (pb[0] - pa[0])};
        }
        for (const auto& x : xs) {
          if (!any) {
            lo = hi = x;
            any = true;
          }
          lo = std::min(lo, x);
          hi = std::max(hi, x);
        }
      }
    if (any) total += hi - lo;
  }
  return total;
}

/// S(a)(tau*lambda + t*ell) over Z^d from the lattice points of the half-open
/// parallelepiped s + [0,1)v: sum_x e^{<xi,x>} prod_i 1/(1 - e^{<xi,v_i>}).
/// Independent of any cone decomposition.
inline BiSeries cone_exp_sum_oracle(const SimplicialAffineCone& a, const RatVector& lam, const RatVector& ell,
                                    int tau_max, int t_max) {
  const std::size_t d = a.ambient_dimension();
  if (a.dimension() != d || d == 0) fail(Errc::not_solid, "oracle needs a solid cone");
  for (const auto& g : a.generators)
    if (!is_integral(g)) fail(Errc::bad_args, "oracle needs integral generators");
  const RatMatrix to_cone = inverse(a.generator_matrix());
  std::vector<std::int64_t> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    Rational mn = a.vertex[i], mx = a.vertex[i];
    for (const auto& g : a.generators) (g[i] < 0 ? mn : mx) += g[i];
    lo[i] = detail::to_int64(ceil_of(mn));
    hi[i] = detail::to_int64(floor_of(mx));
  }
  std::vector<RatVector> points;
  std::vector<std::int64_t> x(lo);
  RatVector diff(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) diff[i] = Rational(x[i]) - a.vertex[i];
    const RatVector c = to_cone * diff;
    bool inside = true;
    for (const auto& ci : c)
      if (ci < 0 || ci >= 1) inside = false;
    if (inside) {
      RatVector p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = x[i];
      points.push_back(std::move(p));
    }
    std::size_t i = 0;
    while (i < d && x[i] == hi[i]) x[i] = lo[i], ++i;
    if (i == d) break;
    ++x[i];
  }
  std::vector<int> mins;
  for (const auto& g : a.generators) {
    if (dot(lam, g) == 0) fail(Errc::lambda_not_generic, "lambda vanishes on a generator");
    mins.push_back(inv_linear_min_degree(dot(ell, g), t_max));
  }
  mins.push_back(0);
  return product_of_factors(
      mins,
      [&](std::size_t i, int need) {
        if (i < d) return geometric_exp_factor(dot(lam, a.generators[i]), dot(ell, a.generators[i]), need, t_max);
        BiSeries sum(0, need, t_max);
        for (const auto& p : points) sum = add(sum, exp_factor(dot(lam, p), dot(ell, p), need, t_max));
        return sum;
      },
      tau_max, t_max);
}

/// Per-residue exact interpolation in u = (n - k)/q; extra samples must fit.
inline QuasiPolynomial fit_quasipoly(const std::map<long, Rational>& values, long q, long degree) {
  if (q < 1 || degree < 0) fail(Errc::bad_args, "period and degree must be positive");
  std::vector<std::vector<Rational>> polys;
  for (long k = 0; k < q; ++k) {
    std::vector<std::pair<Rational, Rational>> samples;
    for (const auto& [n, v] : values)
      if (n >= 0 && n % q == k) samples.emplace_back(Rational((n - k) / q), v);
    if (static_cast<long>(samples.size()) < degree + 1)
      fail(Errc::insufficient_samples, "residue " + std::to_string(k) + " has too few samples");
    const std::size_t m = static_cast<std::size_t>(degree) + 1;
    RatMatrix vander(m, m);
    RatVector rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) vander(i, j) = pow(samples[i].first, static_cast<unsigned long>(j));
      rhs[i] = samples[i].second;
    }
    RatVector c = solve(vander, rhs);
    for (std::size_t i = m; i < samples.size(); ++i)
      if (evaluate_polynomial(c, samples[i].first) != samples[i].second)
        fail(Errc::inconsistent_samples, "sample at residue " + std::to_string(k) + " does not fit");
    polys.push_back(std::move(c));
  }
  return assemble_quasipoly(polys, q);
}

}  // namespace ehrhart
