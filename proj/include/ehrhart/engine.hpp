#pragma once

// Weighted Ehrhart quasi-polynomials of rational simplices by Brion's
// theorem: per vertex cone the series S(ks + c_s) (or its Barvinok
// approximation) is expanded along xi = tau*lambda + t*ell, and the
// coefficient of u^m in the count of (qu + k)p is read off from
// [tau^0 t^N] of sum_s (tau<lambda,s> + t<ell,s>)^m S_s.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "ehrhart/barvinok.hpp"
#include "ehrhart/cone.hpp"
#include "ehrhart/error.hpp"
#include "ehrhart/mixed.hpp"
#include "ehrhart/series.hpp"

namespace ehrhart {

/// h(x) = sum coef * <form, x>^power.
struct WeightTerm {
  Rational coef;
  RatVector form;
  int power = 0;
};

struct WeightPoly {
  std::vector<WeightTerm> terms;

  int max_degree() const {
    int m = 0;
    for (const auto& t : terms) m = std::max(m, t.power);
    return m;
  }

  /// The constant weight 1 in dimension d.
  static WeightPoly one(std::size_t d) { return WeightPoly{{{Rational(1), RatVector(d), 0}}}; }

  Rational evaluate(const RatVector& x) const {
    Rational s = 0;
    for (const auto& t : terms) s += t.coef * pow(dot(t.form, x), static_cast<unsigned long>(t.power));
    return s;
  }

  /// Adds c * <form, x>^power. Nonzero forms are rescaled to primitive
  /// integer forms so proportional terms merge.
  void add_term(Rational c, RatVector form, int power) {
    if (c == 0) return;
    if (power == 0) {
      form.assign(form.size(), Rational(0));
    } else if (!is_zero(form)) {
      const RatVector p = primitive_vector(form);
      std::size_t i = 0;
      while (p[i] == 0) ++i;
      c *= pow(form[i] / p[i], static_cast<unsigned long>(power));
      form = p;
    }
    for (auto it = terms.begin(); it != terms.end(); ++it)
      if (it->power == power && it->form == form) {
        it->coef += c;
        if (it->coef == 0) terms.erase(it);
        return;
      }
    terms.push_back({c, form, power});
  }

  void append(const WeightPoly& other, const Rational& scale = 1) {
    for (const auto& t : other.terms) add_term(scale * t.coef, t.form, t.power);
  }
};

/// x^m as a combination of powers of linear forms:
/// x^m = (1/|m|!) sum_{0<=p<=m} (-1)^{|m|-|p|} prod C(m_i,p_i) <p,x>^{|m|}.
inline WeightPoly decompose_monomial(const std::vector<int>& exponents) {
  const std::size_t d = exponents.size();
  int total = 0;
  for (int e : exponents) {
    if (e < 0) fail(Errc::bad_args, "negative exponent");
    total += e;
  }
  WeightPoly out;
  if (total == 0) return WeightPoly::one(d);
  const Rational norm(Integer(1), factorial(static_cast<unsigned long>(total)));
  std::vector<int> p(d, 0);
  while (true) {
    int size = 0;
    Integer weight = 1;
    RatVector form(d);
    for (std::size_t i = 0; i < d; ++i) {
      size += p[i];
      weight *= binomial(static_cast<unsigned long>(exponents[i]), static_cast<unsigned long>(p[i]));
      form[i] = p[i];
    }
    if (size > 0) {
      Rational c = norm * Rational(weight);
      if ((total - size) % 2 != 0) c = -c;
      out.add_term(c, form, total);
    }
    std::size_t i = 0;
    while (i < d && p[i] == exponents[i]) p[i++] = 0;
    if (i == d) break;
    ++p[i];
  }
  return out;
}

/// Deterministic stream of candidate directions for a seed.
class LambdaSampler {
 public:
  static constexpr int max_draws = 1000;

  explicit LambdaSampler(std::uint64_t seed) : rng_(seed) {}

  /// Next small integer vector pairing nonzero with every generator.
  RatVector next(const std::vector<SimplicialAffineCone>& cones) {
    if (cones.empty()) fail(Errc::bad_args, "no cones to be generic for");
    const std::size_t d = cones.front().ambient_dimension();
    while (draws_ < max_draws) {
      const long range = 3 + draws_ / 20;
      ++draws_;
      std::uniform_int_distribution<long> dist(-range, range);
      RatVector lam(d);
      for (auto& x : lam) x = dist(rng_);
      bool ok = true;
      for (const auto& c : cones)
        for (const auto& g : c.generators)
          if (dot(lam, g) == 0) ok = false;
      if (ok) return lam;
    }
    fail(Errc::exhausted_genericity, "no generic direction found in " + std::to_string(max_draws) + " draws");
  }

  int draws() const { return draws_; }

 private:
  std::mt19937_64 rng_;
  int draws_ = 0;
};

inline RatVector generic_lambda(const std::vector<SimplicialAffineCone>& cones, std::uint64_t seed) {
  LambdaSampler sampler(seed);
  return sampler.next(cones);
}

enum class Mode { exact, top };

struct EngineOptions {
  Mode mode = Mode::exact;
  long r = 0;               ///< codimension bound in top mode
  std::uint64_t seed = 0;
  int order_pad = 2;        ///< extra nonnegative tau-degrees carried in every series
  ShortVectorRule rule = ShortVectorRule::smallest;
};

/// Lowest u-power reported in top mode. For r >= d the valuation is the
/// exact sum, so every coefficient is reported.
inline long top_threshold(std::size_t d, int max_degree, long r) {
  if (r >= static_cast<long>(d)) return 0;
  return std::max(0L, static_cast<long>(d) + max_degree - r);
}

/// Per-residue u-coefficients (entries absent below the top-mode threshold)
/// together with the direction that produced them.
struct ResidueCoefficients {
  long k = 0;
  std::vector<std::optional<Rational>> u_coeffs;
};

namespace detail {

struct FormGroup {
  RatVector form;
  int t_max = 0;
  std::vector<std::size_t> term_indices;
};

inline std::vector<FormGroup> group_by_form(const WeightPoly& h) {
  std::vector<FormGroup> groups;
  for (std::size_t i = 0; i < h.terms.size(); ++i) {
    const auto& t = h.terms[i];
    auto it = std::find_if(groups.begin(), groups.end(), [&](const FormGroup& g) { return g.form == t.form; });
    if (it == groups.end()) {
      groups.push_back({t.form, t.power, {i}});
    } else {
      it->t_max = std::max(it->t_max, t.power);
      it->term_indices.push_back(i);
    }
  }
  return groups;
}

/// [tau^p t^kk] of sum_s (tau a_s + t b_s)^m S_s.
inline Rational shifted_coefficient(const std::vector<BiSeries>& series, const std::vector<Rational>& a,
                                    const std::vector<Rational>& b, int m, int p, int kk) {
  Rational total = 0;
  for (std::size_t s = 0; s < series.size(); ++s)
    for (int j = 0; j <= std::min(m, kk); ++j) {
      const Rational c = series[s].coeff(p - (m - j), kk - j);
      if (c == 0) continue;
      total += Rational(binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(j))) *
               pow(a[s], static_cast<unsigned long>(m - j)) * pow(b[s], static_cast<unsigned long>(j)) * c;
    }
  return total;
}

}  // namespace detail

/// S(a, h)(tau*lambda) (exact) or its Barvinok approximation for faces of
/// codimension <= r (top): each term c<ell,x>^N contributes c N! [t^N] of the
/// series along tau*lambda + t*ell. Known through tau^tau_max.
inline BiSeries weighted_cone_series(const SimplicialAffineCone& a, const WeightPoly& h, Mode mode, long r,
                                     const LatticeBasis& lattice, const RatVector& lam, int tau_max) {
  const long d = static_cast<long>(a.ambient_dimension());
  BiSeries total(-static_cast<int>(d) - h.max_degree(), tau_max, 0);
  for (const auto& term : h.terms) {
    const BiSeries s =
        mode == Mode::exact
            ? exp_sum_series(a, lattice, lam, term.form, tau_max, term.power)
            : barvinok_valuation_series(a, r, lattice, lam, term.form, tau_max, term.power);
    BiSeries slice(s.tau_min(), tau_max, 0);
    const Rational c = term.coef * Rational(factorial(static_cast<unsigned long>(term.power)));
    for (int j = s.tau_min(); j <= tau_max; ++j) slice.at(j, 0) = c * s.coeff(j, term.power);
    total = add(total, slice);
  }
  return total;
}

/// Coefficients over u of the weighted count of (qu + k)p, for the residues
/// in `residues` (all of 0..q-1 when empty). In top mode only u-powers
/// m >= d + deg h - r are produced.
class EhrhartEngine {
 public:
  EhrhartEngine(RationalSimplex p, WeightPoly h, EngineOptions options)
      : p_(std::move(p)), h_(std::move(h)), options_(options) {
    const std::size_t d = p_.dimension();
    if (h_.terms.empty()) h_ = WeightPoly{{{Rational(0), RatVector(d), 0}}};
    for (const auto& t : h_.terms) {
      if (t.form.size() != d) fail(Errc::dimension_mismatch, "weight form dimension");
      if (t.power < 0) fail(Errc::bad_args, "negative power");
    }
    if (options_.mode == Mode::top && (options_.r < 0 || options_.r > static_cast<long>(d)))
      fail(Errc::bad_codimension, "r must lie in [0, d]");
    if (options_.order_pad < 0) fail(Errc::bad_args, "order_pad must be nonnegative");
    cones_ = vertex_cones(p_);
    const long r = options_.mode == Mode::exact ? static_cast<long>(d) : options_.r;
    const auto lattice = LatticeBasis::standard(d);
    for (const auto& c : cones_) plans_.emplace_back(c.generators, r, lattice, options_.rule);
  }

  const RationalSimplex& simplex() const { return p_; }
  long degree() const { return static_cast<long>(p_.dimension()) + h_.max_degree(); }
  long first_reported() const {
    return options_.mode == Mode::exact ? 0 : top_threshold(p_.dimension(), h_.max_degree(), options_.r);
  }

  /// Direction used by the last successful computation.
  const RatVector& lambda() const { return lambda_; }

  std::vector<ResidueCoefficients> compute(std::vector<long> residues = {}) {
    const long q = p_.period().get_si();
    if (residues.empty())
      for (long k = 0; k < q; ++k) residues.push_back(k);
    for (long k : residues)
      if (k < 0 || k >= q) fail(Errc::bad_args, "residue out of range");
    LambdaSampler sampler(options_.seed);
    while (true) {
      lambda_ = sampler.next(cones_);
      try {
        return compute_with(lambda_, residues);
      } catch (const Error& e) {
        if (e.code() != Errc::lambda_not_generic) throw;
      }
    }
  }

 private:
  std::vector<ResidueCoefficients> compute_with(const RatVector& lam, const std::vector<long>& residues) const {
    const std::size_t d = p_.dimension();
    const long q = p_.period().get_si();
    const int top_degree = static_cast<int>(degree());
    const long first = first_reported();
    const int tau_max = options_.order_pad;
    const auto groups = detail::group_by_form(h_);

    std::vector<ResidueCoefficients> out;
    for (long k : residues) out.push_back({k, std::vector<std::optional<Rational>>(top_degree + 1)});
    std::vector<std::vector<Rational>> acc(residues.size(), std::vector<Rational>(top_degree + 1));

    for (const auto& g : groups) {
      std::vector<ValuationPlan::Prepared> prepared;
      for (const auto& plan : plans_) prepared.push_back(plan.prepare(lam, g.form, tau_max, g.t_max));
      std::vector<Rational> a, b;
      for (const auto& s : p_.vertices()) {
        a.push_back(dot(lam, s));
        b.push_back(dot(g.form, s));
      }
      for (std::size_t ri = 0; ri < residues.size(); ++ri) {
        const long k = residues[ri];
        std::vector<BiSeries> series;
        for (std::size_t s = 0; s < plans_.size(); ++s)
          series.push_back(plans_[s].series(prepared[s], Rational(k) * p_.vertex(s)));
        if (options_.mode == Mode::exact) check_analytic(series, a, b, top_degree, static_cast<int>(d), g.t_max);
        for (int m = static_cast<int>(first); m <= top_degree; ++m) {
          const Rational qm = pow(Rational(q), static_cast<unsigned long>(m)) / Rational(factorial(m));
          for (auto ti : g.term_indices) {
            const auto& term = h_.terms[ti];
            const Rational c = detail::shifted_coefficient(series, a, b, m, 0, term.power);
            if (c == 0) continue;
            acc[ri][m] += term.coef * Rational(factorial(static_cast<unsigned long>(term.power))) * qm * c;
          }
        }
      }
    }
    for (std::size_t ri = 0; ri < residues.size(); ++ri)
      for (long m = first; m <= top_degree; ++m) out[ri].u_coeffs[m] = acc[ri][m];
    return out;
  }

  /// The Brion sum is analytic: its negative tau-degrees cancel for every m.
  static void check_analytic(const std::vector<BiSeries>& series, const std::vector<Rational>& a,
                             const std::vector<Rational>& b, int top_degree, int d, int t_max) {
    for (int m = 0; m <= top_degree; ++m)
      for (int p = -d - t_max; p < 0; ++p)
        for (int kk = 0; kk <= t_max; ++kk)
          if (detail::shifted_coefficient(series, a, b, m, p, kk) != 0)
            fail(Errc::internal_assertion, "Brion sum has a pole: u^" + std::to_string(m) + " tau^" +
                                               std::to_string(p) + " t^" + std::to_string(kk));
  }

  RationalSimplex p_;
  WeightPoly h_;
  EngineOptions options_;
  std::vector<SimplicialAffineCone> cones_;
  std::vector<ValuationPlan> plans_;
  RatVector lambda_;
};

/// u-coefficients of the weighted count of (qu + k)p for one residue k.
inline std::vector<std::optional<Rational>> ehrhart_residue_poly(const RationalSimplex& p, const WeightPoly& h, long k,
                                                                 const EngineOptions& options) {
  EhrhartEngine engine(p, h, options);
  return engine.compute({k}).front().u_coeffs;
}

/// m -> per-residue values, for m >= top_threshold(d, deg h, r).
inline std::map<long, std::vector<Rational>> ehrhart_top_coeffs(const RationalSimplex& p, const WeightPoly& h, long r,
                                                                std::uint64_t seed = 0) {
  EngineOptions options;
  options.mode = Mode::top;
  options.r = r;
  options.seed = seed;
  EhrhartEngine engine(p, h, options);
  const auto residues = engine.compute();
  std::map<long, std::vector<Rational>> out;
  for (long m = engine.first_reported(); m <= engine.degree(); ++m)
    for (const auto& res : residues) out[m].push_back(*res.u_coeffs[m]);
  return out;
}

/// n-form coefficients e_j from u-form coefficients c_m via u = (n - k)/q:
/// e_j = sum_{m>=j} c_m C(m,j) (-k)^(m-j) / q^m. An entry is present when
/// every c_m with m >= j is.
inline std::vector<std::optional<Rational>> n_form_from_u_form(const std::vector<std::optional<Rational>>& u, long k,
                                                               long q) {
  std::vector<std::optional<Rational>> e(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    Rational s = 0;
    bool known = true;
    for (std::size_t m = j; m < u.size(); ++m) {
      if (!u[m]) {
        known = false;
        break;
      }
      s += *u[m] * Rational(binomial(m, j)) * pow(Rational(-k), static_cast<unsigned long>(m - j)) /
           pow(Rational(q), static_cast<unsigned long>(m));
    }
    if (known) e[j] = s;
  }
  return e;
}

inline Rational evaluate_polynomial(const std::vector<Rational>& c, const Rational& x) {
  Rational s = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}

/// Quasi-polynomial of period q; residue k holds the polynomial in u with
/// n = qu + k and the equivalent polynomial in n.
struct QuasiPolynomial {
  long period = 1;
  long degree = 0;
  std::vector<std::vector<Rational>> residue_polys;  ///< u-form
  std::vector<std::vector<Rational>> n_form;

  Rational evaluate(long n) const {
    if (n < 0) fail(Errc::bad_args, "negative dilation");
    const long k = n % period;
    return evaluate_polynomial(residue_polys[k], Rational((n - k) / period));
  }

  Rational evaluate_n_form(long n) const {
    if (n < 0) fail(Errc::bad_args, "negative dilation");
    return evaluate_polynomial(n_form[n % period], Rational(n));
  }
};

inline QuasiPolynomial assemble_quasipoly(const std::vector<std::vector<Rational>>& polys, long q) {
  if (q < 1) fail(Errc::bad_args, "period must be positive");
  if (static_cast<long>(polys.size()) != q) fail(Errc::inconsistent_degree, "one polynomial per residue expected");
  QuasiPolynomial qp;
  qp.period = q;
  qp.degree = polys.empty() ? 0 : static_cast<long>(polys.front().size()) - 1;
  for (const auto& poly : polys)
    if (static_cast<long>(poly.size()) != qp.degree + 1 || poly.empty())
      fail(Errc::inconsistent_degree, "residue polynomials have different lengths");
  qp.residue_polys = polys;
  for (long k = 0; k < q; ++k) {
    std::vector<std::optional<Rational>> u(polys[k].begin(), polys[k].end());
    std::vector<Rational> e;
    for (const auto& x : n_form_from_u_form(u, k, q)) e.push_back(*x);
    qp.n_form.push_back(std::move(e));
  }
  for (long k = 0; k < q; ++k)
    for (long i = 0; i < 3; ++i) {
      const long n = k + i * q;
      ensure(qp.evaluate(n) == qp.evaluate_n_form(n), "u-form and n-form disagree");
    }
  return qp;
}

/// Exact weighted Ehrhart quasi-polynomial of p.
inline QuasiPolynomial ehrhart_quasipolynomial(const RationalSimplex& p, const WeightPoly& h,
                                               std::uint64_t seed = 0) {
  EngineOptions options;
  options.seed = seed;
  EhrhartEngine engine(p, h, options);
  std::vector<std::vector<Rational>> polys;
  for (const auto& res : engine.compute()) {
    std::vector<Rational> c;
    for (const auto& x : res.u_coeffs) c.push_back(*x);
    polys.push_back(std::move(c));
  }
  return assemble_quasipoly(polys, p.period().get_si());
}

/// [tau^0] of sum_s S^L(n s + c_s)(tau lambda) for a triangle p: the value
/// at xi = 0 of S^L(np), L spanned by `span` (no vectors: L = {0}; one
/// vector: a line; two: the plane). Negative degrees must cancel.
inline Rational mixed_brion_constant_term_2d(const RationalSimplex& p, const std::vector<RatVector>& span, long n,
                                             std::uint64_t seed = 0) {
  if (p.dimension() != 2) fail(Errc::dimension_not_2, "planar simplex expected");
  if (n < 0) fail(Errc::bad_args, "negative dilation");
  const std::size_t rank_l = span.empty() ? 0 : rank(RatMatrix::from_columns(span, 2));
  if (rank_l != span.size()) fail(Errc::bad_args, "subspace generators are dependent");
  auto cones = vertex_cones(p);
  auto guard = cones;
  if (rank_l == 1) guard.push_back(SimplicialAffineCone{RatVector(2), {span[0]}, 1});
  const auto z2 = LatticeBasis::standard(2);
  const RatVector ell(2);
  auto det2 = [](const RatVector& x, const RatVector& y) -> Rational { return x[0] * y[1] - x[1] * y[0]; };
  LambdaSampler sampler(seed);
  while (true) {
    const RatVector lam = sampler.next(guard);
    try {
      std::optional<BiSeries> total;
      for (const auto& c : cones) {
        const SimplicialAffineCone a{Rational(n) * c.vertex, c.generators, 1};
        BiSeries s;
        if (rank_l == 0) {
          s = exp_sum_series(a, z2, lam, ell, 0, 0);
        } else if (rank_l == 2) {
          s = integral_series(a, lam, ell, 0, 0);
        } else if (det2(span[0], c.generators[0]) == 0) {
          s = mixed_exp_sum_series(a, FaceSubset{{0}}, z2, lam, ell, 0, 0);
        } else if (det2(span[0], c.generators[1]) == 0) {
          s = mixed_exp_sum_series(a, FaceSubset{{1}}, z2, lam, ell, 0, 0);
        } else {
          s = transverse_mixed_series_2d(a, span[0], lam, ell, 0, 0);
        }
        total = total ? add(*total, s) : s;
      }
      for (int j = total->tau_min(); j < 0; ++j)
        if (total->coeff(j) != 0) fail(Errc::internal_assertion, "mixed Brion sum has a pole");
      return total->coeff(0);
    } catch (const Error& e) {
      if (e.code() != Errc::lambda_not_generic) throw;
    }
  }
}

}  // namespace ehrhart
