#pragma once

// Truncated Laurent series in tau whose coefficients are polynomials in t
// modulo t^(t_max+1). Every generating function of the library is evaluated
// along xi = tau*lambda + t*ell and lands here.

#include <algorithm>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "ehrhart/error.hpp"
#include "ehrhart/rational.hpp"

namespace ehrhart {

/// Coefficients are exact for tau_min <= j <= tau_max; everything below
/// tau_min is zero, everything above tau_max is unknown.
class BiSeries {
 public:
  BiSeries() : BiSeries(0, 0, 0) {}

  BiSeries(int tau_min, int tau_max, int t_max)
      : tau_min_(tau_min), tau_max_(std::max(tau_max, tau_min - 1)), t_max_(t_max) {
    if (t_max < 0) fail(Errc::bad_args, "negative t_max");
    coeffs_.resize(static_cast<std::size_t>(width()) * static_cast<std::size_t>(t_max_ + 1));
  }

  /// The constant c, known up to tau_max.
  static BiSeries constant(const Rational& c, int tau_max, int t_max) {
    BiSeries s(0, tau_max, t_max);
    if (tau_max >= 0) s.at(0, 0) = c;
    return s;
  }

  int tau_min() const { return tau_min_; }
  int tau_max() const { return tau_max_; }
  int t_max() const { return t_max_; }

  bool in_window(int j, int k) const { return j >= tau_min_ && j <= tau_max_ && k >= 0 && k <= t_max_; }

  /// Coefficient of tau^j t^k. Below the window this is exactly zero; above
  /// it the value is unknown and asking is a WindowMismatch.
  Rational coeff(int j, int k = 0) const {
    if (k < 0 || k > t_max_) return 0;
    if (j < tau_min_) return 0;
    if (j > tau_max_)
      fail(Errc::window_mismatch,
           "tau^" + std::to_string(j) + " is beyond the tracked window (max " + std::to_string(tau_max_) + ")");
    return coeffs_[index(j, k)];
  }

  Rational& at(int j, int k) {
    if (!in_window(j, k)) fail(Errc::window_mismatch, "write outside window");
    return coeffs_[index(j, k)];
  }

  /// Lowest tau-degree carrying a nonzero coefficient, or nullopt-like sentinel tau_max+1.
  int lowest_nonzero_degree() const {
    for (int j = tau_min_; j <= tau_max_; ++j)
      for (int k = 0; k <= t_max_; ++k)
        if (coeffs_[index(j, k)] != 0) return j;
    return tau_max_ + 1;
  }

  /// Drops tracked coefficients above tau_max.
  BiSeries truncated(int tau_max) const {
    if (tau_max > tau_max_) fail(Errc::window_mismatch, "cannot extend a window by truncation");
    BiSeries r(tau_min_, tau_max, t_max_);
    for (int j = tau_min_; j <= r.tau_max_; ++j)
      for (int k = 0; k <= t_max_; ++k) r.coeffs_[r.index(j, k)] = coeffs_[index(j, k)];
    return r;
  }

  friend BiSeries add(const BiSeries& a, const BiSeries& b) {
    if (a.t_max_ != b.t_max_) fail(Errc::window_mismatch, "t truncation orders differ");
    BiSeries r(std::min(a.tau_min_, b.tau_min_), std::min(a.tau_max_, b.tau_max_), a.t_max_);
    for (int j = r.tau_min_; j <= r.tau_max_; ++j)
      for (int k = 0; k <= r.t_max_; ++k) r.coeffs_[r.index(j, k)] = a.coeff(j, k) + b.coeff(j, k);
    return r;
  }

  friend BiSeries scale(const BiSeries& a, const Rational& c) {
    BiSeries r = a;
    for (auto& x : r.coeffs_) x *= c;
    return r;
  }

  /// Multiplication by tau^m.
  friend BiSeries shift_tau(const BiSeries& a, int m) {
    BiSeries r = a;
    r.tau_min_ += m;
    r.tau_max_ += m;
    return r;
  }

  /// Highest tau-degree of a*b that the inputs determine.
  friend int determinable_max(const BiSeries& a, const BiSeries& b) {
    return std::min(a.tau_max_ + b.tau_min_, b.tau_max_ + a.tau_min_);
  }

  /// Product known up to `tau_max`; WindowMismatch when the inputs cannot
  /// determine that many coefficients.
  friend BiSeries mul(const BiSeries& a, const BiSeries& b, int tau_max) {
    if (a.t_max_ != b.t_max_) fail(Errc::window_mismatch, "t truncation orders differ");
    if (tau_max > determinable_max(a, b))
      fail(Errc::window_mismatch, "requested tau^" + std::to_string(tau_max) + " but inputs determine only up to tau^" +
                                      std::to_string(determinable_max(a, b)));
    BiSeries r(a.tau_min_ + b.tau_min_, tau_max, a.t_max_);
    const int tk = a.t_max_;
    for (int j1 = a.tau_min_; j1 <= a.tau_max_; ++j1) {
      for (int k1 = 0; k1 <= tk; ++k1) {
        const Rational& x = a.coeffs_[a.index(j1, k1)];
        if (x == 0) continue;
        const int j2_max = std::min(b.tau_max_, tau_max - j1);
        for (int j2 = b.tau_min_; j2 <= j2_max; ++j2)
          for (int k2 = 0; k1 + k2 <= tk; ++k2) {
            const Rational& y = b.coeffs_[b.index(j2, k2)];
            if (y == 0) continue;
            r.coeffs_[r.index(j1 + j2, k1 + k2)] += x * y;
          }
      }
    }
    return r;
  }

  friend BiSeries mul(const BiSeries& a, const BiSeries& b) { return mul(a, b, determinable_max(a, b)); }

  friend BiSeries operator+(const BiSeries& a, const BiSeries& b) { return add(a, b); }
  friend BiSeries operator-(const BiSeries& a, const BiSeries& b) { return add(a, scale(b, Rational(-1))); }
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b) { return mul(a, b); }

  /// Equality on the common window, ignoring explicit zeros.
  friend bool equal_on_common_window(const BiSeries& a, const BiSeries& b) {
    if (a.t_max_ != b.t_max_) return false;
    const int lo = std::min(a.tau_min_, b.tau_min_);
    const int hi = std::min(a.tau_max_, b.tau_max_);
    for (int j = lo; j <= hi; ++j)
      for (int k = 0; k <= a.t_max_; ++k)
        if (a.coeff(j, k) != b.coeff(j, k)) return false;
    return true;
  }

  /// Lines "tau^j t^k: a/b" for the nonzero coefficients, sorted by (j,k).
  std::string dump() const {
    std::ostringstream os;
    for (int j = tau_min_; j <= tau_max_; ++j)
      for (int k = 0; k <= t_max_; ++k) {
        const auto& c = coeffs_[index(j, k)];
        if (c != 0) os << "tau^" << j << " t^" << k << ": " << to_string(c) << "\n";
      }
    return os.str();
  }

 private:
  int width() const { return tau_max_ - tau_min_ + 1; }
  std::size_t index(int j, int k) const {
    return static_cast<std::size_t>(j - tau_min_) * static_cast<std::size_t>(t_max_ + 1) + static_cast<std::size_t>(k);
  }

  int tau_min_;
  int tau_max_;
  int t_max_;
  std::vector<Rational> coeffs_;
};

/// Bernoulli numbers with B_1 = -1/2.
inline Rational bernoulli(unsigned n) {
  static std::mutex mutex;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(mutex);
  while (table.size() <= n) {
    const unsigned m = static_cast<unsigned>(table.size());
    // sum_{k<=m} C(m+1,k) B_k = 0
    Rational s = 0;
    for (unsigned k = 0; k < m; ++k) s += Rational(binomial(m + 1, k)) * table[k];
    table.push_back(-s / Rational(Integer(m + 1)));
  }
  return table[n];
}

namespace detail {

/// sum_n c_n x^n at x = c_tau tau + c_t t, for n up to the window.
inline BiSeries power_series_in_linear(const std::vector<Rational>& c, const Rational& c_tau, const Rational& c_t,
                                       int tau_max, int t_max) {
  BiSeries s(0, tau_max, t_max);
  for (int n = 0; n < static_cast<int>(c.size()); ++n) {
    if (c[n] == 0) continue;
    for (int k = 0; k <= std::min(n, t_max); ++k) {
      const int j = n - k;
      if (j > tau_max) continue;
      Rational term = c[n] * Rational(binomial(n, k)) * pow(c_tau, n - k) * pow(c_t, k);
      if (term != 0) s.at(j, k) += term;
    }
  }
  return s;
}

}  // namespace detail

/// Lowest tau-degree of 1/(c_tau tau + c_t t) up to t^t_max.
inline int inv_linear_min_degree(const Rational& c_t, int t_max) { return c_t == 0 ? -1 : -1 - t_max; }

/// 1/(c_tau tau + c_t t) = sum_j (-c_t)^j t^j / (c_tau^(j+1) tau^(j+1)).
inline BiSeries inv_linear_factor(const Rational& c_tau, const Rational& c_t, int tau_max, int t_max) {
  if (c_tau == 0) fail(Errc::zero_tau_coefficient, "inverse linear factor with zero tau coefficient");
  BiSeries s(inv_linear_min_degree(c_t, t_max), tau_max, t_max);
  for (int j = 0; j <= t_max; ++j) {
    if (j > 0 && c_t == 0) break;
    const int deg = -1 - j;
    if (deg > tau_max) continue;
    Rational v = pow(-c_t, j) / pow(c_tau, j + 1);
    s.at(deg, j) = v;
  }
  return s;
}

/// The holomorphic part B(x) = 1/(1-e^x) + 1/x = 1/2 - x/12 + x^3/720 - ...
inline BiSeries b_factor(const Rational& c_tau, const Rational& c_t, int tau_max, int t_max) {
  const int n_max = std::max(0, tau_max + t_max);
  std::vector<Rational> c(static_cast<std::size_t>(n_max) + 1);
  // 1/(1-e^x) = -1/x - sum_{n>=1} B_n x^(n-1) / n!
  for (int n = 0; n <= n_max; ++n) c[n] = -bernoulli(n + 1) / Rational(factorial(n + 1));
  return detail::power_series_in_linear(c, c_tau, c_t, tau_max, t_max);
}

/// 1/(1 - e^x) at x = c_tau tau + c_t t, as -1/x + B(x).
inline BiSeries geometric_exp_factor(const Rational& c_tau, const Rational& c_t, int tau_max, int t_max) {
  if (c_tau == 0) fail(Errc::zero_tau_coefficient, "geometric factor with zero tau coefficient");
  BiSeries inv = inv_linear_factor(c_tau, c_t, tau_max, t_max);
  BiSeries holo = b_factor(c_tau, c_t, tau_max, t_max);
  return add(scale(inv, Rational(-1)), holo);
}

/// e^(c_tau tau + c_t t).
inline BiSeries exp_factor(const Rational& c_tau, const Rational& c_t, int tau_max, int t_max) {
  const int n_max = std::max(0, tau_max + t_max);
  std::vector<Rational> c(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) c[n] = Rational(Integer(1), factorial(n));
  return detail::power_series_in_linear(c, c_tau, c_t, tau_max, t_max);
}

/// Product of factors with known minimal degrees, determined up to tau_max.
/// Each factor is produced on demand with the window it needs.
template <typename MakeFactor>
BiSeries product_of_factors(const std::vector<int>& min_degrees, MakeFactor&& make, int tau_max, int t_max) {
  int total_min = 0;
  for (int m : min_degrees) total_min += m;
  if (min_degrees.empty()) return BiSeries::constant(Rational(1), tau_max, t_max);
  BiSeries acc;
  int acc_min = 0;
  for (std::size_t i = 0; i < min_degrees.size(); ++i) {
    const int rest_min = total_min - acc_min - min_degrees[i];
    const int need = tau_max - rest_min;  // this partial product must be known up to here
    const int factor_need = need - acc_min;
    BiSeries f = make(i, factor_need);
    if (i == 0)
      acc = f.truncated(std::min(f.tau_max(), need));
    else
      acc = mul(acc, f, need);
    acc_min += min_degrees[i];
  }
  return acc;
}

}  // namespace ehrhart
