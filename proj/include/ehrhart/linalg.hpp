#pragma once

// Exact rational and integer linear algebra: vectors, matrices, column
// Hermite normal form, primitive vectors, lattices and projected lattices.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ehrhart/error.hpp"
#include "ehrhart/rational.hpp"

namespace ehrhart {

using RatVector = std::vector<Rational>;

inline RatVector make_vector(std::initializer_list<long> entries) {
  RatVector v;
  v.reserve(entries.size());
  for (long e : entries) v.emplace_back(e);
  return v;
}

inline void require_same_size(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size())
    fail(Errc::dimension_mismatch,
         "vector lengths differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  require_same_size(a, b);
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVector operator+(const RatVector& a, const RatVector& b) {
  require_same_size(a, b);
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline RatVector operator-(const RatVector& a, const RatVector& b) {
  require_same_size(a, b);
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVector operator*(const Rational& c, const RatVector& a) {
  RatVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline bool is_integral(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_integer(x); });
}

/// Dense row-major rational matrix. Columns usually carry the geometric
/// objects (generators, basis vectors).
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RatMatrix from_columns(std::span<const RatVector> columns, std::size_t rows) {
    RatMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) fail(Errc::dimension_mismatch, "column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  static RatMatrix from_columns(std::span<const RatVector> columns) {
    if (columns.empty()) fail(Errc::bad_args, "from_columns needs the row count for an empty column list");
    return from_columns(columns, columns.front().size());
  }

  static RatMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    RatMatrix m(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size());
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != m.cols_) fail(Errc::dimension_mismatch, "ragged matrix literal");
      std::size_t j = 0;
      for (long e : row) m(i, j++) = e;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVector column(std::size_t j) const {
    RatVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  RatVector row(std::size_t i) const {
    return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  std::vector<RatVector> columns() const {
    std::vector<RatVector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  void set_column(std::size_t j, std::span<const Rational> c) {
    if (c.size() != rows_) fail(Errc::dimension_mismatch, "set_column length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Columns in [first, first+count).
  RatMatrix column_block(std::size_t first, std::size_t count) const {
    RatMatrix b(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < count; ++j) b(i, j) = (*this)(i, first + j);
    return b;
  }

  RatMatrix select_columns(std::span<const std::size_t> idx) const {
    RatMatrix b(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) b(i, j) = (*this)(i, idx[j]);
    return b;
  }

  RatMatrix select_rows(std::span<const std::size_t> idx) const {
    RatMatrix b(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) b(i, j) = (*this)(idx[i], j);
    return b;
  }

  bool is_integral() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return ehrhart::is_integer(x); });
  }

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) fail(Errc::dimension_mismatch, "matrix product shape mismatch");
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

inline RatVector operator*(const RatMatrix& a, std::span<const Rational> x) {
  if (a.cols() != x.size()) fail(Errc::dimension_mismatch, "matrix-vector shape mismatch");
  RatVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline RatVector operator*(const RatMatrix& a, const RatVector& x) { return a * std::span<const Rational>(x); }

namespace detail {

/// Gauss-Jordan on [A | B]; returns rank and leaves A in reduced row echelon form.
inline std::size_t row_reduce(RatMatrix& a, RatMatrix* b, std::vector<std::size_t>* pivots = nullptr) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != rank) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(rank, j));
      if (b)
        for (std::size_t j = 0; j < b->cols(); ++j) std::swap((*b)(piv, j), (*b)(rank, j));
    }
    Rational inv = 1 / a(rank, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(rank, j) *= inv;
    if (b)
      for (std::size_t j = 0; j < b->cols(); ++j) (*b)(rank, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == rank || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= f * a(rank, j);
      if (b)
        for (std::size_t j = 0; j < b->cols(); ++j) (*b)(i, j) -= f * (*b)(rank, j);
    }
    if (pivots) pivots->push_back(col);
    ++rank;
  }
  return rank;
}

}  // namespace detail

inline std::size_t rank(RatMatrix m) { return detail::row_reduce(m, nullptr); }

inline Rational determinant(RatMatrix m) {
  if (m.rows() != m.cols()) fail(Errc::dimension_mismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Inverse of a square nonsingular matrix; NotABasis when singular.
inline RatMatrix inverse(const RatMatrix& m) {
  if (m.rows() != m.cols()) fail(Errc::dimension_mismatch, "inverse of a non-square matrix");
  RatMatrix a = m;
  RatMatrix b = RatMatrix::identity(m.rows());
  if (detail::row_reduce(a, &b) != m.rows()) fail(Errc::not_a_basis, "singular matrix");
  return b;
}

/// Unique solution of A x = b for square nonsingular A.
inline RatVector solve(const RatMatrix& a, std::span<const Rational> b) { return inverse(a) * b; }

/// Solution of a consistent (possibly overdetermined) system with full column
/// rank; nullopt when inconsistent.
inline std::optional<RatVector> solve_full_column_rank(const RatMatrix& a, std::span<const Rational> rhs) {
  RatMatrix m = a;
  RatMatrix b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  std::vector<std::size_t> pivots;
  std::size_t r = detail::row_reduce(m, &b, &pivots);
  if (r != a.cols()) fail(Errc::not_a_basis, "columns are dependent");
  for (std::size_t i = r; i < a.rows(); ++i)
    if (b(i, 0) != 0) return std::nullopt;
  RatVector x(a.cols());
  for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = b(i, 0);
  return x;
}

/// Rational basis of {x : A x = 0} (columns of the result).
inline RatMatrix nullspace(const RatMatrix& a) {
  RatMatrix m = a;
  std::vector<std::size_t> pivots;
  std::size_t r = detail::row_reduce(m, nullptr, &pivots);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  RatMatrix basis(a.cols(), a.cols() - r);
  std::size_t k = 0;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    basis(free, k) = 1;
    for (std::size_t i = 0; i < r; ++i) basis(pivots[i], k) = -m(i, free);
    ++k;
  }
  return basis;
}

/// Smallest positive multiple of v that is integral with coprime entries.
inline RatVector primitive_vector(std::span<const Rational> v) {
  if (is_zero(v)) fail(Errc::zero_vector, "primitive_vector of the zero vector");
  Integer den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, Integer(x * den));
  RatVector p(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) p[i] = Rational(Integer(v[i] * den) / g);
  return p;
}

inline RatVector primitive_vector(const RatVector& v) { return primitive_vector(std::span<const Rational>(v)); }

/// Column Hermite normal form: H = M U with H lower triangular, positive
/// diagonal, entries left of each pivot reduced into [0, pivot), and U
/// unimodular. Extra columns (cols > rows) of H are zero.
struct HermiteForm {
  RatMatrix h;
  RatMatrix u;
};

inline HermiteForm hnf(const RatMatrix& m) {
  if (!m.is_integral()) fail(Errc::bad_args, "hnf requires an integer matrix");
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows > cols) fail(Errc::not_full_rank, "more rows than columns");
  std::vector<std::vector<Integer>> h(cols, std::vector<Integer>(rows));  // column-major
  std::vector<std::vector<Integer>> u(cols, std::vector<Integer>(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) h[j][i] = m(i, j).get_num();
    u[j][j] = 1;
  }
  auto combine = [&](std::size_t a, std::size_t b, const Integer& x, const Integer& y, const Integer& z,
                     const Integer& w) {
    // (col_a, col_b) <- (x col_a + y col_b, z col_a + w col_b)
    for (auto* mat : {&h, &u}) {
      auto& ca = (*mat)[a];
      auto& cb = (*mat)[b];
      for (std::size_t i = 0; i < ca.size(); ++i) {
        Integer na = x * ca[i] + y * cb[i];
        Integer nb = z * ca[i] + w * cb[i];
        ca[i] = std::move(na);
        cb[i] = std::move(nb);
      }
    }
  };
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = i + 1; j < cols; ++j) {
      if (h[j][i] == 0) continue;
      Integer g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), h[i][i].get_mpz_t(), h[j][i].get_mpz_t());
      Integer a = h[i][i] / g, b = h[j][i] / g;
      combine(i, j, x, y, Integer(-b), a);
    }
    if (h[i][i] == 0) fail(Errc::not_full_rank, "row " + std::to_string(i) + " is dependent");
    if (h[i][i] < 0)
      for (auto* mat : {&h, &u})
        for (auto& e : (*mat)[i]) e = -e;
    for (std::size_t j = 0; j < i; ++j) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h[j][i].get_mpz_t(), h[i][i].get_mpz_t());
      if (q != 0) combine(j, i, Integer(1), Integer(-q), Integer(0), Integer(1));
    }
  }
  HermiteForm out{RatMatrix(rows, cols), RatMatrix(cols, cols)};
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) out.h(i, j) = h[j][i];
    for (std::size_t i = 0; i < cols; ++i) out.u(i, j) = u[j][i];
  }
  return out;
}

/// Basis of {x in Z^n : N x = 0} for an integer matrix N of full row rank.
inline RatMatrix integer_kernel(const RatMatrix& n) {
  if (n.rows() == 0) return RatMatrix::identity(n.cols());
  auto form = hnf(n);
  return form.u.column_block(n.rows(), n.cols() - n.rows());
}

/// Lattice generated by the columns of a square nonsingular matrix.
class LatticeBasis {
 public:
  LatticeBasis() = default;

  explicit LatticeBasis(RatMatrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols()) fail(Errc::not_a_basis, "lattice basis must be square");
    determinant_ = basis_.rows() == 0 ? Rational(1) : ehrhart::determinant(basis_);
    if (determinant_ == 0) fail(Errc::not_a_basis, "lattice basis is singular");
  }

  static LatticeBasis standard(std::size_t d) { return LatticeBasis(RatMatrix::identity(d)); }

  const RatMatrix& basis() const { return basis_; }
  const Rational& determinant() const { return determinant_; }
  Rational covolume() const { return abs(determinant_); }
  std::size_t dimension() const { return basis_.rows(); }

  /// Coordinates of x in this basis.
  RatVector coordinates(std::span<const Rational> x) const { return solve(basis_, x); }

  bool contains(std::span<const Rational> x) const {
    if (dimension() == 0) return true;
    return is_integral(coordinates(x));
  }

  bool is_standard() const { return basis_ == RatMatrix::identity(dimension()); }

 private:
  RatMatrix basis_;
  Rational determinant_ = 1;
};

/// Two-sided membership test.
inline bool same_lattice(const LatticeBasis& a, const LatticeBasis& b) {
  if (a.dimension() != b.dimension()) return false;
  for (std::size_t j = 0; j < a.dimension(); ++j)
    if (!b.contains(a.basis().column(j))) return false;
  for (std::size_t j = 0; j < b.dimension(); ++j)
    if (!a.contains(b.basis().column(j))) return false;
  return true;
}

/// Lattice generated by the columns of an arbitrary rational matrix whose
/// columns span R^rows. Uses HNF after clearing denominators.
inline LatticeBasis lattice_from_generators(const RatMatrix& gens) {
  Integer den = 1;
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < gens.cols(); ++j) den = lcm(den, gens(i, j).get_den());
  RatMatrix scaled(gens.rows(), gens.cols());
  for (std::size_t i = 0; i < gens.rows(); ++i)
    for (std::size_t j = 0; j < gens.cols(); ++j) scaled(i, j) = gens(i, j) * den;
  auto form = hnf(scaled);
  RatMatrix basis = form.h.column_block(0, gens.rows());
  Rational inv_den(Integer(1), den);
  for (std::size_t i = 0; i < basis.rows(); ++i)
    for (std::size_t j = 0; j < basis.cols(); ++j) basis(i, j) *= inv_den;
  return LatticeBasis(basis);
}

/// Image of the ambient lattice under projection along L = span(subspace_gens)
/// onto W = span(complement_gens), as a lattice in complement_gens coordinates.
inline LatticeBasis projected_lattice_basis(const LatticeBasis& ambient, std::span<const RatVector> subspace_gens,
                                            std::span<const RatVector> complement_gens) {
  const std::size_t d = ambient.dimension();
  const std::size_t k = subspace_gens.size();
  if (k + complement_gens.size() != d) fail(Errc::not_a_basis, "generator count does not match dimension");
  std::vector<RatVector> all(subspace_gens.begin(), subspace_gens.end());
  all.insert(all.end(), complement_gens.begin(), complement_gens.end());
  if (d == 0) return LatticeBasis(RatMatrix(0, 0));
  RatMatrix split = RatMatrix::from_columns(all, d);
  RatMatrix coords;
  try {
    coords = inverse(split) * ambient.basis();
  } catch (const Error&) {
    fail(Errc::not_a_basis, "subspace and complement generators are dependent");
  }
  const std::size_t w = d - k;
  if (w == 0) return LatticeBasis(RatMatrix(0, 0));
  RatMatrix images(w, d);
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < d; ++j) images(i, j) = coords(k + i, j);
  return lattice_from_generators(images);
}

/// Smallest q > 0 with q v integral for every v.
inline Integer smallest_dilation(std::span<const RatVector> vertices) {
  Integer q = 1;
  for (const auto& v : vertices)
    for (const auto& x : v) q = lcm(q, x.get_den());
  return q;
}

}  // namespace ehrhart
