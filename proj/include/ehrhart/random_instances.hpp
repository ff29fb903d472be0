#pragma once

// Seeded generators of random simplices, cones and directions shared by the
// test suites and the CLI self-check.

#include <random>
#include <vector>

#include "ehrhart/cone.hpp"
#include "ehrhart/linalg.hpp"

namespace ehrhart::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational random_rational(Rng& rng, long max_abs_num, long max_den) {
  const long den = uniform(rng, 1, max_den);
  return make_rational(uniform(rng, -max_abs_num, max_abs_num), den);
}

/// Simplex with coordinates a/b, |a| <= max_abs * b, 1 <= b <= max_den.
inline RationalSimplex random_simplex(Rng& rng, std::size_t d, long max_den, long max_abs = 2) {
  while (true) {
    std::vector<RatVector> vs;
    for (std::size_t i = 0; i <= d; ++i) {
      RatVector v;
      for (std::size_t j = 0; j < d; ++j) {
        const long den = uniform(rng, 1, max_den);
        v.push_back(make_rational(uniform(rng, -max_abs * den, max_abs * den), den));
      }
      vs.push_back(std::move(v));
    }
    RatMatrix diff(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) diff(i, j) = vs[j + 1][i] - vs[0][i];
    if (d > 0 && determinant(diff) == 0) continue;
    return RationalSimplex(std::move(vs));
  }
}

inline RatVector random_integer_vector(Rng& rng, std::size_t d, long max_abs) {
  RatVector v(d);
  for (auto& x : v) x = uniform(rng, -max_abs, max_abs);
  return v;
}

/// Solid simplicial cone with integer generators |entry| <= max_entry and a
/// rational vertex with denominators <= max_den.
inline SimplicialAffineCone random_cone(Rng& rng, std::size_t d, long max_entry, long max_den) {
  while (true) {
    std::vector<RatVector> gens;
    for (std::size_t i = 0; i < d; ++i) gens.push_back(random_integer_vector(rng, d, max_entry));
    if (determinant(RatMatrix::from_columns(gens, d)) == 0) continue;
    RatVector vertex;
    for (std::size_t j = 0; j < d; ++j) vertex.push_back(random_rational(rng, 3, max_den));
    return SimplicialAffineCone::make(std::move(vertex), std::move(gens));
  }
}

/// Integer vector pairing nonzero with every given vector.
inline RatVector random_generic_direction(Rng& rng, std::size_t d, const std::vector<RatVector>& avoid,
                                          long max_abs = 9) {
  while (true) {
    RatVector lam = random_integer_vector(rng, d, max_abs);
    bool ok = true;
    for (const auto& w : avoid)
      if (dot(lam, w) == 0) ok = false;
    if (ok) return lam;
  }
}

}  // namespace ehrhart::testing
