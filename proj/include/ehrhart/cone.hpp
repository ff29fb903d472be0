#pragma once

// Simplices, their vertex cones, face subsets of simplicial cones and the
// splitting of a cone along a face into an integral part and a discrete part.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ehrhart/error.hpp"
#include "ehrhart/linalg.hpp"

namespace ehrhart {

class RationalSimplex {
 public:
  RationalSimplex() = default;

  explicit RationalSimplex(std::vector<RatVector> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) fail(Errc::degenerate_simplex, "no vertices");
    const std::size_t d = vertices_.front().size();
    if (vertices_.size() != d + 1)
      fail(Errc::degenerate_simplex, "a simplex in dimension " + std::to_string(d) + " needs " +
                                         std::to_string(d + 1) + " vertices, got " + std::to_string(vertices_.size()));
    for (const auto& v : vertices_)
      if (v.size() != d) fail(Errc::dimension_mismatch, "vertices of different dimensions");
    if (d > 0) {
      RatMatrix diff(d, d);
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) diff(i, j) = vertices_[j + 1][i] - vertices_[0][i];
      if (determinant(diff) == 0) fail(Errc::degenerate_simplex, "vertices are affinely dependent");
    }
    period_ = smallest_dilation(vertices_);
  }

  std::size_t dimension() const { return vertices_.size() - 1; }
  const std::vector<RatVector>& vertices() const { return vertices_; }
  const RatVector& vertex(std::size_t i) const { return vertices_.at(i); }
  const Integer& period() const { return period_; }

 private:
  std::vector<RatVector> vertices_;
  Integer period_ = 1;
};

/// vertex + cone(generators), with a sign for signed decompositions.
struct SimplicialAffineCone {
  RatVector vertex;
  std::vector<RatVector> generators;
  int sign = 1;

  std::size_t ambient_dimension() const { return vertex.size(); }
  std::size_t dimension() const { return generators.size(); }

  RatMatrix generator_matrix() const { return RatMatrix::from_columns(generators, vertex.size()); }

  static SimplicialAffineCone make(RatVector vertex, std::vector<RatVector> generators, int sign = 1) {
    for (auto& g : generators) g = primitive_vector(g);
    SimplicialAffineCone c{std::move(vertex), std::move(generators), sign};
    if (sign != 1 && sign != -1) fail(Errc::bad_args, "cone sign must be +1 or -1");
    if (!c.generators.empty() && rank(c.generator_matrix()) != c.generators.size())
      fail(Errc::not_solid, "cone generators are linearly dependent");
    return c;
  }
};

inline std::vector<SimplicialAffineCone> vertex_cones(const RationalSimplex& p) {
  std::vector<SimplicialAffineCone> cones;
  const auto& vs = p.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::vector<RatVector> gens;
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (j != i) gens.push_back(vs[j] - vs[i]);
    cones.push_back(SimplicialAffineCone::make(vs[i], std::move(gens)));
  }
  return cones;
}

/// Subset I of generator indices; face(I) = vertex + cone{v_i : i in I}.
/// Indices are 0-based.
struct FaceSubset {
  std::vector<std::size_t> indices;  // sorted, distinct

  std::size_t size() const { return indices.size(); }
  bool contains(std::size_t i) const { return std::binary_search(indices.begin(), indices.end(), i); }

  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (auto i : indices) m |= std::uint64_t{1} << i;
    return m;
  }

  static FaceSubset from_mask(std::uint64_t mask) {
    FaceSubset f;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
      if (mask & 1u) f.indices.push_back(i);
    return f;
  }

  /// Indices in {0..d-1} not in I.
  std::vector<std::size_t> complement(std::size_t d) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < d; ++i)
      if (!contains(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const FaceSubset&, const FaceSubset&) = default;
  friend auto operator<=>(const FaceSubset& a, const FaceSubset& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.indices <=> b.indices;
  }
};

/// All I with |I| >= d - r, i.e. faces of codimension <= r; sorted by (|I|, I).
inline std::vector<FaceSubset> face_family(std::size_t d, long r) {
  if (r < 0 || r > static_cast<long>(d)) fail(Errc::bad_codimension, "codimension must lie in [0, d]");
  if (d > 62) fail(Errc::bad_args, "dimension too large for face enumeration");
  std::vector<FaceSubset> out;
  const std::size_t min_size = d - static_cast<std::size_t>(r);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m)
    if (static_cast<std::size_t>(__builtin_popcountll(m)) >= min_size) out.push_back(FaceSubset::from_mask(m));
  std::sort(out.begin(), out.end());
  return out;
}

/// Pieces of a solid simplicial cone s + cone(v) split along L = span{v_i : i in I}.
/// Coordinates of the face part are taken w.r.t. v_I, those of the quotient
/// part w.r.t. v_{I^c} (which spans a complement W of L).
struct SplitData {
  FaceSubset face;
  std::vector<std::size_t> complement;
  RatVector s1;                     ///< component of the vertex in L (ambient coordinates)
  RatVector s2;                     ///< component of the vertex in W (ambient coordinates)
  SimplicialAffineCone a1;          ///< s1 + cone{v_i : i in I}, ambient coordinates
  SimplicialAffineCone a2;          ///< s2 + cone{v_i : i not in I}, ambient coordinates
  RatVector s2_coords;              ///< s2 in v_{I^c} coordinates
  LatticeBasis face_lattice;        ///< Lambda ∩ L in v_I coordinates
  LatticeBasis quotient_lattice;    ///< projected lattice in v_{I^c} coordinates
  RatMatrix face_lattice_ambient;   ///< basis of Lambda ∩ L as ambient columns
};

inline SplitData split_cone_along_face(const SimplicialAffineCone& a, const FaceSubset& face,
                                       const LatticeBasis& ambient) {
  const std::size_t d = a.ambient_dimension();
  if (a.dimension() != d) fail(Errc::not_solid, "face splitting needs a solid cone");
  if (ambient.dimension() != d) fail(Errc::dimension_mismatch, "ambient lattice dimension");
  for (auto i : face.indices)
    if (i >= d) fail(Errc::bad_args, "face index out of range");

  SplitData out;
  out.face = face;
  out.complement = face.complement(d);
  const RatMatrix gens = a.generator_matrix();
  const RatVector sigma = solve(gens, a.vertex);

  std::vector<RatVector> lgens, wgens;
  out.s1 = RatVector(d);
  out.s2 = RatVector(d);
  for (auto i : face.indices) {
    lgens.push_back(a.generators[i]);
    out.s1 = out.s1 + sigma[i] * a.generators[i];
  }
  for (auto i : out.complement) {
    wgens.push_back(a.generators[i]);
    out.s2 = out.s2 + sigma[i] * a.generators[i];
    out.s2_coords.push_back(sigma[i]);
  }
  out.a1 = SimplicialAffineCone{out.s1, lgens, 1};
  out.a2 = SimplicialAffineCone{out.s2, wgens, 1};

  // Lambda ∩ L: integer kernel, in lattice coordinates, of the covectors
  // cutting out L.
  const std::size_t k = face.size();
  if (k == 0) {
    out.face_lattice = LatticeBasis(RatMatrix(0, 0));
    out.face_lattice_ambient = RatMatrix(d, 0);
  } else {
    const RatMatrix a_inv = inverse(ambient.basis());
    const RatMatrix to_lattice = a_inv * gens;  // generators in lattice coordinates
    const RatMatrix inv_lat = inverse(to_lattice);
    RatMatrix cut(d - k, d);
    for (std::size_t r = 0; r < out.complement.size(); ++r) {
      RatVector row = primitive_vector(inv_lat.row(out.complement[r]));
      for (std::size_t j = 0; j < d; ++j) cut(r, j) = row[j];
    }
    const RatMatrix kernel = integer_kernel(cut);  // lattice coordinates, d x k
    out.face_lattice_ambient = ambient.basis() * kernel;
    const RatMatrix lmat = RatMatrix::from_columns(lgens, d);
    RatMatrix in_face(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      auto c = solve_full_column_rank(lmat, out.face_lattice_ambient.column(j));
      ensure(c.has_value(), "face lattice vector outside L");
      for (std::size_t i = 0; i < k; ++i) in_face(i, j) = (*c)[i];
    }
    out.face_lattice = LatticeBasis(in_face);
  }
  out.quotient_lattice = projected_lattice_basis(ambient, lgens, wgens);
  return out;
}

}  // namespace ehrhart
