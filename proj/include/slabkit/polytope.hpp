#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "slabkit/rational.hpp"

namespace slabkit {

using VertexSet = std::vector<std::uint32_t>;  // sorted vertex indices

/// Halfspace <normal, x> <= offset.
struct Halfspace {
  RatVec normal;
  Rat offset;
};

struct Facet {
  RatVec normal;
  Rat offset;
  VertexSet vertices;
};

/// Centrally symmetric V-polytope with its facets and edges.
struct NormBall {
  std::size_t dim = 0;
  std::string name;  // "cube", "cross" or "custom"
  std::vector<RatVec> vertices;
  std::vector<Facet> facets;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

struct HPolytope {
  std::size_t dim = 0;
  std::vector<Halfspace> inequalities;
};

/// Every face of a polytope as a vertex set, grouped by dimension.
struct FaceLattice {
  std::size_t dim = 0;
  std::vector<VertexSet> faces;
  std::vector<int> face_dim;
  /// children[f]: faces of dimension face_dim[f] - 1 contained in f.
  std::vector<std::vector<std::size_t>> children;
  std::size_t top = 0;

  std::vector<std::size_t> count_by_dim() const;
};

NormBall make_cube(std::size_t d);
NormBall make_cross_polytope(std::size_t d);
/// Facets by brute force over d-subsets of the points, then edges. Throws
/// NotFullDimensional, NotVertexSet, or NotCentrallySymmetric (when
/// require_symmetric is set).
NormBall build_face_lattice(const std::vector<RatVec>& vertices, bool require_symmetric = true);

/// Closure of the facet vertex sets under intersection. `facet_sets` may hold
/// candidates that are not facets (they are filtered by affine dimension).
FaceLattice compute_faces(const std::vector<RatVec>& points, const std::vector<VertexSet>& facet_sets,
                          std::size_t polytope_dim);

/// Affine dimension of the listed points (-1 when empty).
int affine_dimension(const std::vector<RatVec>& points, const VertexSet& subset);

HPolytope to_hpolytope(const NormBall& ball);
/// Ball intersected with |<a, x>| <= t/2.
HPolytope slab_hpolytope(const NormBall& ball, const RatVec& a, const Rat& t);

RatVec interior_point(const NormBall& ball);
RatVec interior_point(const HPolytope& p);

/// Vertices of an H-polytope (feasible intersections of d boundaries).
std::vector<RatVec> hpolytope_vertices(const HPolytope& p);

/// An affine function x -> <coeffs, x> + constant.
struct AffineForm {
  RatVec coeffs;
  Rat constant;
};

/// Sum over forms of the integral of form^M over p; for M = 0 this is the
/// volume (counted once). Lower-dimensional inputs integrate to zero.
Rat integrate_affine_powers(const HPolytope& p, const std::vector<AffineForm>& forms, unsigned M);

Rat exact_volume(const HPolytope& p);
/// Integral of sum_i x_i^M over p (volume when M = 0).
Rat exact_moment(const HPolytope& p, unsigned M);
/// (d-1)-volume (M = 0) or sum_i x_i^M moment of ball ∩ {<a,x> = t/2}; a
/// must be an exact unit vector.
Rat exact_slice_moment(const NormBall& ball, const RatVec& a, const Rat& t, unsigned M);

nlohmann::json polytope_to_json(const NormBall& ball);
NormBall polytope_from_json(const nlohmann::json& j);

}  // namespace slabkit
