#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slabkit/chambers.hpp"
#include "slabkit/factored.hpp"
#include "slabkit/ratfunc.hpp"

namespace slabkit {

enum class ObjectKind { Slice, Slab };

std::string to_string(ObjectKind k);
ObjectKind parse_object_kind(const std::string& s);

enum class OriginKind { BallVertex, EdgeCut, Barycenter };

/// A point whose coordinates are rational functions of (a_1..a_d, t), all
/// over one factored denominator.
struct ParamPoint {
  std::vector<MPoly> num;
  FactorList den;

  FactoredFraction coord(std::size_t i) const { return FactoredFraction(num[i], den); }
  RatFunc coord_ratfunc(std::size_t i) const { return coord(i).to_ratfunc(); }
  RatVec eval(std::span<const Rat> point) const;
};

struct ParamVertex {
  ParamPoint point;
  OriginKind origin = OriginKind::BallVertex;
  std::uint32_t index = 0;  // ball vertex, edge, or face index
  int side = 0;             // +1 / -1 for cuts by H(a, +t) / H(a, -t)
};

struct ParamPolytope {
  ObjectKind kind = ObjectKind::Slab;
  std::size_t ambient_dim = 0;
  std::size_t dim = 0;  // d for slabs, d - 1 for slices
  Chamber chamber;
  std::vector<ParamVertex> vertices;
  FaceLattice faces;
};

struct ParamSimplex {
  std::vector<ParamPoint> vertices;  // dim + 1 points
  int orientation_sign = 1;
};

/// Variable ring for dimension d: a_1..a_d, t.
inline std::size_t ring_size(std::size_t d) { return d + 1; }

/// EdgeCut vertex x(t) = v + (t/2 - <a,v>) / <a, w - v> (w - v) of an edge.
ParamPoint edge_cut_point(const NormBall& ball, std::uint32_t edge, int side);

ParamPolytope param_slice(const NormBall& ball, const Chamber& chamber);
ParamPolytope param_slab(const NormBall& ball, const Chamber& chamber);

/// Chains edge ⊂ F_2 ⊂ ... ⊂ P; each simplex is the edge plus the
/// barycenters of the larger faces of the chain.
std::vector<ParamSimplex> barycentric_triangulate(const ParamPolytope& p);

/// Integral of sum_i x_i^M over the simplex for M >= 1, volume for M = 0.
/// Slices use the canonical form vol_{d-1} / |a| (exact on the unit sphere,
/// homogeneous of degree -1, and equal to the t-derivative of the slab
/// formula).
FactoredFraction simplex_moment(const ParamSimplex& s, ObjectKind kind, unsigned M, std::size_t d);

RatFunc assemble_formula(const NormBall& ball, const Chamber& chamber, ObjectKind kind, unsigned M);

struct FormulaPiece {
  Chamber chamber;
  RatFunc formula;
  std::size_t cls = 0;
};

struct PiecewiseFormula {
  std::string ball;
  std::size_t dim = 0;
  ObjectKind object = ObjectKind::Slab;
  unsigned M = 0;
  std::vector<FormulaPiece> pieces;
  std::vector<RatFunc> distinct;  // class representatives, indexed by FormulaPiece::cls
};

struct EngineOptions {
  unsigned threads = 1;
  RegionSearch search;
};

/// Minimum canonical key over the signed permutations of a_1..a_d.
std::string class_key(const RatFunc& f, std::size_t d);

/// Slabs: some signed permutation of g equals f exactly. Slices: some signed
/// permutation of g equals f modulo the sphere relation.
bool equivalent_up_to_symmetry(const RatFunc& f, const RatFunc& g, std::size_t d, ObjectKind kind);

PiecewiseFormula piecewise(const NormBall& ball, ObjectKind kind, unsigned M, const EngineOptions& opt = {});
/// Pieces for an explicit chamber list (same class bookkeeping).
PiecewiseFormula piecewise_for(const NormBall& ball, const std::vector<Chamber>& chambers, ObjectKind kind,
                               unsigned M, unsigned threads = 1);

nlohmann::json to_json(const PiecewiseFormula& f, bool latex = false);

struct EvalResult {
  Rat value;
  std::string chamber;
  bool boundary = false;     // (a, t) was on a chamber wall; adjacent formula used
  bool unit_direction = true;
};

/// Value of the slice/slab moment at (a, t). Off the unit sphere the slice
/// value is the canonical one (true value divided by |a|).
EvalResult evaluate(const NormBall& ball, ObjectKind kind, unsigned M, const RatVec& a, const Rat& t);

}  // namespace slabkit
