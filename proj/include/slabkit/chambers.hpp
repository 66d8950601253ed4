#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slabkit/polytope.hpp"

namespace slabkit {

/// Hyperplanes (v - w)^perp for vertex pairs, as primitive integer normals
/// with first nonzero entry positive.
struct SweepArrangement {
  std::size_t dim = 0;
  std::vector<RatVec> normals;
};

struct Region {
  RatVec rep;
  std::vector<int> sign_vector;  // sign of <rep, h> per arrangement normal
  std::vector<std::uint32_t> vertex_order;
  bool generic = true;

  std::string key() const;
};

struct TInterval {
  std::size_t j = 0;
  Rat lo;  // bounds in the doubled scale t = 2<a, x>
  Rat hi;
  Rat t_rep;
};

struct Chamber {
  Region region;
  std::size_t j = 0;
  Rat lo;
  Rat hi;
  Rat t_rep;
  std::vector<std::uint32_t> cut_edges;        // edges crossed by H(a_rep, t_rep)
  std::vector<std::uint32_t> inside_vertices;  // |<a_rep, v>| < t_rep / 2

  std::string descriptor() const;
};

struct RegionSearch {
  bool fundamental_only = true;
  std::uint64_t seed = 20240607;
  std::size_t saturation = 20000;   // consecutive samples without a new region
  std::size_t max_samples = 4000000;
};

SweepArrangement sweep_arrangement(const NormBall& ball);

std::vector<int> sign_vector(const SweepArrangement& arr, const RatVec& a);
bool is_generic(const SweepArrangement& arr, const RatVec& a);

/// Region through an explicit representative. Non-generic representatives
/// are rejected with BoundaryPoint unless allow_nongeneric is set (used to
/// reproduce published tables whose representatives sit on walls).
Region make_region(const NormBall& ball, const SweepArrangement& arr, const RatVec& a, bool allow_nongeneric = false);

/// Complete region counts known for the built-in balls (used as a stopping
/// criterion by the sampler); nullopt for other balls.
std::optional<std::size_t> known_region_count(const NormBall& ball, bool fundamental_only);

std::vector<Region> enumerate_regions(const NormBall& ball, const RegionSearch& search);
inline std::vector<Region> enumerate_regions(const NormBall& ball, bool fundamental_only) {
  RegionSearch s;
  s.fundamental_only = fundamental_only;
  return enumerate_regions(ball, s);
}

/// Intervals between consecutive distinct positive values of 2<a, v>.
std::vector<TInterval> intervals(const NormBall& ball, const Region& region);

Chamber make_chamber(const NormBall& ball, const Region& region, const TInterval& iv);
/// Same chamber data at another t strictly inside the interval.
Chamber rechoose_t(const NormBall& ball, const Chamber& c, const Rat& t);

std::vector<Chamber> enumerate_chambers(const NormBall& ball, const RegionSearch& search);
inline std::vector<Chamber> enumerate_chambers(const NormBall& ball, bool fundamental_only) {
  RegionSearch s;
  s.fundamental_only = fundamental_only;
  return enumerate_chambers(ball, s);
}

/// Chambers for a fixed list of (possibly non-generic) representatives.
std::vector<Chamber> chambers_for_representatives(const NormBall& ball, const std::vector<RatVec>& reps);

/// Hand-picked cube representatives of the published chamber tables (d = 2, 3, 4).
std::vector<RatVec> table_representatives(std::size_t d);

/// Chamber containing (a, t) with t > 0; BoundaryPoint when a lies on an
/// arrangement hyperplane or t/2 equals some <a, v>; Empty when t is beyond
/// the last vertex.
Chamber locate_chamber(const NormBall& ball, const RatVec& a, const Rat& t);

/// All 2^d d! signed permutations as (perm, sign) with x_i -> sign[i] x_{perm[i]}.
std::vector<std::pair<std::vector<std::size_t>, std::vector<int>>> signed_permutations(std::size_t d);

nlohmann::json chambers_to_json(const std::vector<Chamber>& chambers);

}  // namespace slabkit
