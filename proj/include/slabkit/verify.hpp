#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "slabkit/chambers.hpp"
#include "slabkit/engine.hpp"

namespace slabkit {

/// x = (2u, |u|^2 - 1) / (|u|^2 + 1): an exact unit vector for rational u.
RatVec inverse_stereographic(const RatVec& u);

/// Deterministic stream of exact rational unit vectors in dimension d.
class SpherePointStream {
 public:
  SpherePointStream(std::size_t dim, std::uint64_t seed);
  /// With an arrangement, points on any of its hyperplanes are skipped.
  SpherePointStream(std::size_t dim, std::uint64_t seed, SweepArrangement arr);
  RatVec next();
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::mt19937_64 rng_;
  std::optional<SweepArrangement> arr_;
};

std::vector<RatVec> rational_sphere_points(std::size_t d, std::size_t n, std::uint64_t seed);
std::vector<RatVec> rational_sphere_points(const NormBall& ball, std::size_t n, std::uint64_t seed);

/// Exact unit vectors inside the open region of `region` (same sign vector).
std::vector<RatVec> sphere_points_in_region(const NormBall& ball, const Region& region, std::size_t n,
                                            std::uint64_t seed);

/// Rational t uniform in (lo, hi) keeping a margin of (hi - lo)/1000 from both ends.
Rat interior_t(const Rat& lo, const Rat& hi, std::mt19937_64& rng);

/// t-interval of the chamber for a different direction in the same region.
std::pair<Rat, Rat> chamber_interval_at(const NormBall& ball, const Chamber& c, const RatVec& a);

struct McEstimate {
  double estimate = 0;
  double stderr_ = 0;
  std::size_t accepted = 0;
  std::size_t samples = 0;
};

enum class SimdLevel { Scalar, Avx2 };
SimdLevel detected_simd();
std::string to_string(SimdLevel s);

/// Box sampling over the ball's bounding box: mean of sum_i x_i^M (1 when
/// M = 0) over points in ball ∩ {|<a,x>| <= t/2}, times the box volume.
McEstimate mc_slab_moment(const NormBall& ball, const std::vector<double>& a, double t, unsigned M,
                          std::size_t n_samples, std::uint64_t seed, unsigned threads = 1);
McEstimate mc_slab_moment(const NormBall& ball, const std::vector<double>& a, double t, unsigned M,
                          std::size_t n_samples, std::uint64_t seed, unsigned threads, SimdLevel level);

enum class CompareMode { Exact, MonteCarlo };

struct ChamberRecord {
  std::string chamber;
  std::size_t tested = 0;
  std::size_t matches = 0;
  std::vector<std::string> mismatches;  // "a=..., t=...: formula X, oracle Y"
  double worst_sigma = 0;               // Monte Carlo only
};

struct ComparisonReport {
  std::vector<ChamberRecord> records;
  bool pass = true;
  nlohmann::json to_json() const;
};

struct CompareBudget {
  std::size_t points = 100;      // points per chamber (exact mode)
  std::size_t samples = 1000000; // Monte Carlo samples per point
  std::size_t mc_points = 1;     // points per chamber (Monte Carlo mode)
  double sigmas = 3.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

ComparisonReport compare(const NormBall& ball, ObjectKind kind, unsigned M, const PiecewiseFormula& pw,
                         CompareMode mode, const CompareBudget& budget);

}  // namespace slabkit
