#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "slabkit/engine.hpp"

namespace slabkit {

/// grad f - <grad f, a> a with derivatives in a_1..a_d only.
std::vector<RatFunc> spherical_gradient(const RatFunc& f, std::size_t d);

struct CriticalSystem {
  std::string chamber;
  std::vector<MPoly> generators;  // numerators of the gradient entries
  MPoly sphere;                   // a_1^2 + ... + a_d^2 - 1
};

/// Generators for an explicit piece; zero numerators are dropped.
CriticalSystem critical_system(const RatFunc& f, std::size_t d, std::string chamber = {});
CriticalSystem critical_system(const NormBall& ball, const Chamber& chamber, ObjectKind kind, unsigned M);

nlohmann::json to_json(const CriticalSystem& s);

/// Closed-form M-th slice moments of the square on the two chambers
/// 0 < t < a1 - a2 and a1 - a2 < t < a1 + a2 (ring a1, a2, t).
std::pair<RatFunc, RatFunc> square_slice_moment_closed(unsigned M);

struct SquareCriticalConditions {
  unsigned M = 0;
  std::vector<MPoly> boundary;  // a1 - a2 - t, a1 + a2 - t
  std::vector<MPoly> corner;    // a1 - 1, a2
  MPoly c11;                    // interior condition on the first chamber (parity of M)
  MPoly c12;                    // interior condition on the second chamber
};

/// A_+(x, t) = (t - x)^M + (t + x)^M and A_-(x, t) = ((t - x)^M - (t + x)^M) / x
/// for x one of the ring variables.
MPoly square_a_plus(std::size_t var, unsigned M);
MPoly square_a_minus(std::size_t var, unsigned M);

SquareCriticalConditions square_slice_critical_conditions(unsigned M);

struct DegreeEntry {
  std::string chamber;
  std::size_t cls = 0;
  int degree = kNegInfinity;
};

/// One entry per piece, keyed by chamber descriptor.
std::vector<DegreeEntry> degree_ledger(const PiecewiseFormula& pw);

struct DegreeComparison {
  std::size_t compared = 0;
  std::size_t skipped_zero = 0;       // pieces that vanish identically
  std::vector<std::string> exceptions;
};

/// Chamberwise comparison of two ledgers over the same chambers. Pieces that
/// are identically zero in either ledger have no degree and are skipped.
DegreeComparison compare_degree_ledgers(const std::vector<DegreeEntry>& base, const std::vector<DegreeEntry>& other);

}  // namespace slabkit
