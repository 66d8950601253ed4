#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "slabkit/engine.hpp"

namespace slabkit {

struct GoldenErratum {
  std::string note;
  RatFunc corrected;
};

struct GoldenFormula {
  std::string name;
  unsigned M = 0;
  RatFunc printed;
  std::optional<GoldenErratum> erratum;

  const RatFunc& expected() const { return erratum ? erratum->corrected : printed; }
};

struct GoldenFile {
  std::string path;
  std::string ball;
  std::size_t dim = 0;
  ObjectKind object = ObjectKind::Slab;
  std::vector<GoldenFormula> formulas;
  std::vector<unsigned> zero_moments;  // moments stated to vanish identically

  std::vector<unsigned> moments() const;
};

GoldenFile load_golden(const std::filesystem::path& path);

struct GoldenCheck {
  std::string file;
  std::size_t dim = 0;
  ObjectKind object = ObjectKind::Slab;
  unsigned M = 0;
  std::size_t engine_classes = 0;
  std::size_t golden_formulas = 0;
  std::size_t matched = 0;
  std::size_t sphere_points = 0;           // exact evaluations backing each slice match
  std::vector<std::string> pairs;          // "class k <-> name"
  std::vector<std::string> unmatched_engine;
  std::vector<std::string> unmatched_golden;
  std::vector<std::string> errata;         // names whose corrected form was used
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Matches the engine's distinct classes one-to-one against the golden
/// formulas of order M: exact equality up to signed permutation for slabs;
/// for slices, equality modulo the sphere relation (certified by reduction)
/// plus agreement at `sphere_points` exact rational sphere points.
GoldenCheck check_golden(const GoldenFile& g, unsigned M, const PiecewiseFormula& pw, std::size_t sphere_points = 200,
                         std::uint64_t seed = 1);

/// Independent check of one printed formula against the exact oracle on the
/// chambers where the volume formula with the same index lives. A printed
/// formula is refuted when the oracle agrees with the engine at every sampled
/// point and with the printed formula at none.
struct ErratumCertificate {
  std::string name;
  std::vector<std::string> chambers;
  std::size_t tested = 0;
  std::size_t engine_agrees = 0;
  std::size_t printed_agrees = 0;
  bool single_class = false;  // the engine has one formula on all those chambers
  std::optional<RatFunc> engine_formula;

  bool refutes_printed() const {
    return tested > 0 && engine_agrees == tested && printed_agrees == 0 && single_class;
  }
};

/// `volume` is the engine output for M = 0 and `moment` the one for f.M.
ErratumCertificate certify_printed(const GoldenFile& g, const GoldenFormula& f, const PiecewiseFormula& volume,
                                   const PiecewiseFormula& moment, std::size_t points = 20, std::uint64_t seed = 2024);

/// Regenerates the formulas for every moment a golden file lists and checks them.
std::vector<GoldenCheck> run_golden_file(const GoldenFile& g, unsigned threads = 1);

}  // namespace slabkit
