// Oracle-checked errata for golden files.
//
// A printed moment formula f_k^(M,d) lives on the same chambers as the volume
// formula f_k^(0,d). Every printed formula that matches no engine class is
// checked there against the exact oracle; when the oracle refutes it and
// confirms the engine, the engine formula is written as its correction.
// A volume formula has no such pairing; it is checked only when exactly one
// engine class and one printed formula are left over, on that class's chambers.
//
// usage: derive_errata GOLDEN.json [points]

#include <fstream>
#include <iostream>

#include "slabkit/golden.hpp"

using namespace slabkit;

namespace {

bool homogeneous(const MPoly& p) {
  for (const auto& t : p.terms())
    if (t.mono.degree() != p.total_degree()) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: derive_errata GOLDEN.json [points]\n";
    return 2;
  }
  const std::size_t points = argc > 2 ? std::stoul(argv[2]) : 20;
  GoldenFile g = load_golden(argv[1]);
  NormBall ball = make_cube(g.dim);
  auto volume = piecewise(ball, g.object, 0);

  std::ifstream in(argv[1]);
  nlohmann::json doc = nlohmann::json::parse(in);
  int found = 0;
  for (unsigned M : g.moments()) {
    auto moment = M == 0 ? volume : piecewise(ball, g.object, M);
    auto check = check_golden(g, M, moment, 50);
    for (const auto& name : check.unmatched_golden) {
      GoldenFile h = g;
      GoldenFormula* f = nullptr;
      for (auto& x : h.formulas)
        if (x.name == name) f = &x;
      if (M == 0) {
        if (check.unmatched_golden.size() != 1 || check.unmatched_engine.size() != 1) {
          std::cout << name << ": volume formula without a unique candidate, left as is\n";
          continue;
        }
        for (const auto& c : moment.distinct) {
          bool used = false;
          for (const auto& x : g.formulas)
            if (x.M == 0 && x.name != name) used = used || equivalent_up_to_symmetry(c, x.expected(), g.dim, g.object);
          if (!used) f->erratum = GoldenErratum{"candidate", c};
        }
      }
      auto c = certify_printed(h, *f, volume, moment, points);
      std::cout << name << ": oracle agrees with engine " << c.engine_agrees << "/" << c.tested << ", with printed "
                << c.printed_agrees << "/" << c.tested << "\n";
      if (!c.refutes_printed()) {
        std::cout << "  not refuted, left as is\n";
        continue;
      }
      std::string note = "printed formula disagrees with the exact oracle at all " + std::to_string(c.tested) +
                         " sampled points of its chambers (" + c.chambers.front() +
                         (c.chambers.size() > 1 ? ", ..." : "") + "); the engine formula agrees at all of them";
      if (!homogeneous(f->printed.num()) || !homogeneous(f->printed.den()))
        note += "; the printed formula is not homogeneous";
      for (auto& e : doc["formulas"])
        if (e["name"] == name) e["erratum"] = {{"note", note}, {"corrected", to_json(*c.engine_formula)}};
      ++found;
    }
  }
  std::ofstream out(argv[1]);
  out << doc.dump(1) << "\n";
  std::cout << found << " errata written\n";
  return 0;
}
