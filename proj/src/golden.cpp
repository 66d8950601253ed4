#include "slabkit/golden.hpp"

#include <fstream>
#include <random>
#include <set>

#include "slabkit/error.hpp"
#include "slabkit/verify.hpp"

namespace slabkit {

std::vector<unsigned> GoldenFile::moments() const {
  std::set<unsigned> ms(zero_moments.begin(), zero_moments.end());
  for (const auto& f : formulas) ms.insert(f.M);
  return {ms.begin(), ms.end()};
}

GoldenFile load_golden(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open golden file " + path.string());
  GoldenFile g;
  g.path = path.string();
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    g.ball = j.at("ball").get<std::string>();
    g.dim = j.at("dim").get<std::size_t>();
    g.object = parse_object_kind(j.at("object").get<std::string>());
    if (j.contains("zero_moments")) g.zero_moments = j["zero_moments"].get<std::vector<unsigned>>();
    for (const auto& e : j.at("formulas")) {
      GoldenFormula f;
      f.name = e.at("name").get<std::string>();
      f.M = e.at("M").get<unsigned>();
      f.printed = ratfunc_from_json(e.at("ratfunc"));
      if (e.contains("erratum"))
        f.erratum = GoldenErratum{e["erratum"].at("note").get<std::string>(),
                                  ratfunc_from_json(e["erratum"].at("corrected"))};
      if (f.printed.nvars() != ring_size(g.dim)) throw Error(ErrorKind::Parse, f.name + ": wrong variable count");
      g.formulas.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return g;
}

nlohmann::json GoldenCheck::to_json() const {
  return {{"file", file},
          {"dim", dim},
          {"object", slabkit::to_string(object)},
          {"M", M},
          {"engine_classes", engine_classes},
          {"golden_formulas", golden_formulas},
          {"matched", matched},
          {"sphere_points", sphere_points},
          {"pairs", pairs},
          {"unmatched_engine", unmatched_engine},
          {"unmatched_golden", unmatched_golden},
          {"errata", errata},
          {"pass", pass}};
}

namespace {

// Some signed permutation of g agrees with f at every probe (poles skipped).
bool agrees_at_points(const RatFunc& f, const RatFunc& g, std::size_t d, const std::vector<RatVec>& pts,
                      std::size_t& used) {
  for (const auto& [perm, sign] : signed_permutations(d)) {
    std::vector<std::size_t> p(perm.begin(), perm.end());
    std::vector<int> s(sign.begin(), sign.end());
    p.push_back(d);
    s.push_back(1);
    RatFunc h = rf_signed_permute(g, p, s);
    bool ok = true;
    std::size_t n = 0;
    for (const auto& pt : pts) {
      Rat x, y;
      try {
        x = rf_eval(f, pt);
        y = rf_eval(h, pt);
      } catch (const Error&) {
        continue;
      }
      if (x != y) {
        ok = false;
        break;
      }
      ++n;
    }
    if (ok && equal_mod_sphere(f, h, d)) {
      used = n;
      return true;
    }
  }
  return false;
}

}  // namespace

GoldenCheck check_golden(const GoldenFile& g, unsigned M, const PiecewiseFormula& pw, std::size_t sphere_points,
                         std::uint64_t seed) {
  const std::size_t d = g.dim;
  GoldenCheck r;
  r.file = g.path;
  r.dim = d;
  r.object = g.object;
  r.M = M;

  std::vector<const GoldenFormula*> expected;
  for (const auto& f : g.formulas)
    if (f.M == M) expected.push_back(&f);
  bool zero = std::find(g.zero_moments.begin(), g.zero_moments.end(), M) != g.zero_moments.end();

  std::vector<RatFunc> classes;
  for (const auto& c : pw.distinct)
    if (!(zero && c.is_zero())) classes.push_back(c);
  if (zero) {
    // every piece must vanish
    for (const auto& p : pw.pieces)
      if (!p.formula.is_zero()) r.unmatched_engine.push_back("nonzero piece on " + p.chamber.descriptor());
  }
  r.engine_classes = classes.size();
  r.golden_formulas = expected.size();

  std::vector<RatVec> pts;
  if (g.object == ObjectKind::Slice) {
    std::mt19937_64 rng(seed);
    for (const auto& a : rational_sphere_points(d, sphere_points, seed)) {
      RatVec pt = a;
      pt.push_back(interior_t(Rat(0), Rat(static_cast<long>(d)), rng));
      pts.push_back(std::move(pt));
    }
  }

  std::vector<bool> used(expected.size(), false);
  std::size_t min_points = sphere_points;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    bool found = false;
    for (std::size_t i = 0; i < expected.size() && !found; ++i) {
      if (used[i]) continue;
      const RatFunc& want = expected[i]->expected();
      bool eq = false;
      if (g.object == ObjectKind::Slab) {
        eq = class_key(classes[k], d) == class_key(want, d);
      } else {
        std::size_t n = 0;
        eq = agrees_at_points(classes[k], want, d, pts, n);
        if (eq) min_points = std::min(min_points, n);
      }
      if (eq) {
        used[i] = found = true;
        ++r.matched;
        r.pairs.push_back("class " + std::to_string(k) + " <-> " + expected[i]->name);
        if (expected[i]->erratum) r.errata.push_back(expected[i]->name + ": " + expected[i]->erratum->note);
      }
    }
    if (!found) r.unmatched_engine.push_back("class " + std::to_string(k) + ": " + to_string(classes[k]));
  }
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (!used[i]) r.unmatched_golden.push_back(expected[i]->name);
  r.sphere_points = g.object == ObjectKind::Slice ? min_points : 0;
  r.pass = r.unmatched_engine.empty() && r.unmatched_golden.empty() && (expected.size() > 0 || zero);
  return r;
}

namespace {

std::string index_of(const std::string& name) { return name.substr(0, name.find('^')); }

}  // namespace

ErratumCertificate certify_printed(const GoldenFile& g, const GoldenFormula& f, const PiecewiseFormula& volume,
                                   const PiecewiseFormula& moment, std::size_t points, std::uint64_t seed) {
  const std::size_t d = g.dim;
  NormBall ball = make_cube(d);
  ErratumCertificate c;
  c.name = f.name;

  const GoldenFormula* vol = nullptr;
  for (const auto& v : g.formulas)
    if (v.M == 0 && index_of(v.name) == index_of(f.name)) vol = &v;
  if (!vol) return c;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < volume.pieces.size(); ++i)
    if (equivalent_up_to_symmetry(volume.pieces[i].formula, vol->expected(), d, g.object)) idx.push_back(i);
  if (idx.empty() || moment.pieces.size() != volume.pieces.size()) return c;

  std::mt19937_64 rng(seed);
  c.single_class = true;
  c.engine_formula = moment.pieces[idx.front()].formula;
  for (std::size_t i : idx) {
    const auto& piece = moment.pieces[i];
    c.chambers.push_back(piece.chamber.descriptor());
    c.single_class = c.single_class && equivalent_up_to_symmetry(piece.formula, *c.engine_formula, d, g.object);
    for (const auto& a : sphere_points_in_region(ball, piece.chamber.region, points, seed + i)) {
      auto [lo, hi] = chamber_interval_at(ball, piece.chamber, a);
      RatVec pt = a;
      pt.push_back(interior_t(lo, hi, rng));
      Rat want = g.object == ObjectKind::Slab ? exact_moment(slab_hpolytope(ball, a, pt.back()), f.M)
                                              : exact_slice_moment(ball, a, pt.back(), f.M);
      ++c.tested;
      c.engine_agrees += rf_eval(piece.formula, pt) == want;
      try {
        c.printed_agrees += rf_eval(f.printed, pt) == want;
      } catch (const Error&) {
      }
    }
  }
  return c;
}

std::vector<GoldenCheck> run_golden_file(const GoldenFile& g, unsigned threads) {
  if (g.ball != "cube") throw Error(ErrorKind::InvalidArgument, "golden files are defined for cubes only");
  NormBall ball = make_cube(g.dim);
  std::vector<GoldenCheck> out;
  EngineOptions opt;
  opt.threads = threads;
  for (unsigned M : g.moments()) out.push_back(check_golden(g, M, piecewise(ball, g.object, M, opt)));
  return out;
}

}  // namespace slabkit
