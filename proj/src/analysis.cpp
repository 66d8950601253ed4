#include "slabkit/analysis.hpp"

#include <map>

#include "slabkit/error.hpp"

namespace slabkit {

std::vector<RatFunc> spherical_gradient(const RatFunc& f, std::size_t d) {
  const std::size_t nv = f.nvars();
  if (nv < d) throw Error(ErrorKind::InvalidArgument, "ring has fewer variables than the dimension");
  std::vector<RatFunc> g(d);
  RatFunc radial(nv);
  for (std::size_t i = 0; i < d; ++i) {
    g[i] = rf_derivative(f, i);
    radial += g[i] * RatFunc::variable(nv, i);
  }
  for (std::size_t i = 0; i < d; ++i) g[i] -= radial * RatFunc::variable(nv, i);
  return g;
}

CriticalSystem critical_system(const RatFunc& f, std::size_t d, std::string chamber) {
  CriticalSystem s;
  s.chamber = std::move(chamber);
  s.sphere = sphere_polynomial(d).extend(f.nvars());
  for (const auto& g : spherical_gradient(f, d)) {
    if (g.is_zero()) continue;
    s.generators.push_back(g.num().primitive());
  }
  return s;
}

CriticalSystem critical_system(const NormBall& ball, const Chamber& chamber, ObjectKind kind, unsigned M) {
  return critical_system(assemble_formula(ball, chamber, kind, M), ball.dim, chamber.descriptor());
}

nlohmann::json to_json(const CriticalSystem& s) {
  nlohmann::json j;
  j["chamber"] = s.chamber;
  std::size_t nv = s.sphere.nvars();
  auto names = default_var_names(nv);
  nlohmann::json gens = nlohmann::json::array();
  nlohmann::json text = nlohmann::json::array();
  for (const auto& g : s.generators) {
    gens.push_back(to_json(g));
    text.push_back(g.to_string(names));
  }
  j["generators"] = gens;
  j["sphere"] = to_json(s.sphere);
  text.push_back(s.sphere.to_string(names));
  j["system"] = text;
  return j;
}

namespace {

constexpr std::size_t kA1 = 0, kA2 = 1, kT = 2, kNv = 3;

MPoly var(std::size_t i) { return MPoly::variable(kNv, i); }
MPoly cst(const Rat& c) { return MPoly::constant(kNv, c); }
RatFunc rf(const MPoly& p) { return RatFunc(p); }

Rat pow2(unsigned e) {
  Rat r = 1;
  for (unsigned i = 0; i < e; ++i) r *= 2;
  return r;
}

}  // namespace

std::pair<RatFunc, RatFunc> square_slice_moment_closed(unsigned M) {
  const MPoly a1 = var(kA1), a2 = var(kA2), t = var(kT);
  const RatFunc inv_a1 = rf(cst(1)) / rf(a1);
  const RatFunc inv_a2 = rf(cst(1)) / rf(a2);

  RatFunc f1 = rf((t + a2).pow(M + 1) - (t - a2).pow(M + 1)) / rf(cst(2) * a1.pow(M + 1) * a2);
  if (M % 2 == 0) f1 += inv_a1;
  f1 = f1 * (Rat(1) / (Rat(M + 1) * pow2(M)));

  RatFunc f2 = inv_a1 + inv_a2 - rf((t - a1).pow(M + 1)) / rf(a1 * a2.pow(M + 1)) -
               rf((t - a2).pow(M + 1)) / rf(a1.pow(M + 1) * a2);
  f2 = f2 * (Rat(1) / (Rat(M + 1) * pow2(M + 1)));

  // For M = 0 the integrand sum_i x_i^0 counts each coordinate; the volume is half of it.
  if (M == 0) {
    f1 = f1 * Rat(1, 2);
    f2 = f2 * Rat(1, 2);
  }
  return {f1, f2};
}

MPoly square_a_plus(std::size_t v, unsigned M) {
  const MPoly x = var(v), t = var(kT);
  return (t - x).pow(M) + (t + x).pow(M);
}

MPoly square_a_minus(std::size_t v, unsigned M) {
  const MPoly x = var(v), t = var(kT);
  auto q = ((t - x).pow(M) - (t + x).pow(M)).divide_exact(x);
  return *q;
}

SquareCriticalConditions square_slice_critical_conditions(unsigned M) {
  const MPoly a1 = var(kA1), a2 = var(kA2), t = var(kT);
  SquareCriticalConditions c;
  c.M = M;
  c.boundary = {a1 - a2 - t, a1 + a2 - t};
  c.corner = {a1 - cst(1), a2};

  const MPoly ap = square_a_plus(kA2, M), am = square_a_minus(kA2, M);
  const MPoly a2sq = a2 * a2;
  c.c11 = (a2sq + cst(M)) * ap - t * (cst(M + 2) * a2sq - cst(1)) * am;
  if (M % 2 == 0) c.c11 += cst(2) * a1.pow(M) * a2sq;

  auto p = [&](const MPoly& x) {
    return x.pow(3) - cst(M + 2) * t * x * x + cst(M) * x + t;
  };
  c.c12 = a1.pow(M) * (t - a1).pow(M) * p(a1) - a2.pow(M) * (t - a2).pow(M) * p(a2) +
          a1.pow(M) * a2.pow(M) * (a1.pow(3) - a2.pow(3));
  return c;
}

std::vector<DegreeEntry> degree_ledger(const PiecewiseFormula& pw) {
  std::vector<DegreeEntry> out;
  out.reserve(pw.pieces.size());
  for (const auto& p : pw.pieces) out.push_back({p.chamber.descriptor(), p.cls, rf_degree(p.formula)});
  return out;
}

DegreeComparison compare_degree_ledgers(const std::vector<DegreeEntry>& base, const std::vector<DegreeEntry>& other) {
  std::map<std::string, int> by_chamber;
  for (const auto& e : base) by_chamber[e.chamber] = e.degree;
  DegreeComparison r;
  for (const auto& e : other) {
    auto it = by_chamber.find(e.chamber);
    if (it == by_chamber.end()) {
      r.exceptions.push_back(e.chamber + ": missing from the base ledger");
      continue;
    }
    if (it->second == kNegInfinity || e.degree == kNegInfinity) {
      ++r.skipped_zero;
      continue;
    }
    ++r.compared;
    if (it->second != e.degree)
      r.exceptions.push_back(e.chamber + ": degree " + std::to_string(e.degree) + " vs " + std::to_string(it->second));
  }
  return r;
}

}  // namespace slabkit
