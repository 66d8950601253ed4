#include "slabkit/engine.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <map>
#include <thread>

#include "slabkit/error.hpp"
#include "slabkit/verify.hpp"

namespace slabkit {

std::string to_string(ObjectKind k) { return k == ObjectKind::Slice ? "slice" : "slab"; }

ObjectKind parse_object_kind(const std::string& s) {
  if (s == "slice") return ObjectKind::Slice;
  if (s == "slab") return ObjectKind::Slab;
  throw Error(ErrorKind::InvalidArgument, "object must be slice or slab, got " + s);
}

RatVec ParamPoint::eval(std::span<const Rat> point) const {
  Rat d = factor_eval(den, point);
  if (d == 0) throw Error(ErrorKind::PoleAtPoint, "vertex denominator vanishes");
  RatVec out;
  out.reserve(num.size());
  for (const auto& n : num) out.push_back(n.eval(point) / d);
  return out;
}

namespace {

ParamPoint constant_point(const RatVec& v, std::size_t nv) {
  ParamPoint p;
  for (const auto& x : v) p.num.push_back(MPoly::constant(nv, x));
  return p;
}

MPoly linear_in_a(const RatVec& coeffs, std::size_t nv, const Rat& t_coeff = 0, const Rat& constant = 0) {
  RatVec c = coeffs;
  c.resize(nv, 0);
  c[nv - 1] = t_coeff;
  return MPoly::linear(nv, c, constant);
}

ParamPoint barycenter(const std::vector<const ParamPoint*>& pts) {
  const std::size_t nv = pts.front()->num.front().nvars();
  const std::size_t d = pts.front()->num.size();
  FactorList den;
  for (const auto* p : pts) den = factor_lcm(den, p->den);
  ParamPoint out;
  out.den = den;
  out.num.assign(d, MPoly(nv));
  Rat inv(1, static_cast<long>(pts.size()));
  inv.canonicalize();
  for (const auto* p : pts) {
    MPoly co = factor_cofactor(den, p->den, nv);
    for (std::size_t i = 0; i < d; ++i) out.num[i] += p->num[i] * co;
  }
  for (auto& n : out.num) n *= inv;
  return out;
}

RatVec rep_point(const Chamber& c) {
  RatVec p = c.region.rep;
  p.push_back(c.t_rep);
  return p;
}

std::vector<RatVec> numeric_points(const std::vector<ParamVertex>& vs, const RatVec& at) {
  std::vector<RatVec> out;
  for (const auto& v : vs) out.push_back(v.point.eval(at));
  return out;
}

std::vector<VertexSet> ball_facet_sets(const NormBall& ball, const std::vector<RatVec>& pts) {
  std::vector<VertexSet> sets;
  for (const auto& f : ball.facets) {
    VertexSet s;
    for (std::uint32_t i = 0; i < pts.size(); ++i)
      if (dot(f.normal, pts[i]) == f.offset) s.push_back(i);
    sets.push_back(std::move(s));
  }
  return sets;
}

bool crosses(const Rat& x, const Rat& y, const Rat& level) {
  return (x < level && level < y) || (y < level && level < x);
}

Rat det_numeric(std::vector<RatVec> m) {
  const std::size_t n = m.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rat f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

// Determinant of a square polynomial matrix by Laplace expansion with the
// minors of the trailing rows memoized by column set.
MPoly det_poly(const std::vector<std::vector<MPoly>>& m, std::size_t nv) {
  const std::size_t n = m.size();
  std::vector<MPoly> minor(std::size_t{1} << n, MPoly(nv));
  minor[0] = MPoly::constant(nv, 1);
  for (std::size_t mask = 1; mask < minor.size(); ++mask) {
    const std::size_t k = static_cast<std::size_t>(__builtin_popcountll(mask));
    const std::size_t row = n - k;
    MPoly acc(nv);
    int pos = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(mask >> c & 1u)) continue;
      const MPoly& e = m[row][c];
      const MPoly& sub = minor[mask & ~(std::size_t{1} << c)];
      if (!e.is_zero() && !sub.is_zero()) {
        if (pos % 2 == 0)
          acc += e * sub;
        else
          acc -= e * sub;
      }
      ++pos;
    }
    minor[mask] = std::move(acc);
  }
  return minor.back();
}

// Complete homogeneous symmetric polynomial h_M of the values, by Newton's
// identity m h_m = sum_k p_k h_{m-k}.
MPoly complete_homogeneous(const std::vector<MPoly>& vals, unsigned M, std::size_t nv) {
  std::vector<MPoly> p(M + 1, MPoly(nv));
  std::vector<MPoly> powers = vals;
  for (unsigned k = 1; k <= M; ++k) {
    for (std::size_t j = 0; j < vals.size(); ++j) {
      if (k > 1) powers[j] = powers[j] * vals[j];
      p[k] += powers[j];
    }
  }
  std::vector<MPoly> h(M + 1, MPoly(nv));
  h[0] = MPoly::constant(nv, 1);
  for (unsigned m = 1; m <= M; ++m) {
    MPoly acc(nv);
    for (unsigned k = 1; k <= m; ++k) acc += p[k] * h[m - k];
    Rat inv(1, m);
    acc *= inv;
    h[m] = std::move(acc);
  }
  return h[M];
}

MPoly norm_squared(std::size_t d) {
  std::vector<std::pair<std::vector<unsigned>, Rat>> terms;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<unsigned> e(d + 1, 0);
    e[i] = 2;
    terms.emplace_back(std::move(e), Rat(1));
  }
  return MPoly::from_terms(d + 1, terms);
}

}  // namespace

ParamPoint edge_cut_point(const NormBall& ball, std::uint32_t edge, int side) {
  const std::size_t d = ball.dim;
  const std::size_t nv = ring_size(d);
  const RatVec& v = ball.vertices[ball.edges[edge].first];
  const RatVec& w = ball.vertices[ball.edges[edge].second];
  RatVec diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = w[i] - v[i];
  // x = v + (side t/2 - <a,v>) / <a, w - v> (w - v)
  MPoly L = linear_in_a(diff, nv);
  RatVec negv = v;
  for (auto& x : negv) x = -x;
  MPoly N = linear_in_a(negv, nv, Rat(side, 2));
  Rat c = L.content();
  ParamPoint p;
  p.den = {{L * (1 / c), 1}};
  for (std::size_t i = 0; i < d; ++i) {
    MPoly coord = L * v[i];
    if (diff[i] != 0) coord += N * diff[i];
    p.num.push_back(coord * (1 / c));
  }
  return p;
}

ParamPolytope param_slice(const NormBall& ball, const Chamber& chamber) {
  if (ball.dim < 2) throw Error(ErrorKind::InvalidArgument, "slices need dimension at least 2");
  ParamPolytope p;
  p.kind = ObjectKind::Slice;
  p.ambient_dim = ball.dim;
  p.dim = ball.dim - 1;
  p.chamber = chamber;
  for (auto e : chamber.cut_edges) {
    ParamVertex v;
    v.point = edge_cut_point(ball, e, +1);
    v.origin = OriginKind::EdgeCut;
    v.index = e;
    v.side = +1;
    p.vertices.push_back(std::move(v));
  }
  if (p.vertices.empty()) throw Error(ErrorKind::EmptySlice, "no edge is cut in chamber " + chamber.descriptor());
  auto pts = numeric_points(p.vertices, rep_point(chamber));
  p.faces = compute_faces(pts, ball_facet_sets(ball, pts), p.dim);
  return p;
}

ParamPolytope param_slab(const NormBall& ball, const Chamber& chamber) {
  const std::size_t nv = ring_size(ball.dim);
  ParamPolytope p;
  p.kind = ObjectKind::Slab;
  p.ambient_dim = ball.dim;
  p.dim = ball.dim;
  p.chamber = chamber;
  for (auto iv : chamber.inside_vertices) {
    ParamVertex v;
    v.point = constant_point(ball.vertices[iv], nv);
    v.origin = OriginKind::BallVertex;
    v.index = iv;
    p.vertices.push_back(std::move(v));
  }
  std::vector<Rat> vals;
  for (const auto& v : ball.vertices) vals.push_back(dot(chamber.region.rep, v));
  const Rat half = chamber.t_rep / 2;
  VertexSet upper, lower;
  for (int side : {+1, -1}) {
    for (std::uint32_t e = 0; e < ball.edges.size(); ++e) {
      if (!crosses(vals[ball.edges[e].first], vals[ball.edges[e].second], side * half)) continue;
      (side > 0 ? upper : lower).push_back(static_cast<std::uint32_t>(p.vertices.size()));
      ParamVertex v;
      v.point = edge_cut_point(ball, e, side);
      v.origin = OriginKind::EdgeCut;
      v.index = e;
      v.side = side;
      p.vertices.push_back(std::move(v));
    }
  }
  auto pts = numeric_points(p.vertices, rep_point(chamber));
  auto sets = ball_facet_sets(ball, pts);
  sets.push_back(upper);
  sets.push_back(lower);
  p.faces = compute_faces(pts, sets, p.dim);
  return p;
}

std::vector<ParamSimplex> barycentric_triangulate(const ParamPolytope& p) {
  const FaceLattice& lat = p.faces;
  const RatVec at = rep_point(p.chamber);
  std::map<std::size_t, ParamPoint> centers;
  auto center = [&](std::size_t f) -> const ParamPoint& {
    auto it = centers.find(f);
    if (it != centers.end()) return it->second;
    std::vector<const ParamPoint*> pts;
    for (auto v : lat.faces[f]) pts.push_back(&p.vertices[v].point);
    return centers.emplace(f, barycenter(pts)).first->second;
  };
  RatVec a_rep = p.chamber.region.rep;

  std::vector<ParamSimplex> out;
  std::vector<std::size_t> chain;
  auto emit = [&](std::size_t edge) {
    ParamSimplex s;
    for (auto v : lat.faces[edge]) s.vertices.push_back(p.vertices[v].point);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) s.vertices.push_back(center(*it));
    std::vector<RatVec> num;
    for (const auto& v : s.vertices) num.push_back(v.eval(at));
    std::vector<RatVec> rows;
    for (std::size_t k = 1; k < num.size(); ++k) {
      RatVec r(p.ambient_dim);
      for (std::size_t i = 0; i < p.ambient_dim; ++i) r[i] = num[k][i] - num[0][i];
      rows.push_back(std::move(r));
    }
    if (p.kind == ObjectKind::Slice) rows.push_back(a_rep);
    Rat det = det_numeric(rows);
    if (det == 0) throw Error(ErrorKind::InvalidArgument, "degenerate simplex in barycentric subdivision");
    s.orientation_sign = det > 0 ? 1 : -1;
    out.push_back(std::move(s));
  };
  std::function<void(std::size_t)> walk = [&](std::size_t f) {
    if (lat.face_dim[f] == 1) {
      emit(f);
      return;
    }
    chain.push_back(f);
    for (auto c : lat.children[f]) walk(c);
    chain.pop_back();
  };
  walk(lat.top);
  return out;
}

FactoredFraction simplex_moment(const ParamSimplex& s, ObjectKind kind, unsigned M, std::size_t d) {
  const std::size_t nv = ring_size(d);
  const std::size_t n = s.vertices.size() - 1;
  // Rows (E_j, P_j) of the homogenized vertex matrix, plus (0, a) for slices:
  // its determinant is prod E_j times the simplex determinant.
  std::vector<std::vector<MPoly>> m;
  FactorList den;
  for (const auto& v : s.vertices) {
    std::vector<MPoly> row;
    row.push_back(factor_expand(v.den, nv));
    for (const auto& x : v.num) row.push_back(x);
    m.push_back(std::move(row));
    den = factor_product(den, v.den);
  }
  if (kind == ObjectKind::Slice) {
    std::vector<MPoly> row{MPoly(nv)};
    for (std::size_t i = 0; i < d; ++i) row.push_back(MPoly::variable(nv, i));
    m.push_back(std::move(row));
    den = factor_product(den, FactorList{{norm_squared(d), 1}});
  }
  MPoly det = det_poly(m, nv);
  // int over a k-simplex of l^M = k! vol M!/(M+k)! h_M(l(v_0), ..., l(v_k))
  Rat scale = Rat(factorial(M)) / Rat(factorial(M + n)) * s.orientation_sign;
  if (M == 0) return FactoredFraction(det * scale, std::move(den));

  FactorList common;
  for (const auto& v : s.vertices) common = factor_lcm(common, v.den);
  std::vector<std::vector<MPoly>> scaled;
  for (const auto& v : s.vertices) {
    MPoly co = factor_cofactor(common, v.den, nv);
    std::vector<MPoly> q;
    for (const auto& x : v.num) q.push_back(x * co);
    scaled.push_back(std::move(q));
  }
  MPoly h(nv);
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<MPoly> vals;
    for (const auto& q : scaled) vals.push_back(q[i]);
    h += complete_homogeneous(vals, M, nv);
  }
  FactorList powered = common;
  for (auto& f : powered) f.mult *= M;
  return FactoredFraction(det * h * scale, factor_product(den, powered));
}

RatFunc assemble_formula(const NormBall& ball, const Chamber& chamber, ObjectKind kind, unsigned M) {
  ParamPolytope p = kind == ObjectKind::Slice ? param_slice(ball, chamber) : param_slab(ball, chamber);
  FractionAccumulator acc;
  for (const auto& s : barycentric_triangulate(p)) acc.add(simplex_moment(s, kind, M, ball.dim));
  return acc.total(ring_size(ball.dim)).to_ratfunc();
}

std::string class_key(const RatFunc& f, std::size_t d) {
  std::string best;
  bool first = true;
  for (const auto& [perm, sign] : signed_permutations(d)) {
    std::vector<std::size_t> p(perm.begin(), perm.end());
    std::vector<int> s(sign.begin(), sign.end());
    p.push_back(d);
    s.push_back(1);
    std::string k = rf_canonical_key(rf_signed_permute(f, p, s));
    if (first || k < best) {
      best = std::move(k);
      first = false;
    }
  }
  return best;
}

namespace {

// Two slice formulas are identified when some signed permutation of one
// agrees with the other on the sphere: a cheap exact-evaluation filter at
// sphere points, then the certified reduction.
bool same_on_sphere_up_to_symmetry(const RatFunc& f, const RatFunc& g, std::size_t d,
                                   const std::vector<RatVec>& probes) {
  for (const auto& [perm, sign] : signed_permutations(d)) {
    std::vector<std::size_t> p(perm.begin(), perm.end());
    std::vector<int> s(sign.begin(), sign.end());
    p.push_back(d);
    s.push_back(1);
    RatFunc h = rf_signed_permute(g, p, s);
    bool agree = true;
    for (const auto& pt : probes) {
      try {
        if (rf_eval(f, pt) != rf_eval(h, pt)) {
          agree = false;
          break;
        }
      } catch (const Error&) {
      }
    }
    if (agree && equal_mod_sphere(f, h, d)) return true;
  }
  return false;
}

std::vector<RatVec> sphere_probes(std::size_t d) {
  std::vector<RatVec> probes;
  std::mt19937_64 rng(99);
  for (const auto& a : rational_sphere_points(d, 4, 12345)) {
    RatVec pt = a;
    pt.push_back(interior_t(Rat(0), Rat(static_cast<long>(d)), rng));
    probes.push_back(std::move(pt));
  }
  return probes;
}

void assign_classes(PiecewiseFormula& pw) {
  const std::size_t d = pw.dim;
  std::map<std::string, std::size_t> by_key;
  std::vector<std::size_t> key_class(pw.pieces.size());
  std::vector<RatFunc> reps;
  for (std::size_t i = 0; i < pw.pieces.size(); ++i) {
    std::string k = class_key(pw.pieces[i].formula, d);
    auto it = by_key.find(k);
    if (it == by_key.end()) {
      it = by_key.emplace(k, reps.size()).first;
      reps.push_back(pw.pieces[i].formula);
    }
    key_class[i] = it->second;
  }
  std::vector<std::size_t> merged(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) merged[i] = i;
  if (pw.object == ObjectKind::Slice && d >= 2) {
    const auto probes = sphere_probes(d);
    for (std::size_t j = 0; j < reps.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) {
        if (merged[i] != i) continue;
        if (same_on_sphere_up_to_symmetry(reps[i], reps[j], d, probes)) {
          merged[j] = i;
          break;
        }
      }
  }
  std::map<std::size_t, std::size_t> renumber;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (merged[i] != i) continue;
    renumber.emplace(i, pw.distinct.size());
    pw.distinct.push_back(reps[i]);
  }
  for (std::size_t i = 0; i < pw.pieces.size(); ++i) pw.pieces[i].cls = renumber.at(merged[key_class[i]]);
}

}  // namespace

bool equivalent_up_to_symmetry(const RatFunc& f, const RatFunc& g, std::size_t d, ObjectKind kind) {
  if (class_key(f, d) == class_key(g, d)) return true;
  if (kind == ObjectKind::Slab) return false;
  return same_on_sphere_up_to_symmetry(f, g, d, sphere_probes(d));
}

PiecewiseFormula piecewise_for(const NormBall& ball, const std::vector<Chamber>& chambers, ObjectKind kind,
                               unsigned M, unsigned threads) {
  PiecewiseFormula pw;
  pw.ball = ball.name;
  pw.dim = ball.dim;
  pw.object = kind;
  pw.M = M;
  pw.pieces.resize(chambers.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < chambers.size(); i = next++) {
      try {
        pw.pieces[i].chamber = chambers[i];
        pw.pieces[i].formula = assemble_formula(ball, chambers[i], kind, M);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chambers.size())));
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  assign_classes(pw);
  return pw;
}

PiecewiseFormula piecewise(const NormBall& ball, ObjectKind kind, unsigned M, const EngineOptions& opt) {
  RegionSearch s = opt.search;
  // only the built-in balls are known to have the signed-permutation symmetry
  s.fundamental_only = ball.name == "cube" || ball.name == "cross";
  return piecewise_for(ball, enumerate_chambers(ball, s), kind, M, opt.threads);
}

nlohmann::json to_json(const PiecewiseFormula& f, bool latex) {
  nlohmann::json j;
  j["ball"] = f.ball;
  j["dim"] = f.dim;
  j["object"] = to_string(f.object);
  j["M"] = f.M;
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : f.pieces) {
    nlohmann::json c;
    nlohmann::json rep = nlohmann::json::array();
    for (const auto& x : p.chamber.region.rep) rep.push_back(to_string(x));
    c["a_rep"] = rep;
    c["j"] = p.chamber.j;
    c["lo"] = to_string(p.chamber.lo);
    c["hi"] = to_string(p.chamber.hi);
    c["t_rep"] = to_string(p.chamber.t_rep);
    nlohmann::json piece{{"chamber", c}, {"ratfunc", to_json(p.formula)}, {"class", p.cls}};
    if (latex) piece["latex"] = to_latex(p.formula);
    j["pieces"].push_back(std::move(piece));
  }
  j["distinct"] = nlohmann::json::array();
  for (const auto& r : f.distinct) {
    nlohmann::json e = to_json(r);
    if (latex) e["latex"] = to_latex(r);
    j["distinct"].push_back(std::move(e));
  }
  return j;
}

namespace {

Rat max_vertex_value(const NormBall& ball, const RatVec& a) {
  Rat m = dot(a, ball.vertices.front());
  for (const auto& v : ball.vertices) m = std::max(m, dot(a, v));
  return m;
}

bool on_vertex_level(const NormBall& ball, const RatVec& a, const Rat& t) {
  for (const auto& v : ball.vertices)
    if (2 * dot(a, v) == t) return true;
  return false;
}

}  // namespace

EvalResult evaluate(const NormBall& ball, ObjectKind kind, unsigned M, const RatVec& a, const Rat& t) {
  const std::size_t d = ball.dim;
  if (a.size() != d) throw Error(ErrorKind::InvalidArgument, "direction has wrong dimension");
  if (std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; }))
    throw Error(ErrorKind::InvalidArgument, "direction must be nonzero");
  EvalResult res;
  Rat q = 0;
  for (const auto& x : a) q += x * x;
  res.unit_direction = q == 1;

  if (t < 0) {
    if (kind == ObjectKind::Slab) throw Error(ErrorKind::InvalidArgument, "slab width t must be nonnegative");
    RatVec neg = a;
    for (auto& x : neg) x = -x;
    return evaluate(ball, kind, M, neg, -t);
  }
  const Rat top = 2 * max_vertex_value(ball, a);
  if (kind == ObjectKind::Slab && t == 0) {
    res.value = 0;
    res.chamber = "degenerate";
    return res;
  }
  if (t > top || (kind == ObjectKind::Slab && t == top)) {
    res.value = kind == ObjectKind::Slab ? exact_moment(to_hpolytope(ball), M) : Rat(0);
    res.chamber = kind == ObjectKind::Slab ? "whole ball" : "empty";
    return res;
  }
  SweepArrangement arr = sweep_arrangement(ball);
  RatVec point = a;
  point.push_back(t);
  if (is_generic(arr, a) && t > 0 && !on_vertex_level(ball, a, t)) {
    Chamber c = locate_chamber(ball, a, t);
    res.chamber = c.descriptor();
    res.value = rf_eval(assemble_formula(ball, c, kind, M), point);
    return res;
  }
  // On a wall: use a nearby chamber, whose formula extends continuously.
  res.boundary = true;
  std::mt19937_64 rng(0x5eed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Rat eps(1, 1000L << std::min(attempt, 20));
    eps.canonicalize();
    RatVec b = a;
    std::uniform_int_distribution<long> pick(-997, 997);
    for (auto& x : b) {
      Rat r(pick(rng), 997);
      r.canonicalize();
      x += eps * r;
    }
    if (!is_generic(arr, b)) continue;
    Rat s = t == top ? Rat(t - eps) : Rat(t + eps);
    if (s <= 0) s = eps;
    if (on_vertex_level(ball, b, s) || s >= 2 * max_vertex_value(ball, b)) continue;
    try {
      Chamber c = locate_chamber(ball, b, s);
      RatFunc f = assemble_formula(ball, c, kind, M);
      res.value = rf_eval(f, point);
      res.chamber = c.descriptor();
      return res;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleAtPoint && e.kind() != ErrorKind::BoundaryPoint) throw;
    }
  }
  throw Error(ErrorKind::RepresentativeSearchExhausted, "no adjacent chamber formula is defined at this point");
}

}  // namespace slabkit
