#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "expr.hpp"
#include "slabkit/engine.hpp"
#include "slabkit/error.hpp"
#include "slabkit/verify.hpp"

using namespace slabkit;
using slabkit::testing::expr;
using slabkit::testing::point;

namespace {

RatVec ints(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

Chamber square_chamber(std::size_t j) {
  auto cs = enumerate_chambers(make_cube(2), true);
  REQUIRE(cs.size() == 2);
  return cs[j];
}

std::set<std::vector<std::string>> vertex_texts(const ParamPolytope& p) {
  std::set<std::vector<std::string>> out;
  for (const auto& v : p.vertices) {
    std::vector<std::string> c;
    for (std::size_t i = 0; i < p.ambient_dim; ++i) c.push_back(to_string(v.point.coord_ratfunc(i)));
    out.insert(c);
  }
  return out;
}

std::vector<std::string> texts(std::initializer_list<const char*> xs, std::size_t d) {
  std::vector<std::string> out;
  for (const char* x : xs) out.push_back(to_string(expr(x, d)));
  return out;
}

RatVec with_t(RatVec a, const Rat& t) {
  a.push_back(t);
  return a;
}

Chamber chamber_with_rep(const NormBall& ball, const RatVec& rep, std::size_t j) {
  for (const auto& c : chambers_for_representatives(ball, {rep}))
    if (c.j == j) return c;
  FAIL("no such chamber");
  return {};
}

ParamSimplex constant_simplex(const std::vector<RatVec>& pts, std::size_t d) {
  ParamSimplex s;
  for (const auto& p : pts) {
    ParamPoint q;
    for (const auto& x : p) q.num.push_back(MPoly::constant(ring_size(d), x));
    s.vertices.push_back(q);
  }
  return s;
}

Rat numeric_simplex_volume(const std::vector<RatVec>& pts) {
  // |det(p_k - p_0)| / n! by fraction-free elimination.
  const std::size_t n = pts.size() - 1;
  std::vector<RatVec> m(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < pts[0].size(); ++i) m[k].push_back(pts[k + 1][i] - pts[0][i]);
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
      Rat f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  Rat fact = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= Rat(static_cast<long>(k));
  return abs(det) / fact;
}

}  // namespace

TEST_CASE("simplex moments of constant simplices") {
  // integral of x^2 over [0, 1]
  auto seg = constant_simplex({ints({0}), ints({1})}, 1);
  CHECK(simplex_moment(seg, ObjectKind::Slab, 2, 1).to_ratfunc() == RatFunc::constant(2, Rat(1, 3)));
  auto tri = constant_simplex({ints({0, 0}), ints({1, 0}), ints({0, 1})}, 2);
  CHECK(simplex_moment(tri, ObjectKind::Slab, 0, 2).to_ratfunc() == RatFunc::constant(3, Rat(1, 2)));
  // x^2 + y^2 over the same triangle: 2 * 1/12
  CHECK(simplex_moment(tri, ObjectKind::Slab, 2, 2).to_ratfunc() == RatFunc::constant(3, Rat(1, 6)));
  tri.orientation_sign = -1;
  CHECK(simplex_moment(tri, ObjectKind::Slab, 0, 2).to_ratfunc() == RatFunc::constant(3, Rat(-1, 2)));
}

TEST_CASE("square slices as parametric segments") {
  auto ball = make_cube(2);
  auto p11 = param_slice(ball, square_chamber(0));
  CHECK(p11.dim == 1);
  CHECK(p11.vertices.size() == 2);
  CHECK(vertex_texts(p11) == std::set<std::vector<std::string>>{texts({"(t+a2)/(2*a1)", "-1/2"}, 2),
                                                               texts({"(t-a2)/(2*a1)", "1/2"}, 2)});
  auto p12 = param_slice(ball, square_chamber(1));
  CHECK(vertex_texts(p12) == std::set<std::vector<std::string>>{texts({"1/2", "(t-a1)/(2*a2)"}, 2),
                                                               texts({"(t-a2)/(2*a1)", "1/2"}, 2)});
  for (const auto& v : p12.vertices) CHECK(v.origin == OriginKind::EdgeCut);
}

TEST_CASE("edge cut vertices land on the cut hyperplane") {
  auto ball = make_cube(3);
  for (const auto& c : enumerate_chambers(ball, true)) {
    RatVec at = with_t(c.region.rep, c.t_rep);
    for (auto e : c.cut_edges)
      for (int side : {1, -1}) {
        RatVec x = edge_cut_point(ball, e, side).eval(at);
        CHECK(2 * dot(c.region.rep, x) == side * c.t_rep);
      }
  }
}

TEST_CASE("cube(3) slices in the (1,1,1) direction") {
  auto ball = make_cube(3);
  // 2<a, v> takes the values 3 and 1: hexagons for 0 < t < 1, triangles for 1 < t < 3
  auto central = param_slice(ball, chamber_with_rep(ball, ints({1, 1, 1}), 0));
  CHECK(central.vertices.size() == 6);
  CHECK(central.faces.count_by_dim()[1] == 6);
  auto corner = param_slice(ball, chamber_with_rep(ball, ints({1, 1, 1}), 1));
  CHECK(corner.vertices.size() == 3);
  for (const auto& v : central.vertices) CHECK(v.origin == OriginKind::EdgeCut);
}

TEST_CASE("square slabs") {
  auto ball = make_cube(2);
  auto hex = param_slab(ball, square_chamber(1));
  CHECK(hex.vertices.size() == 6);
  std::size_t inside = 0;
  for (const auto& v : hex.vertices) inside += v.origin == OriginKind::BallVertex;
  CHECK(inside == 2);
  CHECK(vertex_texts(hex).count(texts({"1/2", "(t-a1)/(2*a2)"}, 2)) == 1);
  CHECK(vertex_texts(hex).count(texts({"1/2", "-1/2"}, 2)) == 1);

  auto quad = param_slab(ball, square_chamber(0));
  CHECK(quad.vertices.size() == 4);
  for (const auto& v : quad.vertices) CHECK(v.origin == OriginKind::EdgeCut);
}

TEST_CASE("parametric slab combinatorics match the numeric instance") {
  auto ball = make_cube(3);
  auto c = rechoose_t(ball, chamber_with_rep(ball, ints({2, 1, 1}), 1), Rat(3));
  auto p = param_slab(ball, c);
  auto numeric = hpolytope_vertices(slab_hpolytope(ball, c.region.rep, Rat(3)));
  CHECK(p.vertices.size() == numeric.size());
  std::set<RatVec> at_rep;
  for (const auto& v : p.vertices) at_rep.insert(v.point.eval(with_t(c.region.rep, Rat(3))));
  CHECK(at_rep == std::set<RatVec>(numeric.begin(), numeric.end()));
  auto lattice = build_face_lattice(numeric);
  CHECK(p.faces.count_by_dim()[2] == lattice.facets.size());
  CHECK(p.faces.count_by_dim()[1] == lattice.edges.size());
}

TEST_CASE("barycentric triangulation") {
  auto ball = make_cube(2);
  CHECK(barycentric_triangulate(param_slab(ball, square_chamber(1))).size() == 6);
  CHECK(barycentric_triangulate(param_slice(ball, square_chamber(0))).size() == 1);

  // Simplices are positively oriented and partition the instance.
  for (std::size_t d : {2u, 3u}) {
    auto cube = make_cube(d);
    for (const auto& c : enumerate_chambers(cube, true)) {
      auto p = param_slab(cube, c);
      RatVec at = with_t(c.region.rep, c.t_rep);
      Rat sum = 0;
      for (const auto& s : barycentric_triangulate(p)) {
        std::vector<RatVec> pts;
        for (const auto& v : s.vertices) pts.push_back(v.eval(at));
        Rat signed_vol = simplex_moment(s, ObjectKind::Slab, 0, d).eval(at);
        CHECK(signed_vol > 0);
        CHECK(signed_vol == numeric_simplex_volume(pts));
        sum += signed_vol;
      }
      CHECK(sum == exact_volume(slab_hpolytope(cube, c.region.rep, c.t_rep)));
    }
  }
}

TEST_CASE("assembled formulas for the square") {
  auto ball = make_cube(2);
  CHECK(assemble_formula(ball, square_chamber(0), ObjectKind::Slice, 0) == expr("1/a1", 2));
  CHECK(assemble_formula(ball, square_chamber(1), ObjectKind::Slice, 0) == expr("(a1+a2-t)/(2*a1*a2)", 2));
  CHECK(assemble_formula(ball, square_chamber(0), ObjectKind::Slab, 0) == expr("t/a1", 2));
  CHECK(assemble_formula(ball, square_chamber(1), ObjectKind::Slab, 0) == expr("1 - (a1+a2-t)^2/(4*a1*a2)", 2));
  // Second moment of the hexagonal slab, summed over the six triangles.
  RatFunc printed = expr(
      "(a1-a2+t)/(32*a1) - (a1-a2-t)/(32*a2)"
      " + (a1^2+a1*a2+a2^2-a1*t-2*a2*t+t^2)*(a1-a2+t)/(96*a1^3)"
      " - (a1^2+a1*a2+a2^2-2*a1*t-a2*t+t^2)*(a1-a2-t)/(96*a2^3)"
      " + (a1^2-a1*a2+a2^2-2*a1*t+a2*t+t^2)*(a1+a2-t)*t/(96*a1*a2^3)"
      " + (a1^2-a1*a2+a2^2+a1*t-2*a2*t+t^2)*(a1+a2-t)*t/(96*a1^3*a2)",
      2);
  CHECK(assemble_formula(ball, square_chamber(1), ObjectKind::Slab, 2) == printed);
  CHECK(equal_mod_sphere(assemble_formula(ball, square_chamber(0), ObjectKind::Slab, 2),
                         expr("(t^3+t)/(12*a1^3)", 2), 2));
}

TEST_CASE("cube(3) slice on the first (2,2,1) interval") {
  auto ball = make_cube(3);
  auto f = assemble_formula(ball, chamber_with_rep(ball, ints({2, 2, 1}), 0), ObjectKind::Slice, 0);
  // 0 <= t <= (a2 + a3) - a1 holds on this interval, so it carries the second slice formula.
  CHECK(equal_mod_sphere(f, expr("1/a1 - (t^2 + (a2+a3-a1)^2)/(4*a1*a2*a3)", 3), 3));
  CHECK_FALSE(equal_mod_sphere(f, expr("1/a1 - (t+a2+a3-a1)^2/(8*a1*a2*a3)", 3), 3));
}

TEST_CASE("piecewise class counts") {
  auto c3 = piecewise(make_cube(3), ObjectKind::Slab, 0);
  CHECK(c3.pieces.size() == 8);
  CHECK(c3.distinct.size() == 5);
  for (const auto& p : c3.pieces) CHECK(class_key(p.formula, 3) == class_key(c3.distinct[p.cls], 3));

  auto odd = piecewise(make_cube(2), ObjectKind::Slab, 1);
  for (const auto& p : odd.pieces) CHECK(p.formula.is_zero());
}

TEST_CASE("odd slab moments vanish") {
  for (std::size_t d : {2u, 3u})
    for (unsigned M : {1u, 3u})
      for (const auto& p : piecewise(make_cube(d), ObjectKind::Slab, M).pieces) CHECK(p.formula.is_zero());
}

TEST_CASE("slab formulas agree with the numeric volume off the sphere") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> jitter(-20, 20);
  for (std::size_t d : {2u, 3u}) {
    auto ball = make_cube(d);
    for (const auto& c : enumerate_chambers(ball, true)) {
      RatFunc f = assemble_formula(ball, c, ObjectKind::Slab, 0);
      for (int k = 0; k < 3; ++k) {
        // scale the representative: slab formulas hold for a in R^d
        RatVec a = c.region.rep;
        Rat scale(7 + jitter(rng) % 5 + 5, 7);
        scale.canonicalize();
        for (auto& x : a) x *= scale;
        auto [lo, hi] = chamber_interval_at(ball, c, a);
        Rat t = interior_t(lo, hi, rng);
        CHECK(rf_eval(f, with_t(a, t)) == exact_volume(slab_hpolytope(ball, a, t)));
      }
    }
  }
}

TEST_CASE("denominators do not vanish inside chambers") {
  std::mt19937_64 rng(5);
  for (std::size_t d : {2u, 3u})
    for (auto kind : {ObjectKind::Slice, ObjectKind::Slab}) {
      auto ball = make_cube(d);
      for (const auto& c : enumerate_chambers(ball, true)) {
        RatFunc f = assemble_formula(ball, c, kind, 2);
        CHECK(f.den().eval(with_t(c.region.rep, c.t_rep)) != 0);
        for (const auto& a : sphere_points_in_region(ball, c.region, 3, 9)) {
          auto [lo, hi] = chamber_interval_at(ball, c, a);
          CHECK(f.den().eval(with_t(a, interior_t(lo, hi, rng))) != 0);
        }
      }
    }
}

TEST_CASE("t-derivative of the slab volume is the slice volume") {
  std::mt19937_64 rng(3);
  for (std::size_t d : {2u, 3u}) {
    auto ball = make_cube(d);
    for (const auto& c : enumerate_chambers(ball, true)) {
      RatFunc ds = rf_derivative(assemble_formula(ball, c, ObjectKind::Slab, 0), d);
      RatFunc sl = assemble_formula(ball, c, ObjectKind::Slice, 0);
      for (const auto& a : sphere_points_in_region(ball, c.region, 25, 17)) {
        auto [lo, hi] = chamber_interval_at(ball, c, a);
        RatVec at = with_t(a, interior_t(lo, hi, rng));
        CHECK(rf_eval(ds, at) == rf_eval(sl, at));
      }
    }
  }
}

TEST_CASE("adjacent chambers agree on their common wall") {
  for (std::size_t d : {2u, 3u}) {
    auto ball = make_cube(d);
    auto chambers = enumerate_chambers(ball, true);
    for (auto kind : {ObjectKind::Slice, ObjectKind::Slab})
      for (unsigned M : {0u, 2u})
        for (const auto& c : chambers)
          for (const auto& n : chambers) {
            if (n.region.key() != c.region.key() || n.j != c.j + 1) continue;
            RatFunc f = assemble_formula(ball, c, kind, M), g = assemble_formula(ball, n, kind, M);
            for (const auto& a : sphere_points_in_region(ball, c.region, 10, 23)) {
              Rat wall = chamber_interval_at(ball, c, a).second;
              CHECK(wall == chamber_interval_at(ball, n, a).first);
              CHECK(rf_eval(f, with_t(a, wall)) == rf_eval(g, with_t(a, wall)));
            }
          }
  }
}

TEST_CASE("slab volume is nondecreasing in t") {
  std::mt19937_64 rng(8);
  for (std::size_t d : {2u, 3u}) {
    auto ball = make_cube(d);
    for (const auto& c : enumerate_chambers(ball, true)) {
      RatFunc f = assemble_formula(ball, c, ObjectKind::Slab, 0);
      for (const auto& a : sphere_points_in_region(ball, c.region, 5, 31)) {
        auto [lo, hi] = chamber_interval_at(ball, c, a);
        std::vector<Rat> ts;
        for (int k = 0; k < 8; ++k) ts.push_back(interior_t(lo, hi, rng));
        std::sort(ts.begin(), ts.end());
        for (std::size_t k = 1; k < ts.size(); ++k)
          CHECK(rf_eval(f, with_t(a, ts[k - 1])) <= rf_eval(f, with_t(a, ts[k])));
      }
    }
  }
}

TEST_CASE("evaluate") {
  auto sq = make_cube(2);
  CHECK(evaluate(sq, ObjectKind::Slab, 0, point({"4/5", "3/5"}), Rat(4, 5)).value == Rat(13, 16));
  CHECK(evaluate(sq, ObjectKind::Slab, 0, point({"4/5", "3/5"}), Rat(7, 5)).value == 1);
  CHECK(evaluate(sq, ObjectKind::Slab, 0, point({"4/5", "3/5"}), Rat(9, 5)).value == 1);
  auto axis = evaluate(sq, ObjectKind::Slice, 0, ints({1, 0}), Rat(1, 3));
  CHECK(axis.value == 1);
  CHECK(axis.boundary);
  CHECK(evaluate(sq, ObjectKind::Slice, 0, point({"4/5", "3/5"}), Rat(-4, 5)).value ==
        evaluate(sq, ObjectKind::Slice, 0, point({"-4/5", "-3/5"}), Rat(4, 5)).value);
  CHECK(evaluate(sq, ObjectKind::Slice, 0, point({"4/5", "3/5"}), Rat(2)).value == 0);
  CHECK_FALSE(evaluate(sq, ObjectKind::Slice, 0, ints({2, 1}), Rat(1, 2)).unit_direction);

  auto c3 = make_cube(3);
  CHECK(evaluate(c3, ObjectKind::Slab, 0, point({"2/3", "2/3", "1/3"}), Rat(5, 3)).value == 1);
  // t on a vertex level: 2<a, v> = 1/3 for v = (1/2, -1/2, 1/2)
  Rat wall_value = evaluate(c3, ObjectKind::Slab, 0, point({"2/3", "2/3", "1/3"}), Rat(1, 3)).value;
  CHECK(wall_value == exact_volume(slab_hpolytope(c3, point({"2/3", "2/3", "1/3"}), Rat(1, 3))));

  CHECK_THROWS_AS(evaluate(sq, ObjectKind::Slab, 0, ints({0, 0}), Rat(1)), Error);
  CHECK_THROWS_AS(evaluate(sq, ObjectKind::Slab, 0, ints({1, 0, 0}), Rat(1)), Error);
}

TEST_CASE("slices need a cut") {
  CHECK_THROWS_AS(param_slice(make_cube(1), Chamber{}), Error);
}

TEST_CASE("formula json layout") {
  auto pw = piecewise(make_cube(2), ObjectKind::Slice, 0);
  auto j = to_json(pw, true);
  CHECK(j["object"] == "slice");
  CHECK(j["M"] == 0);
  CHECK(j["pieces"].size() == 2);
  CHECK(j["pieces"][0].contains("chamber"));
  CHECK(j["pieces"][0].contains("ratfunc"));
  CHECK(j["pieces"][0].contains("class"));
  CHECK(j["pieces"][0].contains("latex"));
  CHECK(ratfunc_from_json(j["pieces"][1]["ratfunc"]) == pw.pieces[1].formula);
  CHECK(to_json(pw).dump() == to_json(piecewise(make_cube(2), ObjectKind::Slice, 0)).dump());
}
