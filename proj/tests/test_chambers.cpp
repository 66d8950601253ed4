#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "expr.hpp"
#include "slabkit/chambers.hpp"
#include "slabkit/error.hpp"

using namespace slabkit;
using slabkit::testing::point;

namespace {

RatVec ints(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

// Edges of the cube by brute force: vertex pairs differing in one coordinate.
std::set<std::pair<RatVec, RatVec>> brute_cut_edges(const NormBall& cube, const RatVec& a, const Rat& t) {
  std::set<std::pair<RatVec, RatVec>> out;
  for (const auto& v : cube.vertices)
    for (const auto& w : cube.vertices) {
      if (!(v < w)) continue;
      int diff = 0;
      for (std::size_t i = 0; i < v.size(); ++i) diff += v[i] != w[i];
      if (diff != 1) continue;
      Rat x = 2 * dot(a, v), y = 2 * dot(a, w);
      if ((x < t && t < y) || (y < t && t < x)) out.insert({v, w});
    }
  return out;
}

Rat random_inside(std::mt19937_64& rng, const Rat& lo, const Rat& hi) {
  std::uniform_int_distribution<long> pick(1, 999);
  Rat u(pick(rng), 1000);
  u.canonicalize();
  return lo + (hi - lo) * u;
}

}  // namespace

TEST_CASE("sweep arrangement sizes") {
  CHECK(sweep_arrangement(make_cube(1)).normals.size() == 1);
  CHECK(sweep_arrangement(make_cube(2)).normals.size() == 4);
  CHECK(sweep_arrangement(make_cube(3)).normals.size() == 13);
  for (const auto& n : sweep_arrangement(make_cube(3)).normals) {
    auto first = std::find_if(n.begin(), n.end(), [](const Rat& x) { return x != 0; });
    CHECK(*first > 0);
  }
}

TEST_CASE("square has one fundamental region and its sweep vertex ordering") {
  NormBall sq = make_cube(2);
  auto regions = enumerate_regions(sq, true);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].generic);
  CHECK(regions[0].rep[0] > regions[0].rep[1]);
  CHECK(regions[0].rep[1] > 0);
  CHECK(regions[0].vertex_order == std::vector<std::uint32_t>{0, 3, 1, 2});
  CHECK(enumerate_chambers(sq, true).size() == 2);
}

TEST_CASE("generic region counts") {
  CHECK(enumerate_regions(make_cube(1), true).size() == 1);
  CHECK(enumerate_regions(make_cube(3), true).size() == 2);
  CHECK(enumerate_chambers(make_cube(3), true).size() == 8);
  auto cube4 = enumerate_regions(make_cube(4), true);
  CHECK(cube4.size() == 14);
  for (const auto& r : cube4) {
    CHECK(r.generic);
    CHECK(intervals(make_cube(4), r).size() == 8);
  }
  for (std::size_t d = 2; d <= 4; ++d) CHECK(enumerate_regions(make_cross_polytope(d), true).size() == 1);
  CHECK(enumerate_regions(make_cube(2), false).size() == 8);
  CHECK(enumerate_regions(make_cube(3), false).size() == 96);
}

TEST_CASE("full sphere sampling agrees with the symmetric orbit") {
  // A ball tagged custom has no symmetry shortcut and no known count.
  NormBall sq = make_cube(2);
  sq.name = "custom";
  RegionSearch s;
  s.fundamental_only = false;
  s.saturation = 5000;
  CHECK(enumerate_regions(sq, s).size() == 8);
}

TEST_CASE("regions are generic and antisymmetric under negation") {
  NormBall c = make_cube(3);
  SweepArrangement arr = sweep_arrangement(c);
  for (const auto& r : enumerate_regions(c, false)) {
    CHECK(is_generic(arr, r.rep));
    RatVec neg = r.rep;
    for (auto& x : neg) x = -x;
    Region n = make_region(c, arr, neg);
    std::vector<std::uint32_t> rev(r.vertex_order.rbegin(), r.vertex_order.rend());
    CHECK(n.vertex_order == rev);
  }
  CHECK(kind_of([&] { make_region(c, arr, ints({1, 1, 1})); }) == ErrorKind::BoundaryPoint);
  CHECK_FALSE(make_region(c, arr, ints({1, 1, 1}), true).generic);
}

TEST_CASE("intervals for small examples") {
  NormBall sq = make_cube(2);
  auto iv = intervals(sq, make_region(sq, sweep_arrangement(sq), ints({2, 1})));
  REQUIRE(iv.size() == 2);
  CHECK(iv[0].lo == 0);
  CHECK(iv[0].hi == 1);
  CHECK(iv[1].lo == 1);
  CHECK(iv[1].hi == 3);
  CHECK(iv[1].t_rep == 2);

  NormBall c3 = make_cube(3);
  auto iv3 = intervals(c3, make_region(c3, sweep_arrangement(c3), ints({2, 1, 1}), true));
  REQUIRE(iv3.size() == 2);
  CHECK(iv3[0].hi == 2);
  CHECK(iv3[1].hi == 4);

  NormBall c4 = make_cube(4);
  auto iv4 = intervals(c4, make_region(c4, sweep_arrangement(c4), ints({8, 7, 5, 3}), true));
  std::vector<Rat> his;
  for (const auto& x : iv4) his.push_back(x.hi);
  CHECK(his == ints({1, 3, 7, 9, 13, 17, 23}));
}

TEST_CASE("published cube(3) representatives give 17 chambers") {
  NormBall c3 = make_cube(3);
  std::vector<RatVec> reps = table_representatives(3);
  CHECK(reps == std::vector<RatVec>{ints({1, 1, 1}), ints({2, 1, 1}), ints({2, 2, 1}), ints({3, 1, 1}),
                                    ints({3, 2, 1}), ints({4, 2, 1})});
  std::vector<std::size_t> rows = {2, 2, 3, 3, 3, 4};
  auto ch = chambers_for_representatives(c3, reps);
  CHECK(ch.size() == 17);
  for (std::size_t i = 0; i < reps.size(); ++i)
    CHECK(std::count_if(ch.begin(), ch.end(), [&](const Chamber& c) { return c.region.rep == reps[i]; }) ==
          static_cast<long>(rows[i]));
}

TEST_CASE("published cube(4) representatives match their interval counts") {
  NormBall c4 = make_cube(4);
  std::vector<std::pair<RatVec, std::size_t>> rows = {
      {ints({3, 2, 2, 2}), 4}, {ints({4, 2, 2, 2}), 3}, {ints({4, 4, 1, 1}), 4}, {ints({3, 3, 3, 2}), 4},
      {ints({5, 1, 1, 1}), 4}, {ints({5, 3, 2, 1}), 6}, {ints({5, 3, 3, 2}), 5}, {ints({4, 4, 3, 1}), 5},
      {ints({5, 3, 1, 1}), 5}, {ints({6, 4, 3, 1}), 6}, {ints({6, 4, 3, 3}), 5}, {ints({6, 4, 4, 1}), 6},
      {ints({6, 5, 4, 1}), 6}, {ints({8, 7, 5, 3}), 7}};
  std::vector<RatVec> reps;
  std::size_t total = 0;
  for (const auto& [a, n] : rows) {
    CHECK(chambers_for_representatives(c4, {a}).size() == n);
    reps.push_back(a);
    total += n;
  }
  CHECK(chambers_for_representatives(c4, reps).size() == total);
  CHECK(total == 70);
  CHECK(reps == table_representatives(4));
}

TEST_CASE("chamber invariants") {
  std::mt19937_64 rng(7);
  for (std::size_t d = 2; d <= 4; ++d) {
    NormBall c = make_cube(d);
    for (const auto& r : enumerate_regions(c, true)) {
      auto iv = intervals(c, r);
      Rat vmax = 0;
      for (const auto& v : c.vertices) vmax = std::max(vmax, dot(r.rep, v));
      CHECK(iv.front().lo == 0);
      CHECK(iv.back().hi == 2 * vmax);
      for (std::size_t k = 1; k < iv.size(); ++k) CHECK(iv[k].lo == iv[k - 1].hi);

      for (const auto& i : iv) {
        Chamber ch = make_chamber(c, r, i);
        CHECK(ch.lo < ch.t_rep);
        CHECK(ch.t_rep < ch.hi);
        CHECK(ch.cut_edges.size() == brute_cut_edges(c, r.rep, ch.t_rep).size());
        for (int k = 0; k < 3; ++k) {
          Chamber again = rechoose_t(c, ch, random_inside(rng, ch.lo, ch.hi));
          CHECK(again.cut_edges == ch.cut_edges);
          CHECK(again.inside_vertices == ch.inside_vertices);
        }
        std::set<std::pair<RatVec, RatVec>> mine;
        for (auto e : ch.cut_edges) {
          auto [p, q] = c.edges[e];
          RatVec v = c.vertices[p], w = c.vertices[q];
          if (w < v) std::swap(v, w);
          mine.insert({v, w});
        }
        CHECK(mine == brute_cut_edges(c, r.rep, ch.t_rep));
      }
    }
  }
}

TEST_CASE("locate_chamber") {
  NormBall sq = make_cube(2);
  Chamber c = locate_chamber(sq, ints({2, 1}), Rat(1, 2));
  CHECK(c.j == 0);
  CHECK(c.t_rep == Rat(1, 2));
  CHECK(c.cut_edges.size() == 2);
  CHECK(locate_chamber(sq, ints({2, 1}), Rat(5, 2)).j == 1);
  CHECK(kind_of([&] { locate_chamber(sq, ints({2, 1}), Rat(1)); }) == ErrorKind::BoundaryPoint);
  CHECK(kind_of([&] { locate_chamber(sq, ints({1, 1}), Rat(1)); }) == ErrorKind::BoundaryPoint);
  CHECK(kind_of([&] { locate_chamber(sq, ints({2, 1}), Rat(0)); }) == ErrorKind::BoundaryPoint);
  CHECK(kind_of([&] { locate_chamber(sq, ints({2, 1}), Rat(4)); }) == ErrorKind::Empty);
  CHECK(kind_of([&] { locate_chamber(sq, ints({2, 1, 1}), Rat(1)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("signed permutations") {
  CHECK(signed_permutations(1).size() == 2);
  CHECK(signed_permutations(3).size() == 48);
}

TEST_CASE("chambers json layout") {
  auto j = chambers_to_json(enumerate_chambers(make_cube(2), true));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["a_rep"].size() == 2);
  CHECK(j[0]["vertex_order"] == nlohmann::json({0, 3, 1, 2}));
  REQUIRE(j[0]["intervals"].size() == 2);
  CHECK(j[0]["intervals"][0]["lo"] == "0");
  CHECK(j[0]["intervals"][1]["j"] == 1);
}
