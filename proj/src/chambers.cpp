#include "slabkit/chambers.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "slabkit/error.hpp"

namespace slabkit {

std::string Region::key() const {
  std::string k;
  k.reserve(sign_vector.size());
  for (int s : sign_vector) k += s > 0 ? '+' : (s < 0 ? '-' : '0');
  return k;
}

std::string Chamber::descriptor() const {
  std::string s = "(";
  for (std::size_t i = 0; i < region.rep.size(); ++i) {
    if (i) s += ",";
    s += to_string(region.rep[i]);
  }
  return s + ")#" + std::to_string(j);
}

SweepArrangement sweep_arrangement(const NormBall& ball) {
  SweepArrangement arr;
  arr.dim = ball.dim;
  std::set<std::vector<Int>> seen;
  const auto& V = ball.vertices;
  for (std::size_t v = 0; v < V.size(); ++v) {
    for (std::size_t w = v + 1; w < V.size(); ++w) {
      RatVec diff(ball.dim);
      for (std::size_t i = 0; i < ball.dim; ++i) diff[i] = V[v][i] - V[w][i];
      seen.insert(primitive_direction(diff));
    }
  }
  for (const auto& n : seen) {
    RatVec r;
    for (const auto& x : n) r.emplace_back(x);
    arr.normals.push_back(std::move(r));
  }
  return arr;
}

std::vector<int> sign_vector(const SweepArrangement& arr, const RatVec& a) {
  std::vector<int> s;
  s.reserve(arr.normals.size());
  for (const auto& h : arr.normals) s.push_back(sgn(dot(a, h)));
  return s;
}

bool is_generic(const SweepArrangement& arr, const RatVec& a) {
  for (const auto& h : arr.normals)
    if (dot(a, h) == 0) return false;
  return true;
}

Region make_region(const NormBall& ball, const SweepArrangement& arr, const RatVec& a, bool allow_nongeneric) {
  if (a.size() != ball.dim) throw Error(ErrorKind::InvalidArgument, "direction has wrong dimension");
  Region r;
  r.rep = a;
  r.sign_vector = sign_vector(arr, a);
  r.generic = std::find(r.sign_vector.begin(), r.sign_vector.end(), 0) == r.sign_vector.end();
  if (!r.generic && !allow_nongeneric)
    throw Error(ErrorKind::BoundaryPoint, "direction lies on a sweep hyperplane");
  std::vector<Rat> vals;
  for (const auto& v : ball.vertices) vals.push_back(dot(a, v));
  r.vertex_order.resize(ball.vertices.size());
  std::iota(r.vertex_order.begin(), r.vertex_order.end(), 0u);
  std::stable_sort(r.vertex_order.begin(), r.vertex_order.end(),
                   [&](std::uint32_t x, std::uint32_t y) { return vals[x] < vals[y]; });
  return r;
}

std::optional<std::size_t> known_region_count(const NormBall& ball, bool fundamental_only) {
  // Counts established by exhaustive sampling (see tests); the full-sphere
  // count is the fundamental count times the 2^d d! signed permutations.
  static const std::map<std::pair<std::string, std::size_t>, std::size_t> fundamental = {
      {{"cube", 1}, 1},  {{"cube", 2}, 1},  {{"cube", 3}, 2},  {{"cube", 4}, 14},
      {{"cross", 2}, 1}, {{"cross", 3}, 1}, {{"cross", 4}, 1}, {{"cross", 5}, 1},
  };
  auto it = fundamental.find({ball.name, ball.dim});
  if (it == fundamental.end()) return std::nullopt;
  if (fundamental_only) return it->second;
  std::size_t group = 1;
  for (std::size_t i = 1; i <= ball.dim; ++i) group *= 2 * i;
  return it->second * group;
}

std::vector<std::pair<std::vector<std::size_t>, std::vector<int>>> signed_permutations(std::size_t d) {
  std::vector<std::pair<std::vector<std::size_t>, std::vector<int>>> out;
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<int> sign(d);
      for (std::size_t i = 0; i < d; ++i) sign[i] = (mask >> i) & 1u ? -1 : 1;
      out.emplace_back(perm, sign);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

bool nicer(const RatVec& a, const RatVec& b) {
  auto score = [](const RatVec& v) {
    Rat mx = 0, sum = 0;
    for (const auto& x : v) {
      mx = std::max(mx, Rat(abs(x)));
      sum += abs(x);
    }
    return std::make_pair(mx, sum);
  };
  auto sa = score(a), sb = score(b);
  if (sa != sb) return sa < sb;
  return a > b;
}

bool symmetric_under_signed_permutations(const NormBall& ball) {
  return ball.name == "cube" || ball.name == "cross";
}

std::vector<Region> sample_regions(const NormBall& ball, const SweepArrangement& arr, const RegionSearch& search,
                                   std::optional<std::size_t> known) {
  const std::size_t d = ball.dim;
  std::mt19937_64 rng(search.seed);
  std::map<std::string, RatVec> best;
  std::size_t since_new = 0;
  long box = static_cast<long>(d) + 2;
  for (std::size_t sample = 0; sample < search.max_samples; ++sample) {
    if (since_new >= search.saturation && (!known || best.size() >= *known)) break;
    if (sample % 2000 == 1999) ++box;
    RatVec a(d);
    if (search.fundamental_only) {
      std::uniform_int_distribution<long> pick(1, box);
      std::vector<long> xs(d);
      for (auto& x : xs) x = pick(rng);
      std::sort(xs.rbegin(), xs.rend());
      for (std::size_t i = 0; i < d; ++i) a[i] = xs[i];
    } else {
      std::uniform_int_distribution<long> pick(-box, box);
      for (auto& x : a) x = pick(rng);
    }
    if (!is_generic(arr, a)) {
      ++since_new;
      continue;
    }
    std::string key;
    for (int s : sign_vector(arr, a)) key += s > 0 ? '+' : '-';
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, a);
      since_new = 0;
    } else {
      if (nicer(a, it->second)) it->second = a;
      ++since_new;
    }
  }
  if (known && best.size() < *known)
    throw Error(ErrorKind::RepresentativeSearchExhausted,
                "found " + std::to_string(best.size()) + " of " + std::to_string(*known) + " regions");
  if (!known && since_new < search.saturation)
    throw Error(ErrorKind::RepresentativeSearchExhausted, "sampling budget exhausted before saturation");
  std::vector<Region> out;
  for (auto& [k, a] : best) out.push_back(make_region(ball, arr, a));
  return out;
}

}  // namespace

std::vector<Region> enumerate_regions(const NormBall& ball, const RegionSearch& search) {
  SweepArrangement arr = sweep_arrangement(ball);
  auto known = known_region_count(ball, search.fundamental_only);
  if (search.fundamental_only || !symmetric_under_signed_permutations(ball)) {
    auto regions = sample_regions(ball, arr, search, known);
    std::sort(regions.begin(), regions.end(), [](const Region& x, const Region& y) { return x.key() < y.key(); });
    return regions;
  }
  // Full sphere for balls with the hyperoctahedral symmetry: the orbit of the
  // fundamental regions, whose walls are themselves sweep hyperplanes.
  RegionSearch fund = search;
  fund.fundamental_only = true;
  auto base = sample_regions(ball, arr, fund, known_region_count(ball, true));
  std::map<std::string, Region> all;
  for (const auto& [perm, sign] : signed_permutations(ball.dim)) {
    for (const auto& r : base) {
      RatVec a(ball.dim);
      for (std::size_t i = 0; i < ball.dim; ++i) a[i] = r.rep[perm[i]] * sign[i];
      Region img = make_region(ball, arr, a);
      all.emplace(img.key(), std::move(img));
    }
  }
  std::vector<Region> out;
  for (auto& [k, r] : all) out.push_back(std::move(r));
  return out;
}

std::vector<TInterval> intervals(const NormBall& ball, const Region& region) {
  std::set<Rat> pos;
  for (const auto& v : ball.vertices) {
    Rat x = 2 * dot(region.rep, v);
    if (x > 0) pos.insert(x);
  }
  std::vector<TInterval> out;
  Rat lo = 0;
  std::size_t j = 0;
  for (const auto& hi : pos) {
    TInterval iv;
    iv.j = j++;
    iv.lo = lo;
    iv.hi = hi;
    iv.t_rep = (lo + hi) / 2;
    out.push_back(iv);
    lo = hi;
  }
  return out;
}

Chamber rechoose_t(const NormBall& ball, const Chamber& c, const Rat& t) {
  Chamber out = c;
  out.t_rep = t;
  out.cut_edges.clear();
  out.inside_vertices.clear();
  const Rat half = t / 2;
  std::vector<Rat> vals;
  for (const auto& v : ball.vertices) vals.push_back(dot(c.region.rep, v));
  for (std::uint32_t e = 0; e < ball.edges.size(); ++e) {
    const Rat& x = vals[ball.edges[e].first];
    const Rat& y = vals[ball.edges[e].second];
    if ((x < half && half < y) || (y < half && half < x)) out.cut_edges.push_back(e);
  }
  for (std::uint32_t v = 0; v < vals.size(); ++v)
    if (abs(vals[v]) < half) out.inside_vertices.push_back(v);
  return out;
}

Chamber make_chamber(const NormBall& ball, const Region& region, const TInterval& iv) {
  Chamber c;
  c.region = region;
  c.j = iv.j;
  c.lo = iv.lo;
  c.hi = iv.hi;
  return rechoose_t(ball, c, iv.t_rep);
}

std::vector<Chamber> enumerate_chambers(const NormBall& ball, const RegionSearch& search) {
  std::vector<Chamber> out;
  for (const auto& r : enumerate_regions(ball, search))
    for (const auto& iv : intervals(ball, r)) out.push_back(make_chamber(ball, r, iv));
  return out;
}

std::vector<RatVec> table_representatives(std::size_t d) {
  static const std::map<std::size_t, std::vector<std::vector<long>>> tables{
      {2, {{2, 1}}},
      {3, {{1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {3, 1, 1}, {3, 2, 1}, {4, 2, 1}}},
      {4,
       {{3, 2, 2, 2}, {4, 2, 2, 2}, {4, 4, 1, 1}, {3, 3, 3, 2}, {5, 1, 1, 1}, {5, 3, 2, 1}, {5, 3, 3, 2},
        {4, 4, 3, 1}, {5, 3, 1, 1}, {6, 4, 3, 1}, {6, 4, 3, 3}, {6, 4, 4, 1}, {6, 5, 4, 1}, {8, 7, 5, 3}}},
  };
  auto it = tables.find(d);
  if (it == tables.end()) throw Error(ErrorKind::InvalidArgument, "no table of representatives in dimension " + std::to_string(d));
  std::vector<RatVec> out;
  for (const auto& row : it->second) out.emplace_back(row.begin(), row.end());
  return out;
}

std::vector<Chamber> chambers_for_representatives(const NormBall& ball, const std::vector<RatVec>& reps) {
  SweepArrangement arr = sweep_arrangement(ball);
  std::vector<Chamber> out;
  for (const auto& a : reps) {
    Region r = make_region(ball, arr, a, true);
    for (const auto& iv : intervals(ball, r)) out.push_back(make_chamber(ball, r, iv));
  }
  return out;
}

Chamber locate_chamber(const NormBall& ball, const RatVec& a, const Rat& t) {
  SweepArrangement arr = sweep_arrangement(ball);
  Region r = make_region(ball, arr, a);
  if (t <= 0) throw Error(ErrorKind::BoundaryPoint, "chambers are indexed by t > 0");
  for (const auto& iv : intervals(ball, r)) {
    if (t == iv.hi) throw Error(ErrorKind::BoundaryPoint, "t/2 equals <a, v> for a vertex v");
    if (t < iv.hi) {
      Chamber c = make_chamber(ball, r, iv);
      return rechoose_t(ball, c, t);
    }
  }
  throw Error(ErrorKind::Empty, "hyperplane misses the ball");
}

nlohmann::json chambers_to_json(const std::vector<Chamber>& chambers) {
  nlohmann::json out = nlohmann::json::array();
  const Region* current = nullptr;
  for (const auto& c : chambers) {
    if (!current || current->key() != c.region.key() || current->rep != c.region.rep) {
      nlohmann::json entry;
      nlohmann::json rep = nlohmann::json::array();
      for (const auto& x : c.region.rep) rep.push_back(to_string(x));
      entry["a_rep"] = rep;
      entry["vertex_order"] = c.region.vertex_order;
      entry["intervals"] = nlohmann::json::array();
      out.push_back(entry);
      current = &c.region;
    }
    out.back()["intervals"].push_back({{"j", c.j},
                                       {"lo", to_string(c.lo)},
                                       {"hi", to_string(c.hi)},
                                       {"t_rep", to_string(c.t_rep)}});
  }
  return out;
}

}  // namespace slabkit
