#include "slabkit/polytope.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "slabkit/error.hpp"

namespace slabkit {

namespace {

/// Row-reduces `rows` (k x n) in place and returns the pivot columns.
std::vector<std::size_t> rref(std::vector<RatVec>& rows, std::size_t n) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    Rat inv = 1 / rows[r][col];
    for (std::size_t k = col; k < n; ++k) rows[r][k] *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col] == 0) continue;
      Rat f = rows[i][col];
      for (std::size_t k = col; k < n; ++k) rows[i][k] -= f * rows[r][k];
    }
    pivots.push_back(col);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

/// A nonzero vector orthogonal to every row when the rows have rank n-1.
std::optional<RatVec> normal_of(std::vector<RatVec> rows, std::size_t n) {
  auto pivots = rref(rows, n);
  if (pivots.size() != n - 1) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t c = 0, k = 0; c < n; ++c) {
    if (k < pivots.size() && pivots[k] == c) {
      ++k;
    } else {
      free_col = c;
      break;
    }
  }
  RatVec x(n, Rat(0));
  x[free_col] = 1;
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -rows[i][free_col];
  return x;
}

RatVec scaled_primitive(const RatVec& v) {
  auto p = primitive_direction(v);
  RatVec out;
  for (auto& x : p) out.emplace_back(x);
  return out;
}

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const VertexSet& big, const VertexSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

void derive_edges(NormBall& ball) {
  const std::size_t n = ball.vertices.size();
  std::vector<std::vector<std::size_t>> facets_of(n);
  for (std::size_t f = 0; f < ball.facets.size(); ++f)
    for (auto v : ball.facets[f].vertices) facets_of[v].push_back(f);
  ball.edges.clear();
  for (std::uint32_t v = 0; v < n; ++v) {
    for (std::uint32_t w = v + 1; w < n; ++w) {
      // Smallest face containing both: intersection of all facets through both.
      VertexSet common;
      bool first = true;
      for (auto f : facets_of[v]) {
        const auto& fs = ball.facets[f].vertices;
        if (!std::binary_search(fs.begin(), fs.end(), w)) continue;
        common = first ? fs : intersect(common, fs);
        first = false;
        if (common.size() == 2) break;
      }
      if (!first && common.size() == 2) ball.edges.emplace_back(v, w);
    }
  }
}

}  // namespace

std::vector<std::size_t> FaceLattice::count_by_dim() const {
  std::vector<std::size_t> counts(dim + 1, 0);
  for (int d : face_dim)
    if (d >= 0) ++counts[static_cast<std::size_t>(d)];
  return counts;
}

int affine_dimension(const std::vector<RatVec>& points, const VertexSet& subset) {
  if (subset.empty()) return -1;
  const RatVec& p0 = points[subset[0]];
  const std::size_t n = p0.size();
  std::vector<RatVec> rows;
  for (std::size_t i = 1; i < subset.size(); ++i) {
    RatVec r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = points[subset[i]][k] - p0[k];
    rows.push_back(std::move(r));
  }
  if (rows.empty()) return 0;
  return static_cast<int>(rref(rows, n).size());
}

NormBall make_cube(std::size_t d) {
  if (d < 1 || d > 8) throw Error(ErrorKind::DimensionTooLarge, "cube dimension must be in 1..8");
  NormBall ball;
  ball.dim = d;
  ball.name = "cube";
  // Reflected Gray code order: consecutive vertices differ in one coordinate,
  // which for d = 2 walks the square counter-clockwise from (-1/2, -1/2).
  const std::size_t n = std::size_t{1} << d;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t g = k ^ (k >> 1);
    RatVec v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = (g >> i) & 1u ? Rat(1, 2) : Rat(-1, 2);
    ball.vertices.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (int s : {1, -1}) {
      Facet f;
      f.normal.assign(d, Rat(0));
      f.normal[i] = s;
      f.offset = Rat(1, 2);
      for (std::uint32_t v = 0; v < n; ++v)
        if (ball.vertices[v][i] * s > 0) f.vertices.push_back(v);
      ball.facets.push_back(std::move(f));
    }
  }
  derive_edges(ball);
  return ball;
}

NormBall make_cross_polytope(std::size_t d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "cross polytope needs d >= 2");
  if (d > 8) throw Error(ErrorKind::DimensionTooLarge, "cross polytope dimension must be at most 8");
  NormBall ball;
  ball.dim = d;
  ball.name = "cross";
  for (std::size_t i = 0; i < d; ++i) {
    for (int s : {-1, 1}) {
      RatVec v(d, Rat(0));
      v[i] = Rat(s, 2);
      v[i].canonicalize();
      ball.vertices.push_back(std::move(v));
    }
  }
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Facet f;
    f.normal.resize(d);
    for (std::size_t i = 0; i < d; ++i) f.normal[i] = (mask >> i) & 1u ? -1 : 1;
    f.offset = Rat(1, 2);
    for (std::uint32_t v = 0; v < ball.vertices.size(); ++v)
      if (dot(f.normal, ball.vertices[v]) == f.offset) f.vertices.push_back(v);
    ball.facets.push_back(std::move(f));
  }
  derive_edges(ball);
  return ball;
}

NormBall build_face_lattice(const std::vector<RatVec>& vertices, bool require_symmetric) {
  if (vertices.empty()) throw Error(ErrorKind::Empty, "no vertices");
  const std::size_t d = vertices[0].size();
  const std::size_t n = vertices.size();
  for (const auto& v : vertices)
    if (v.size() != d) throw Error(ErrorKind::InvalidArgument, "vertices have mixed dimensions");
  VertexSet all(n);
  for (std::uint32_t i = 0; i < n; ++i) all[i] = i;
  if (affine_dimension(vertices, all) != static_cast<int>(d))
    throw Error(ErrorKind::NotFullDimensional, "points do not affinely span R^d");
  {
    std::set<RatVec> seen(vertices.begin(), vertices.end());
    if (seen.size() != n) throw Error(ErrorKind::NotVertexSet, "repeated point");
  }

  NormBall ball;
  ball.dim = d;
  ball.name = "custom";
  ball.vertices = vertices;
  std::set<VertexSet> found;

  // Enumerate d-subsets in lexicographic order.
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  while (true) {
    bool covered = false;
    for (const auto& f : found) {
      bool all_in = true;
      for (auto i : idx)
        if (!std::binary_search(f.begin(), f.end(), static_cast<std::uint32_t>(i))) {
          all_in = false;
          break;
        }
      if (all_in) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      std::vector<RatVec> rows;
      for (std::size_t k = 1; k < d; ++k) {
        RatVec r(d);
        for (std::size_t c = 0; c < d; ++c) r[c] = vertices[idx[k]][c] - vertices[idx[0]][c];
        rows.push_back(std::move(r));
      }
      std::optional<RatVec> normal = d == 1 ? std::optional<RatVec>(RatVec{Rat(1)}) : normal_of(rows, d);
      if (normal) {
        Rat off = dot(*normal, vertices[idx[0]]);
        int above = 0, below = 0;
        VertexSet on;
        for (std::uint32_t v = 0; v < n; ++v) {
          int s = sgn(dot(*normal, vertices[v]) - off);
          if (s > 0) ++above;
          if (s < 0) ++below;
          if (s == 0) on.push_back(v);
        }
        if (above == 0 || below == 0) {
          if (found.insert(on).second) {
            Facet f;
            f.normal = scaled_primitive(*normal);
            // Orient outward: some vertex lies strictly inside.
            for (std::uint32_t v = 0; v < n; ++v) {
              int s = sgn(dot(f.normal, vertices[v]) - dot(f.normal, vertices[on[0]]));
              if (s == 0) continue;
              if (s > 0)
                for (auto& x : f.normal) x = -x;
              break;
            }
            f.offset = dot(f.normal, vertices[on[0]]);
            f.vertices = on;
            ball.facets.push_back(std::move(f));
          }
        }
      }
    }
    // next combination
    std::size_t i = d;
    while (i > 0 && idx[i - 1] == n - d + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t k = i; k < d; ++k) idx[k] = idx[k - 1] + 1;
  }

  // Every input point must be the unique point of the intersection of its facets.
  for (std::uint32_t v = 0; v < n; ++v) {
    VertexSet meet = all;
    bool on_any = false;
    for (const auto& f : ball.facets) {
      if (!std::binary_search(f.vertices.begin(), f.vertices.end(), v)) continue;
      meet = intersect(meet, f.vertices);
      on_any = true;
    }
    if (!on_any || meet.size() != 1)
      throw Error(ErrorKind::NotVertexSet, "point " + std::to_string(v) + " is not a vertex of the hull");
  }
  if (require_symmetric) {
    std::set<RatVec> pts(vertices.begin(), vertices.end());
    for (const auto& v : vertices) {
      RatVec neg = v;
      for (auto& x : neg) x = -x;
      if (!pts.count(neg)) throw Error(ErrorKind::NotCentrallySymmetric, "vertex set is not centrally symmetric");
    }
  }
  std::sort(ball.facets.begin(), ball.facets.end(),
            [](const Facet& a, const Facet& b) { return a.vertices < b.vertices; });
  derive_edges(ball);
  return ball;
}

FaceLattice compute_faces(const std::vector<RatVec>& points, const std::vector<VertexSet>& facet_sets,
                          std::size_t polytope_dim) {
  FaceLattice lat;
  lat.dim = polytope_dim;
  VertexSet all(points.size());
  for (std::uint32_t i = 0; i < points.size(); ++i) all[i] = i;

  std::map<VertexSet, int> dims;
  dims[all] = static_cast<int>(polytope_dim);
  std::vector<VertexSet> facets;
  for (const auto& fs : facet_sets) {
    if (fs.empty() || dims.count(fs)) continue;
    int fd = affine_dimension(points, fs);
    if (fd == static_cast<int>(polytope_dim) - 1) {
      dims[fs] = fd;
      facets.push_back(fs);
    }
  }
  // Close under intersection with facets, level by level.
  std::vector<VertexSet> frontier = facets;
  while (!frontier.empty()) {
    std::vector<VertexSet> next;
    for (const auto& face : frontier) {
      for (const auto& f : facets) {
        VertexSet meet = intersect(face, f);
        if (meet.empty() || meet.size() == face.size() || dims.count(meet)) continue;
        dims[meet] = affine_dimension(points, meet);
        next.push_back(std::move(meet));
      }
    }
    frontier = std::move(next);
  }
  for (auto& [fs, fd] : dims) {
    lat.faces.push_back(fs);
    lat.face_dim.push_back(fd);
  }
  lat.children.resize(lat.faces.size());
  for (std::size_t i = 0; i < lat.faces.size(); ++i) {
    if (lat.faces[i].size() == points.size()) lat.top = i;
    for (std::size_t j = 0; j < lat.faces.size(); ++j) {
      if (lat.face_dim[j] + 1 == lat.face_dim[i] && contains(lat.faces[i], lat.faces[j]))
        lat.children[i].push_back(j);
    }
  }
  return lat;
}

HPolytope to_hpolytope(const NormBall& ball) {
  HPolytope p;
  p.dim = ball.dim;
  for (const auto& f : ball.facets) p.inequalities.push_back({f.normal, f.offset});
  return p;
}

HPolytope slab_hpolytope(const NormBall& ball, const RatVec& a, const Rat& t) {
  HPolytope p = to_hpolytope(ball);
  RatVec neg = a;
  for (auto& x : neg) x = -x;
  p.inequalities.push_back({a, t / 2});
  p.inequalities.push_back({neg, t / 2});
  return p;
}

RatVec interior_point(const NormBall& ball) {
  if (ball.vertices.empty()) throw Error(ErrorKind::Empty, "empty polytope");
  RatVec c(ball.dim, Rat(0));
  for (const auto& v : ball.vertices)
    for (std::size_t i = 0; i < ball.dim; ++i) c[i] += v[i];
  for (auto& x : c) x /= static_cast<long>(ball.vertices.size());
  return c;
}

RatVec interior_point(const HPolytope& p) {
  auto verts = hpolytope_vertices(p);
  if (verts.empty()) throw Error(ErrorKind::Empty, "empty polytope");
  RatVec c(p.dim, Rat(0));
  for (const auto& v : verts)
    for (std::size_t i = 0; i < p.dim; ++i) c[i] += v[i];
  for (auto& x : c) x /= static_cast<long>(verts.size());
  return c;
}

std::vector<RatVec> hpolytope_vertices(const HPolytope& p) {
  const std::size_t d = p.dim;
  const std::size_t m = p.inequalities.size();
  std::set<RatVec> out;
  if (m < d) return {};
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  std::vector<Rat> a(d * d), b(d);
  RatVec x;
  while (true) {
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a[r * d + c] = p.inequalities[idx[r]].normal[c];
      b[r] = p.inequalities[idx[r]].offset;
    }
    if (solve(a, b, d, x)) {
      bool feasible = true;
      for (const auto& h : p.inequalities)
        if (dot(h.normal, x) > h.offset) {
          feasible = false;
          break;
        }
      if (feasible) out.insert(x);
    }
    std::size_t i = d;
    while (i > 0 && idx[i - 1] == m - d + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t k = i; k < d; ++k) idx[k] = idx[k - 1] + 1;
  }
  return {out.begin(), out.end()};
}

namespace {

bool is_bounded(const HPolytope& p) {
  // Unbounded iff some nonzero y has <n_i, y> <= 0 for all i; an extreme ray
  // of that cone is tight on d-1 independent rows.
  const std::size_t d = p.dim;
  const std::size_t m = p.inequalities.size();
  if (d == 1) {
    bool pos = false, neg = false;
    for (const auto& h : p.inequalities) {
      if (h.normal[0] > 0) pos = true;
      if (h.normal[0] < 0) neg = true;
    }
    return pos && neg;
  }
  if (m < d) return false;
  std::vector<RatVec> normals;
  for (const auto& h : p.inequalities) normals.push_back(h.normal);
  {
    auto rows = normals;
    if (rref(rows, d).size() < d) return false;
  }
  std::vector<std::size_t> idx(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) idx[i] = i;
  while (true) {
    std::vector<RatVec> rows;
    for (auto i : idx) rows.push_back(normals[i]);
    if (auto y = normal_of(rows, d)) {
      for (int s : {1, -1}) {
        bool ray = true;
        for (const auto& nvec : normals)
          if (s * dot(nvec, *y) > 0) {
            ray = false;
            break;
          }
        if (ray) return false;
      }
    }
    std::size_t i = d - 1;
    while (i > 0 && idx[i - 1] == m - (d - 1) + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t k = i; k < d - 1; ++k) idx[k] = idx[k - 1] + 1;
  }
  return true;
}

struct PullingContext {
  const std::vector<RatVec>* points;
  std::vector<VertexSet> facets;
};

/// Pulling triangulation of the face `face` of dimension k: cone its lowest
/// vertex over the triangulations of the facets of `face` that avoid it.
void pull(const PullingContext& ctx, const VertexSet& face, int k, std::vector<VertexSet>& out) {
  if (k == 0) {
    out.push_back(face);
    return;
  }
  const std::uint32_t apex = face.front();
  std::set<VertexSet> subfaces;
  for (const auto& f : ctx.facets) {
    VertexSet meet = intersect(face, f);
    if (meet.size() < static_cast<std::size_t>(k) || meet.size() == face.size()) continue;
    if (std::binary_search(meet.begin(), meet.end(), apex)) continue;
    if (subfaces.count(meet)) continue;
    if (affine_dimension(*ctx.points, meet) != k - 1) continue;
    subfaces.insert(meet);
  }
  for (const auto& sub : subfaces) {
    std::vector<VertexSet> simplices;
    pull(ctx, sub, k - 1, simplices);
    for (auto& s : simplices) {
      s.insert(s.begin(), apex);
      out.push_back(std::move(s));
    }
  }
}

Int int_factorial(unsigned n) { return factorial(n); }

}  // namespace

Rat integrate_affine_powers(const HPolytope& p, const std::vector<AffineForm>& forms, unsigned M) {
  const std::size_t d = p.dim;
  if (!is_bounded(p)) throw Error(ErrorKind::Unbounded, "polytope is unbounded");
  std::vector<RatVec> verts = hpolytope_vertices(p);
  if (verts.empty()) throw Error(ErrorKind::Empty, "polytope is empty");
  VertexSet all(verts.size());
  for (std::uint32_t i = 0; i < verts.size(); ++i) all[i] = i;
  if (affine_dimension(verts, all) < static_cast<int>(d)) return 0;

  PullingContext ctx{&verts, {}};
  for (const auto& h : p.inequalities) {
    VertexSet on;
    for (std::uint32_t v = 0; v < verts.size(); ++v)
      if (dot(h.normal, verts[v]) == h.offset) on.push_back(v);
    if (!on.empty()) ctx.facets.push_back(std::move(on));
  }
  std::vector<VertexSet> simplices;
  pull(ctx, all, static_cast<int>(d), simplices);

  // Dirichlet integral over a simplex: integral of prod lambda_j^{alpha_j}
  // equals d! vol * prod alpha_j! / (d + |alpha|)!. Summing the multinomial
  // expansion of (sum_j lambda_j y_j)^M collapses to d! M!/(d+M)! * h_M(y).
  Rat weight(int_factorial(M) * int_factorial(static_cast<unsigned>(d)), int_factorial(M + static_cast<unsigned>(d)));
  weight.canonicalize();
  Rat total = 0;
  std::vector<Rat> mat(d * d);
  for (const auto& s : simplices) {
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) mat[r * d + c] = verts[s[r + 1]][c] - verts[s[0]][c];
    Rat vol = abs(determinant(mat, d)) / Rat(int_factorial(static_cast<unsigned>(d)));
    if (M == 0) {
      total += vol;
      continue;
    }
    Rat acc = 0;
    for (const auto& form : forms) {
      std::vector<Rat> y;
      for (auto vi : s) y.push_back(dot(form.coeffs, verts[vi]) + form.constant);
      // h_M(y) via the recurrence h_M(y_0..y_k) = h_M(y_0..y_{k-1}) + y_k h_{M-1}(y_0..y_k).
      std::vector<Rat> h(M + 1, Rat(0));
      h[0] = 1;
      for (const auto& yk : y)
        for (unsigned e = 1; e <= M; ++e) h[e] += yk * h[e - 1];
      acc += h[M];
    }
    total += vol * weight * acc;
  }
  return total;
}

Rat exact_volume(const HPolytope& p) { return integrate_affine_powers(p, {}, 0); }

Rat exact_moment(const HPolytope& p, unsigned M) {
  std::vector<AffineForm> forms;
  for (std::size_t i = 0; i < p.dim; ++i) {
    AffineForm f{RatVec(p.dim, Rat(0)), Rat(0)};
    f.coeffs[i] = 1;
    forms.push_back(std::move(f));
  }
  return integrate_affine_powers(p, forms, M);
}

Rat exact_slice_moment(const NormBall& ball, const RatVec& a, const Rat& t, unsigned M) {
  const std::size_t d = ball.dim;
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "slices need d >= 2");
  if (dot(a, a) != 1) throw Error(ErrorKind::InvalidArgument, "slice oracle needs an exact unit normal");
  std::size_t k = 0;
  while (k < d && a[k] == 0) ++k;
  // Eliminate x_k = (t/2 - sum_{i != k} a_i x_i) / a_k and integrate over the
  // projection; the area element picks up ||a|| / |a_k| = 1 / |a_k|.
  auto reduce = [&](const RatVec& full) {
    RatVec r;
    for (std::size_t i = 0; i < d; ++i)
      if (i != k) r.push_back(full[i] - full[k] * a[i] / a[k]);
    return r;
  };
  HPolytope proj;
  proj.dim = d - 1;
  for (const auto& f : ball.facets) proj.inequalities.push_back({reduce(f.normal), f.offset - f.normal[k] * t / (2 * a[k])});
  std::vector<AffineForm> forms;
  for (std::size_t i = 0; i < d; ++i) {
    AffineForm form{RatVec(d - 1, Rat(0)), Rat(0)};
    if (i == k) {
      std::size_t j = 0;
      for (std::size_t m = 0; m < d; ++m)
        if (m != k) form.coeffs[j++] = -a[m] / a[k];
      form.constant = t / (2 * a[k]);
    } else {
      form.coeffs[i < k ? i : i - 1] = 1;
    }
    forms.push_back(std::move(form));
  }
  try {
    return integrate_affine_powers(proj, forms, M) / abs(a[k]);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Empty) return 0;
    throw;
  }
}

nlohmann::json polytope_to_json(const NormBall& ball) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : ball.vertices) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(to_string(x));
    verts.push_back(row);
  }
  return {{"dim", ball.dim}, {"vertices", verts}};
}

NormBall polytope_from_json(const nlohmann::json& j) {
  try {
    std::size_t d = j.at("dim").get<std::size_t>();
    std::vector<RatVec> verts;
    for (const auto& row : j.at("vertices")) {
      RatVec v;
      for (const auto& x : row) v.push_back(x.is_string() ? parse_rat(x.get<std::string>()) : Rat(x.get<long>()));
      if (v.size() != d) throw Error(ErrorKind::Parse, "vertex has wrong dimension");
      verts.push_back(std::move(v));
    }
    return build_face_lattice(verts);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, e.what());
  }
}

}  // namespace slabkit
