#include "slabkit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include "simd/mc_kernel.hpp"
#include "slabkit/error.hpp"

namespace slabkit {

RatVec inverse_stereographic(const RatVec& u) {
  Rat s = 0;
  for (const auto& x : u) s += x * x;
  RatVec out;
  for (const auto& x : u) out.push_back(2 * x / (s + 1));
  out.push_back((s - 1) / (s + 1));
  return out;
}

SpherePointStream::SpherePointStream(std::size_t dim, std::uint64_t seed) : dim_(dim), rng_(seed) {
  if (dim < 2) throw Error(ErrorKind::InvalidArgument, "sphere points need d >= 2");
}

SpherePointStream::SpherePointStream(std::size_t dim, std::uint64_t seed, SweepArrangement arr)
    : SpherePointStream(dim, seed) {
  arr_ = std::move(arr);
}

RatVec SpherePointStream::next() {
  std::uniform_int_distribution<long> den(1, 16);
  for (;;) {
    RatVec u(dim_ - 1);
    for (auto& x : u) {
      long m = den(rng_);
      std::uniform_int_distribution<long> num(-4 * m, 4 * m);
      x = Rat(num(rng_), m);
      x.canonicalize();
    }
    RatVec p = inverse_stereographic(u);
    if (arr_ && !is_generic(*arr_, p)) continue;
    return p;
  }
}

std::vector<RatVec> rational_sphere_points(std::size_t d, std::size_t n, std::uint64_t seed) {
  SpherePointStream s(d, seed);
  std::vector<RatVec> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.next());
  return out;
}

std::vector<RatVec> rational_sphere_points(const NormBall& ball, std::size_t n, std::uint64_t seed) {
  SpherePointStream s(ball.dim, seed, sweep_arrangement(ball));
  std::vector<RatVec> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.next());
  return out;
}

namespace {

Rat to_rat(double x, long den) {
  Rat r(std::lround(x * static_cast<double>(den)), den);
  r.canonicalize();
  return r;
}

}  // namespace

std::vector<RatVec> sphere_points_in_region(const NormBall& ball, const Region& region, std::size_t n,
                                            std::uint64_t seed) {
  const std::size_t d = ball.dim;
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "sphere points need d >= 2");
  if (!region.generic) throw Error(ErrorKind::InvalidArgument, "region representative is not generic");
  SweepArrangement arr = sweep_arrangement(ball);
  std::vector<double> x0(d);
  double norm = 0;
  for (std::size_t i = 0; i < d; ++i) {
    x0[i] = region.rep[i].get_d();
    norm += x0[i] * x0[i];
  }
  norm = std::sqrt(norm);
  for (auto& x : x0) x /= norm;
  // Project from the pole farther from the target.
  const int pole = x0[d - 1] > 0 ? -1 : 1;
  std::vector<double> u0(d - 1);
  for (std::size_t i = 0; i + 1 < d; ++i) u0[i] = x0[i] / (1 - pole * x0[d - 1]);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-1, 1);
  std::set<RatVec> seen;
  std::vector<RatVec> out;
  double radius = 0.2;
  long den = 1000;
  std::size_t fails = 0;
  while (out.size() < n) {
    RatVec u(d - 1);
    for (std::size_t i = 0; i + 1 < d; ++i) u[i] = to_rat(u0[i] + radius * noise(rng), den);
    RatVec p = inverse_stereographic(u);
    if (pole < 0) p.back() = -p.back();
    if (sign_vector(arr, p) == region.sign_vector && seen.insert(p).second) {
      out.push_back(std::move(p));
      fails = 0;
      continue;
    }
    if (++fails % 50 == 0) {
      radius *= 0.7;
      if (den < (1L << 40)) den *= 2;
    }
    if (fails > 5000) throw Error(ErrorKind::RepresentativeSearchExhausted, "no sphere points found in region");
  }
  return out;
}

Rat interior_t(const Rat& lo, const Rat& hi, std::mt19937_64& rng) {
  const Rat margin = (hi - lo) / 1000;
  std::uniform_int_distribution<long> pick(0, 1000000);
  Rat u(pick(rng), 1000000);
  u.canonicalize();
  return lo + margin + (hi - lo - 2 * margin) * u;
}

std::pair<Rat, Rat> chamber_interval_at(const NormBall& ball, const Chamber& c, const RatVec& a) {
  std::set<Rat> pos;
  for (const auto& v : ball.vertices) {
    Rat x = 2 * dot(a, v);
    if (x > 0) pos.insert(x);
  }
  std::vector<Rat> vals(pos.begin(), pos.end());
  if (c.j >= vals.size()) throw Error(ErrorKind::InvalidArgument, "chamber index beyond the last vertex");
  return {c.j == 0 ? Rat(0) : vals[c.j - 1], vals[c.j]};
}

SimdLevel detected_simd() { return simd::avx2_available() ? SimdLevel::Avx2 : SimdLevel::Scalar; }

std::string to_string(SimdLevel s) { return s == SimdLevel::Avx2 ? "avx2" : "scalar"; }

namespace {

constexpr std::size_t kBlock = 4096;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

McEstimate mc_slab_moment(const NormBall& ball, const std::vector<double>& a, double t, unsigned M,
                          std::size_t n_samples, std::uint64_t seed, unsigned threads) {
  return mc_slab_moment(ball, a, t, M, n_samples, seed, threads, detected_simd());
}

McEstimate mc_slab_moment(const NormBall& ball, const std::vector<double>& a, double t, unsigned M,
                          std::size_t n_samples, std::uint64_t seed, unsigned threads, SimdLevel level) {
  const std::size_t d = ball.dim;
  if (a.size() != d) throw Error(ErrorKind::InvalidArgument, "direction has wrong dimension");
  double norm = 0;
  for (double x : a) norm += x * x;
  if (std::fabs(std::sqrt(norm) - 1) > 1e-12) throw Error(ErrorKind::InvalidArgument, "direction must be a unit vector");
  if (n_samples < 10000) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs at least 10^4 samples");
  if (level == SimdLevel::Avx2 && !simd::avx2_available())
    throw Error(ErrorKind::InvalidArgument, "AVX2 requested but not supported by this CPU");

  std::vector<double> lo(d, 0), hi(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = hi[i] = ball.vertices.front()[i].get_d();
    for (const auto& v : ball.vertices) {
      lo[i] = std::min(lo[i], v[i].get_d());
      hi[i] = std::max(hi[i], v[i].get_d());
    }
  }
  double box = 1;
  for (std::size_t i = 0; i < d; ++i) box *= hi[i] - lo[i];
  std::vector<double> normals, offsets;
  for (const auto& f : ball.facets) {
    for (const auto& x : f.normal) normals.push_back(x.get_d());
    offsets.push_back(f.offset.get_d());
  }

  const std::size_t blocks = (n_samples + kBlock - 1) / kBlock;
  std::vector<simd::McSums> sums(blocks);
  auto run_block = [&](std::size_t blk, std::vector<double>& xs) {
    const std::size_t n = std::min(kBlock, n_samples - blk * kBlock);
    xs.resize(d * n);
    std::mt19937_64 rng(splitmix(seed ^ splitmix(blk)));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < d; ++i) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        xs[i * n + k] = lo[i] + (hi[i] - lo[i]) * u;
      }
    simd::McBlock b;
    b.dim = d;
    b.n = n;
    b.xs = xs.data();
    b.n_facets = offsets.size();
    b.normals = normals.data();
    b.offsets = offsets.data();
    b.a = a.data();
    b.half_t = t / 2;
    b.M = M;
    if (level == SimdLevel::Avx2)
      simd::mc_block_avx2(b, sums[blk]);
    else
      simd::mc_block_scalar(b, sums[blk]);
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (nt == 1) {
    std::vector<double> xs;
    for (std::size_t blk = 0; blk < blocks; ++blk) run_block(blk, xs);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nt; ++w)
      pool.emplace_back([&, w] {
        std::vector<double> xs;
        for (std::size_t blk = w; blk < blocks; blk += nt) run_block(blk, xs);
      });
    for (auto& th : pool) th.join();
  }
  double s = 0, s2 = 0;
  std::size_t count = 0;
  for (const auto& b : sums)
    for (int l = 0; l < 4; ++l) {
      s += b.sum[l];
      s2 += b.sumsq[l];
      count += b.count[l];
    }
  if (static_cast<double>(count) < 1e-3 * static_cast<double>(n_samples))
    throw Error(ErrorKind::DegenerateAcceptance, "acceptance rate below 1e-3");
  const double n = static_cast<double>(n_samples);
  const double mean = s / n;
  const double var = std::max(0.0, s2 / n - mean * mean);
  McEstimate e;
  e.estimate = box * mean;
  e.stderr_ = box * std::sqrt(var / n);
  e.accepted = count;
  e.samples = n_samples;
  return e;
}

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json j;
  j["pass"] = pass;
  j["chambers"] = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json e{{"chamber", r.chamber}, {"tested", r.tested}, {"matches", r.matches},
                     {"mismatches", r.mismatches}};
    if (r.worst_sigma > 0) e["worst_sigma"] = r.worst_sigma;
    j["chambers"].push_back(std::move(e));
  }
  return j;
}

namespace {

std::string show(const RatVec& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + to_string(a[i]);
  return s + ")";
}

ChamberRecord compare_piece(const NormBall& ball, ObjectKind kind, unsigned M, const FormulaPiece& piece,
                            CompareMode mode, const CompareBudget& budget, std::uint64_t seed) {
  ChamberRecord rec;
  rec.chamber = piece.chamber.descriptor();
  const std::size_t npts = mode == CompareMode::Exact ? budget.points : budget.mc_points;
  std::mt19937_64 rng(seed);
  std::vector<std::pair<RatVec, Rat>> points;
  Rat box = 1;
  for (std::size_t i = 0; i < ball.dim; ++i) {
    Rat lo = ball.vertices.front()[i], hi = lo;
    for (const auto& v : ball.vertices) {
      lo = std::min(lo, v[i]);
      hi = std::max(hi, v[i]);
    }
    box *= hi - lo;
  }
  if (mode == CompareMode::Exact) {
    for (auto& a : sphere_points_in_region(ball, piece.chamber.region, npts, seed)) {
      auto [lo, hi] = chamber_interval_at(ball, piece.chamber, a);
      points.emplace_back(std::move(a), interior_t(lo, hi, rng));
    }
  } else {
    // Sampling is from the bounding box, so thin slabs starve the estimator;
    // keep only points whose slab fills at least 1% of the box.
    for (auto& a : sphere_points_in_region(ball, piece.chamber.region, 32 * npts, seed)) {
      if (points.size() == npts) break;
      auto [lo, hi] = chamber_interval_at(ball, piece.chamber, a);
      for (int k = 0; k < 4; ++k) {
        Rat t = interior_t(lo, hi, rng);
        if (exact_volume(slab_hpolytope(ball, a, t)) >= box / 100) {
          points.emplace_back(a, t);
          break;
        }
      }
    }
    if (points.size() < npts)
      rec.mismatches.push_back("only " + std::to_string(points.size()) + " of " + std::to_string(npts) +
                               " points with a usable acceptance rate");
  }
  for (const auto& [a, t] : points) {
    RatVec pt = a;
    pt.push_back(t);
    Rat f = rf_eval(piece.formula, pt);
    ++rec.tested;
    if (mode == CompareMode::Exact) {
      Rat oracle = kind == ObjectKind::Slab ? exact_moment(slab_hpolytope(ball, a, t), M)
                                            : exact_slice_moment(ball, a, t, M);
      if (f == oracle)
        ++rec.matches;
      else
        rec.mismatches.push_back("a=" + show(a) + " t=" + to_string(t) + ": formula " + to_string(f) +
                                 ", oracle " + to_string(oracle));
    } else {
      if (kind != ObjectKind::Slab) throw Error(ErrorKind::InvalidArgument, "Monte Carlo mode covers slabs only");
      std::vector<double> ad;
      for (const auto& x : a) ad.push_back(x.get_d());
      McEstimate est = mc_slab_moment(ball, ad, t.get_d(), M, budget.samples, seed + rec.tested, 1);
      // When every sample (or none) is accepted the binomial standard error
      // is 0; one sample's contribution is the estimator's resolution then.
      double reach = 0;
      for (const auto& v : ball.vertices)
        for (const auto& x : v) reach = std::max(reach, std::fabs(x.get_d()));
      const double integrand = M == 0 ? 1.0 : static_cast<double>(ball.dim) * std::pow(reach, M);
      const double resolution = box.get_d() * integrand / static_cast<double>(budget.samples);
      const double diff = std::fabs(f.get_d() - est.estimate);
      const double sigma = diff / std::max(est.stderr_, resolution);
      rec.worst_sigma = std::max(rec.worst_sigma, sigma);
      if (sigma <= budget.sigmas)
        ++rec.matches;
      else
        rec.mismatches.push_back("a=" + show(a) + " t=" + to_string(t) + ": formula " + std::to_string(f.get_d()) +
                                 ", estimate " + std::to_string(est.estimate) + " +- " +
                                 std::to_string(est.stderr_));
    }
  }
  return rec;
}

}  // namespace

ComparisonReport compare(const NormBall& ball, ObjectKind kind, unsigned M, const PiecewiseFormula& pw,
                         CompareMode mode, const CompareBudget& budget) {
  if (pw.object != kind || pw.M != M || pw.dim != ball.dim)
    throw Error(ErrorKind::InvalidArgument, "piecewise formula was built for a different problem");
  ComparisonReport rep;
  rep.records.resize(pw.pieces.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto work = [&] {
    for (std::size_t i = next++; i < pw.pieces.size(); i = next++) {
      try {
        rep.records[i] = compare_piece(ball, kind, M, pw.pieces[i], mode, budget, budget.seed + 7919 * i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned nt = std::max(1u, std::min<unsigned>(budget.threads, static_cast<unsigned>(pw.pieces.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < nt; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  for (const auto& r : rep.records)
    if (!r.mismatches.empty()) rep.pass = false;
  return rep;
}

}  // namespace slabkit
