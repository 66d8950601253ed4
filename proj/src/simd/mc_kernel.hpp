#pragma once

#include <cstddef>
#include <cstdint>

namespace slabkit::simd {

// One block of box samples in structure-of-arrays layout: coordinate i of
// sample k is xs[i * n + k].
struct McBlock {
  std::size_t dim = 0;
  std::size_t n = 0;
  const double* xs = nullptr;
  std::size_t n_facets = 0;
  const double* normals = nullptr;  // n_facets x dim, row major
  const double* offsets = nullptr;
  const double* a = nullptr;
  double half_t = 0;
  unsigned M = 0;
};

// Per-lane partial sums; sample k always lands in lane k % 4 so that the
// scalar and vector kernels add in the same order.
struct McSums {
  double sum[4] = {0, 0, 0, 0};
  double sumsq[4] = {0, 0, 0, 0};
  std::uint64_t count[4] = {0, 0, 0, 0};
};

// Adds sample k to its lane; shared by both kernels.
inline void mc_sample(const McBlock& b, std::size_t k, McSums& out) {
  const std::size_t lane = k % 4;
  for (std::size_t f = 0; f < b.n_facets; ++f) {
    double s = b.normals[f * b.dim] * b.xs[k];
    for (std::size_t i = 1; i < b.dim; ++i) s = s + b.normals[f * b.dim + i] * b.xs[i * b.n + k];
    if (!(s <= b.offsets[f])) return;
  }
  double s = b.a[0] * b.xs[k];
  for (std::size_t i = 1; i < b.dim; ++i) s = s + b.a[i] * b.xs[i * b.n + k];
  if (!(s <= b.half_t && s >= -b.half_t)) return;
  double f = 1.0;
  if (b.M > 0) {
    f = 0.0;
    for (std::size_t i = 0; i < b.dim; ++i) {
      const double x = b.xs[i * b.n + k];
      double p = x;
      for (unsigned m = 1; m < b.M; ++m) p = p * x;
      f = f + p;
    }
  }
  out.sum[lane] += f;
  out.sumsq[lane] += f * f;
  out.count[lane] += 1;
}

void mc_block_scalar(const McBlock& b, McSums& out);
void mc_block_avx2(const McBlock& b, McSums& out);
bool avx2_available();

}  // namespace slabkit::simd
