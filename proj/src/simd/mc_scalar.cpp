#include "mc_kernel.hpp"

namespace slabkit::simd {

void mc_block_scalar(const McBlock& b, McSums& out) {
  for (std::size_t k = 0; k < b.n; ++k) mc_sample(b, k, out);
}

}  // namespace slabkit::simd
