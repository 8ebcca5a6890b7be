#pragma once

#include <array>
#include <span>

#include "itx/engine.hpp"
#include "itx/kernels.hpp"
#include "itx/signaling.hpp"
#include "itx/types.hpp"

namespace itx {

// Secondary (low-frequency non-separable) inverse stage. Kernels are forward
// matrices of 16 orthonormal rows; the inverse multiplies by the transpose.

// Intra-mode-dependent kernel set, four classes over modes -14..83.
int lfnst_set_index(int ipm);

// Input/output vector lengths and nominal sample rates per block class.
struct LfnstShape {
  int in_size  = 0;  // coefficients read from the top-left 4x4 region
  int out_size = 0;  // coefficients written back (16 or 48)
  Rational in_rate;  // samples per cycle at the reference multiplier budget
  Rational out_rate;
};

LfnstShape lfnst_shape(int width, int height);

// Scan order of the top-left 4x4 region: anti-diagonals walked bottom-left to
// top-right, (x, y) = (column, row).
struct ScanPos {
  int x;
  int y;
};
const std::array<ScanPos, 16>& diag_scan_4x4();

// True when the secondary stage actually runs: VVC intra block, DCT-II in
// both directions, side lengths >= 4, kernel signalled, and the last
// significant coefficient early enough in scan order (< 8 for exactly 4x4 or
// 8x8 blocks, < 16 otherwise). Ineligible blocks bypass with identity.
bool lfnst_eligible(const BlockDescriptor& d);

// First in_size coefficients of the block in diagonal scan order.
std::vector<coeff_t> scan_extract(const CoeffBlock& block, int in_size);

// Scatter out (16 or 48 values) back into a cleared block: top-left 4x4 in
// scan order, then for 48 also the 4x4 sub-blocks right of and below it.
void place_output(std::span<const coeff_t> out, int out_size, CoeffBlock& block);

struct LfnstKernelSet {
  std::array<std::array<IntKernel, 2>, 4> k16;  // [set][kernel], 16 x 16
  std::array<std::array<IntKernel, 2>, 4> k48;  // [set][kernel], 16 x 48
  bool loaded = false;

  const IntKernel& kernel(int set_idx, int kernel_idx, int out_size) const;
};

// Full secondary stage: extract, multiply by the transposed kernel (shift
// lfnst_shift, clamp to mid_bits), scatter. Returns the input unchanged when
// the block is not eligible.
CoeffBlock inverse_lfnst(const BlockDescriptor& d, const CoeffBlock& in, const LfnstKernelSet& kernels,
                         const StageConfig& cfg);

}  // namespace itx
