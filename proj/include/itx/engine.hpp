#pragma once

#include <span>

#include "itx/kernels.hpp"
#include "itx/types.hpp"

namespace itx {

enum class Dir : uint8_t { Horizontal = 0, Vertical = 1 };

const char* to_string(Dir d);

// One 1-D inverse stage: transform family, point count, pass direction.
struct TransformSpec {
  TrType type = TrType::DCT2;
  int size    = 0;
  Dir dir     = Dir::Horizontal;
};

// Shift and width settings shared by the 2-D inverse and the secondary stage.
// The first (vertical) pass shifts by s1 and clamps to 18 bits; the second
// shifts by s2 = 20 - bit_depth and clamps to 11 bits.
struct StageConfig {
  int bit_depth       = 10;
  int lfnst_shift     = 7;
  int s1              = 7;
  int s2              = 10;
  int mid_bits        = kIntermediateBits;
  int out_bits        = kOutputBits;
  bool vertical_first = true;

  static StageConfig for_bit_depth(int bd);
  void validate() const;  // throws std::invalid_argument
};

// Points the stage actually reads: high-frequency inputs beyond this index
// are guaranteed zero by the encoder and are skipped. min(n,16) for the
// sine-family kernels, min(n,32) for DCT-II.
int effective_size(int n, TrType type);

struct LineResult {
  std::vector<coeff_t> out;
  long mults = 0;  // multiplications actually evaluated
};

// Optimised 1-D inverse: DCT-II through the recursive even/odd butterfly,
// DCT-VIII as sign-flipped inputs + DST-VII + reversed outputs. Inputs at
// index >= effective_size are ignored. Bit-exact against naive_inverse_1d on
// a vector whose ignored entries are zero.
LineResult inverse_mts_1d(std::span<const coeff_t> in, const TransformSpec& spec, const KernelSet& kernels, int shift,
                          int clamp_to_bits);

// Multiplications inverse_mts_1d performs for one line of this spec.
long mult_count_1d(const TransformSpec& spec);

// Two separable passes over the block; vertical first by default. Zeroing
// applies in both passes, so junk beyond the effective region in either
// dimension never reaches the output.
CoeffBlock inverse_mts_2d(const CoeffBlock& in, const TransformSpec& hor, const TransformSpec& ver,
                          const KernelSet& kernels, const StageConfig& cfg);

}  // namespace itx
