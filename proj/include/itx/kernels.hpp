#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "itx/types.hpp"

namespace itx {

// Storage tag used in kernel files. MTS kernels are square; the secondary
// (low-frequency non-separable) kernels are 16-basis rectangular matrices.
enum class KernelKind : uint8_t {
  DCT2    = 0,
  DST7    = 1,
  DCT8    = 2,
  LFNST16 = 3,  // 16 x 16
  LFNST48 = 4,  // 16 x 48
};

const char* to_string(KernelKind k);

inline constexpr std::array<int, 5> kDct2Sizes = {4, 8, 16, 32, 64};
inline constexpr std::array<int, 4> kDst7Sizes = {4, 8, 16, 32};

int max_size(TrType t);  // 64 for DCT2, 32 otherwise

// Analytic basis entry, 1-based row i (basis index) and column j (sample
// index), both in [1, N]. Rows of the resulting matrix are orthonormal.
double generate_basis(TrType type, int n, int i, int j);

struct RealKernel {
  TrType type = TrType::DCT2;
  int size    = 0;
  std::vector<double> m;  // size x size, row-major

  double& at(int i, int j) { return m[size_t(i) * size + j]; }          // 0-based
  double at(int i, int j) const { return m[size_t(i) * size + j]; }
};

struct IntKernel {
  KernelKind kind    = KernelKind::DCT2;
  int rows           = 0;
  int cols           = 0;
  int precision_bits = 8;
  double scale       = 0.0;  // multiplier applied to the real basis before rounding
  std::vector<int16_t> m;    // rows x cols, row-major

  int16_t& at(int i, int j) { return m[size_t(i) * cols + j]; }
  int16_t at(int i, int j) const { return m[size_t(i) * cols + j]; }
  int size() const
  {
    assert(rows == cols);
    return rows;
  }
};

RealKernel real_kernel(TrType type, int n);

// Fixed-point kernel: round_half_away_from_zero(scale * entry) with the
// default scale 2^6 * sqrt(N). Throws std::overflow_error when an entry does
// not fit precision_bits signed bits.
IntKernel quantize_kernel(const RealKernel& k, int precision_bits = 8, double scale_override = 0.0);

// Reversal (anti-diagonal) and alternating-sign diagonal pair used to derive
// DCT-VIII from DST-VII without separate storage.
struct PermSignPair {
  int size = 0;
  std::vector<int8_t> lambda;  // anti-diagonal 0/1
  std::vector<int8_t> gamma;   // diagonal (-1)^i

  int8_t lambda_at(int i, int j) const { return lambda[size_t(i) * size + j]; }
  int8_t gamma_at(int i, int j) const { return gamma[size_t(i) * size + j]; }
};

PermSignPair perm_sign_pair(int n);

// DCT-VIII kernel derived from the same-size DST-VII kernel via reversal and
// sign alternation. Integer derivation is bit-exact against quantising the
// analytic DCT-VIII because rounding commutes with negation and permutation.
RealKernel dct8_from_dst7(const RealKernel& s7);
IntKernel dct8_from_dst7(const IntKernel& s7);

// Even/odd split of an N-point DCT-II kernel (N >= 8). Even output rows of the
// kernel form the N/2-point DCT-II; odd rows form a dense (N/2)x(N/2) block.
// recombine lists, per final output index, which even/odd partial sum it takes
// and with which sign.
struct ButterflyDecomposition {
  int size = 0;
  IntKernel even_part;            // N/2-point DCT-II kernel
  std::vector<int16_t> odd;       // (N/2)x(N/2), odd[r][c] = K[2r+1][c]
  struct Recombine {
    int even_index;
    int odd_index;
    int sign;  // +1 or -1
  };
  std::vector<Recombine> recombine;  // length N

  int16_t odd_at(int r, int c) const { return odd[size_t(r) * (size / 2) + c]; }
};

ButterflyDecomposition butterfly_split(const IntKernel& dct2);

// Rebuild the full kernel from a decomposition; bit-exact round trip.
IntKernel recompose(const ButterflyDecomposition& d);

// Quantised MTS kernel family: DCT-II 4..64 and DST-VII 4..32 as stored,
// DCT-VIII 4..32 derived, butterfly decompositions prebuilt for DCT-II >= 8.
class KernelSet {
public:
  KernelSet() = default;

  static KernelSet generate(int precision_bits = 8);
  static KernelSet from_kernels(std::vector<IntKernel> stored);

  const IntKernel& kernel(TrType type, int n) const;
  const ButterflyDecomposition& butterfly(int n) const;

  // Kernels that occupy storage (DCT-VIII is derived, never stored).
  std::vector<const IntKernel*> stored() const;

  bool empty() const { return dct2_.empty(); }
  int precision_bits() const { return precision_bits_; }

private:
  void derive();

  std::map<int, IntKernel> dct2_;
  std::map<int, IntKernel> dst7_;
  std::map<int, IntKernel> dct8_;
  std::map<int, ButterflyDecomposition> butterfly_;
  int precision_bits_ = 8;
};

}  // namespace itx
