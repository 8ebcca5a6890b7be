#pragma once

#include <span>
#include <utility>

#include "itx/kernels.hpp"
#include "itx/types.hpp"

namespace itx {

// Brute-force reference path: full O(N^2) matrix products, no coefficient
// zeroing, no butterfly. The optimised engine must match these bit-exactly.

// out[j] = clamp(round_shift(sum_i K[i][j] * in[i])). in.size() == K.size().
std::vector<coeff_t> naive_inverse_1d(std::span<const coeff_t> in, const IntKernel& k, int shift, int clamp_to_bits);

// Column pass with ver (shift s1, 18-bit clamp), then row pass with hor
// (shift s2, 11-bit clamp). ver.size() == height, hor.size() == width.
CoeffBlock naive_inverse_2d(const CoeffBlock& in, const IntKernel& ver, const IntKernel& hor, int s1, int s2,
                            int mid_bits = kIntermediateBits, int out_bits = kOutputBits);

// Secondary-transform inverse: out = T^t * in for a forward kernel T of shape
// 16 x out_size. in.size() <= 16; missing entries are zero.
std::vector<coeff_t> naive_inverse_lfnst(std::span<const coeff_t> in, const IntKernel& k, int shift,
                                         int clamp_to_bits);

// Real-valued forward / inverse pair for round-trip checks (no quantisation).
std::vector<double> naive_forward_2d_real(const std::vector<double>& in, int width, int height, const RealKernel& ver,
                                          const RealKernel& hor);
std::vector<double> naive_inverse_2d_real(const std::vector<double>& in, int width, int height, const RealKernel& ver,
                                          const RealKernel& hor);

// {multiplications, additions} of one dense N-point matrix-vector product.
std::pair<long, long> count_naive_ops(int n);

}  // namespace itx
