#include "itx/lfnst.hpp"

#include <algorithm>
#include <stdexcept>

namespace itx {

int lfnst_set_index(int ipm)
{
  if (ipm < -14 || ipm > 83)
    throw std::invalid_argument("intra prediction mode " + std::to_string(ipm) + " outside [-14,83]");
  if (ipm < 0)
    return 1;  // wide-angle modes
  if (ipm <= 1)
    return 0;  // planar / DC
  if (ipm <= 12)
    return 1;
  if (ipm <= 23)
    return 2;
  if (ipm <= 44)
    return 3;
  if (ipm <= 55)
    return 2;
  if (ipm <= 80)
    return 1;
  return 0;  // cross-component modes 81..83
}

LfnstShape lfnst_shape(int width, int height)
{
  if (width < 4 || height < 4)
    throw std::invalid_argument("secondary transform requires both sides >= 4");
  const int m = std::min(width, height);
  if (width == 4 && height == 4)
    return {8, 16, {1, 1}, {2, 1}};
  if (width == 8 && height == 8)
    return {8, 48, {1, 3}, {2, 1}};
  if (m == 4)
    return {16, 16, {2, 1}, {2, 1}};
  return {16, 48, {2, 3}, {2, 1}};  // min side 8 with a longer side, or min side >= 16
}

const std::array<ScanPos, 16>& diag_scan_4x4()
{
  static const std::array<ScanPos, 16> scan = [] {
    std::array<ScanPos, 16> s{};
    int k = 0;
    for (int d = 0; d <= 6; d++)
      for (int x = std::max(0, d - 3); x <= std::min(3, d); x++)
        s[k++] = {x, d - x};
    return s;
  }();
  return scan;
}

bool lfnst_eligible(const BlockDescriptor& d)
{
  if (d.standard != Standard::VVC || d.lfnst_idx <= 0 || !d.is_intra)
    return false;
  if (std::min(d.width, d.height) < 4)
    return false;
  auto [hor, ver] = resolve_types(d);
  if (hor != TrType::DCT2 || ver != TrType::DCT2)
    return false;
  const bool small = (d.width == 4 && d.height == 4) || (d.width == 8 && d.height == 8);
  return d.last_sig_pos < (small ? 8 : 16);
}

std::vector<coeff_t> scan_extract(const CoeffBlock& block, int in_size)
{
  if (block.width < 4 || block.height < 4)
    throw std::invalid_argument("scan_extract: block smaller than the 4x4 scan region");
  if (in_size < 1 || in_size > 16)
    throw std::invalid_argument("scan_extract: in_size outside [1,16]");

  const auto& scan = diag_scan_4x4();
  std::vector<coeff_t> v(in_size);
  for (int k = 0; k < in_size; k++)
    v[k] = block.at(scan[k].x, scan[k].y);
  return v;
}

void place_output(std::span<const coeff_t> out, int out_size, CoeffBlock& block)
{
  if (out_size != 16 && out_size != 48)
    throw std::invalid_argument("place_output: out_size must be 16 or 48");
  if (int(out.size()) != out_size)
    throw std::invalid_argument("place_output: vector length does not match out_size");
  const int need = out_size == 48 ? 8 : 4;
  if (block.width < need || block.height < need)
    throw std::invalid_argument("place_output: block smaller than the target region");

  std::fill(block.samples.begin(), block.samples.end(), 0);
  const auto& scan = diag_scan_4x4();
  // sub-block origins: top-left, then right of it and below it for 48 outputs
  static constexpr ScanPos origins[3] = {{0, 0}, {4, 0}, {0, 4}};
  for (int k = 0; k < out_size; k++) {
    const auto& o = origins[k / 16];
    const auto& p = scan[k % 16];
    block.at(o.x + p.x, o.y + p.y) = out[k];
  }
}

const IntKernel& LfnstKernelSet::kernel(int set_idx, int kernel_idx, int out_size) const
{
  if (!loaded)
    throw std::invalid_argument("secondary-transform kernels not loaded");
  if (set_idx < 0 || set_idx > 3 || kernel_idx < 0 || kernel_idx > 1)
    throw std::invalid_argument("secondary-transform kernel index out of range");
  if (out_size != 16 && out_size != 48)
    throw std::invalid_argument("secondary-transform out_size must be 16 or 48");
  return out_size == 16 ? k16[set_idx][kernel_idx] : k48[set_idx][kernel_idx];
}

CoeffBlock inverse_lfnst(const BlockDescriptor& d, const CoeffBlock& in, const LfnstKernelSet& kernels,
                         const StageConfig& cfg)
{
  if (!lfnst_eligible(d))
    return in;

  const LfnstShape shape = lfnst_shape(d.width, d.height);
  const IntKernel& t     = kernels.kernel(lfnst_set_index(d.ipm), d.lfnst_idx - 1, shape.out_size);
  const auto v           = scan_extract(in, shape.in_size);

  // out = T^t * v, reading only the first in_size basis rows
  std::vector<coeff_t> out(shape.out_size);
  for (int j = 0; j < shape.out_size; j++) {
    acc_t sum = 0;
    for (int i = 0; i < shape.in_size; i++)
      sum += acc_t(t.at(i, j)) * v[i];
    out[j] = clamp_bits(round_shift(sum, cfg.lfnst_shift), cfg.mid_bits);
  }

  CoeffBlock result(in.width, in.height, in.bits);
  place_output(out, shape.out_size, result);
  return result;
}

}  // namespace itx
