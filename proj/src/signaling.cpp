#include "itx/signaling.hpp"

#include <algorithm>
#include <stdexcept>

namespace itx {

std::pair<TrType, TrType> mts_pair(int tu_mts_idx)
{
  switch (tu_mts_idx) {
  case 0: return {TrType::DCT2, TrType::DCT2};
  case 1: return {TrType::DST7, TrType::DST7};
  case 2: return {TrType::DCT8, TrType::DST7};
  case 3: return {TrType::DST7, TrType::DCT8};
  case 4: return {TrType::DCT8, TrType::DCT8};
  default: throw std::invalid_argument("tu_mts_idx out of range [0,4]");
  }
}

std::pair<TrType, TrType> resolve_types(const BlockDescriptor& d)
{
  if (d.standard == Standard::HEVC) {
    if (d.width == 4 && d.height == 4 && d.component == Component::Luma && d.is_intra)
      return {TrType::DST7, TrType::DST7};
    return {TrType::DCT2, TrType::DCT2};
  }
  return mts_pair(d.tu_mts_idx);
}

static bool legal_size(int v, int lo, int hi)
{
  return v >= lo && v <= hi && is_pow2(v);
}

std::vector<Violation> validate(const BlockDescriptor& d)
{
  std::vector<Violation> v;
  auto add = [&](const char* code, std::string msg) { v.push_back({code, std::move(msg)}); };

  if (d.bit_depth < 8 || d.bit_depth > 16)
    add("bit-depth-range", "bit_depth " + std::to_string(d.bit_depth) + " outside [8,16]");

  if (d.standard == Standard::AVC) {
    add("avc-interface-only", "AVC blocks are carried on the interface but are not processed by this model");
    return v;
  }

  if (d.tu_mts_idx == -1)
    add("implicit-mts-unsupported", "implicit transform selection is not modelled; signal tu_mts_idx explicitly");
  else if (d.tu_mts_idx < 0 || d.tu_mts_idx > 4)
    add("mts-range", "tu_mts_idx " + std::to_string(d.tu_mts_idx) + " outside [0,4]");

  if (d.lfnst_idx < 0 || d.lfnst_idx > 2)
    add("lfnst-idx-range", "lfnst_idx " + std::to_string(d.lfnst_idx) + " outside [0,2]");
  if (d.lfnst_idx > 0) {
    if (d.ipm < -14 || d.ipm > 83)
      add("ipm-range", "intra prediction mode " + std::to_string(d.ipm) + " outside [-14,83]");
    if (d.last_sig_pos < 0)
      add("last-sig-pos-range", "last_sig_pos must be non-negative");
  }

  if (d.standard == Standard::HEVC) {
    if (d.width != d.height || !legal_size(d.width, 4, 32))
      add("hevc-size", "HEVC transform blocks are square with side in {4,8,16,32}, got " + std::to_string(d.width) +
                           "x" + std::to_string(d.height));
    if (d.tu_mts_idx > 0)
      add("hevc-mts-explicit", "HEVC has no explicit transform selection; tu_mts_idx must be 0");
    if (d.lfnst_idx > 0)
      add("hevc-lfnst", "HEVC has no secondary transform; lfnst_idx must be 0");
    return v;
  }

  // VVC
  if (!legal_size(d.width, 4, 64))
    add("size-invalid", "width " + std::to_string(d.width) + " not in {4,8,16,32,64}");
  if (!legal_size(d.height, 4, 64))
    add("size-invalid", "height " + std::to_string(d.height) + " not in {4,8,16,32,64}");

  if (d.tu_mts_idx > 0 && legal_size(d.width, 4, 64) && legal_size(d.height, 4, 64)) {
    if (d.component != Component::Luma)
      add("mts-chroma", "chroma blocks always use DCT-II; tu_mts_idx must be 0");
    else if (std::max(d.width, d.height) > 32)
      add("mts-size", "tu_mts_idx > 0 requires max(width,height) <= 32");
  }
  return v;
}

}  // namespace itx
