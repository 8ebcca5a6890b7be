#include "itx/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace itx {

const char* to_string(Dir d) { return d == Dir::Horizontal ? "hor" : "ver"; }

StageConfig StageConfig::for_bit_depth(int bd)
{
  StageConfig c;
  c.bit_depth = bd;
  c.s2        = 20 - bd;
  c.validate();
  return c;
}

void StageConfig::validate() const
{
  if (bit_depth < 8 || bit_depth > 16)
    throw std::invalid_argument("bit_depth out of range [8,16]");
  if (s1 < 0 || s1 > 20 || s2 < 0 || s2 > 20 || lfnst_shift < 0 || lfnst_shift > 20)
    throw std::invalid_argument("stage shift out of range [0,20]");
  if (mid_bits < 2 || mid_bits > 32 || out_bits < 2 || out_bits > 32)
    throw std::invalid_argument("stage sample width out of range");
}

int effective_size(int n, TrType type)
{
  return std::min(n, type == TrType::DCT2 ? 32 : 16);
}

static void check_spec(const TransformSpec& s)
{
  if (s.size < 4 || s.size > max_size(s.type) || !is_pow2(s.size))
    throw std::invalid_argument(std::string("unsupported ") + to_string(s.type) + " size " + std::to_string(s.size));
}

// Recursive even/odd evaluation of the inverse DCT-II. `eff` is the number of
// leading inputs that may be non-zero; it stays even (>= 2) all the way down.
static void idct2_recurse(std::span<const coeff_t> in, int n, int eff, const KernelSet& kernels, acc_t* out,
                          long& mults)
{
  if (n == 4) {
    const IntKernel& k4 = kernels.kernel(TrType::DCT2, 4);
    const int rows      = std::min(eff, 4);
    for (int j = 0; j < 4; j++) {
      acc_t sum = 0;
      for (int i = 0; i < rows; i++)
        sum += acc_t(k4.at(i, j)) * in[i];
      out[j] = sum;
    }
    mults += long(rows) * 4;
    return;
  }

  const ButterflyDecomposition& d = kernels.butterfly(n);
  const int half                  = n / 2;
  const int eo                    = eff / 2;

  acc_t odd[32];
  for (int j = 0; j < half; j++) {
    acc_t sum = 0;
    for (int m = 0; m < eo; m++)
      sum += acc_t(d.odd_at(m, j)) * in[2 * m + 1];
    odd[j] = sum;
  }
  mults += long(eo) * half;

  coeff_t ev[32];
  for (int m = 0; m < half; m++)
    ev[m] = in[2 * m];
  acc_t even[32];
  idct2_recurse({ev, size_t(half)}, half, eo, kernels, even, mults);

  for (int j = 0; j < n; j++) {
    const auto& r = d.recombine[j];
    out[j]        = even[r.even_index] + acc_t(r.sign) * odd[r.odd_index];
  }
}

LineResult inverse_mts_1d(std::span<const coeff_t> in, const TransformSpec& spec, const KernelSet& kernels, int shift,
                          int clamp_to_bits)
{
  check_spec(spec);
  const int n = spec.size;
  if (int(in.size()) != n)
    throw std::invalid_argument("inverse_mts_1d: input length does not match spec size");
  const int eff = effective_size(n, spec.type);

  LineResult r;
  acc_t wide[64];

  if (spec.type == TrType::DCT2) {
    idct2_recurse(in, n, eff, kernels, wide, r.mults);
  } else {
    // DST-VII evaluated directly; DCT-VIII rides the same kernel with inputs
    // sign-alternated and outputs reversed, costing no extra multiplications.
    const IntKernel& s7 = kernels.kernel(TrType::DST7, n);
    const bool flip     = spec.type == TrType::DCT8;
    coeff_t v[32];
    for (int i = 0; i < eff; i++)
      v[i] = (flip && (i & 1)) ? -in[i] : in[i];
    for (int j = 0; j < n; j++) {
      acc_t sum = 0;
      for (int i = 0; i < eff; i++)
        sum += acc_t(s7.at(i, j)) * v[i];
      wide[flip ? n - 1 - j : j] = sum;
    }
    r.mults = long(eff) * n;
  }

  r.out.resize(n);
  for (int j = 0; j < n; j++)
    r.out[j] = clamp_bits(round_shift(wide[j], shift), clamp_to_bits);
  return r;
}

long mult_count_1d(const TransformSpec& spec)
{
  check_spec(spec);
  if (spec.type != TrType::DCT2)
    return long(effective_size(spec.size, spec.type)) * spec.size;

  long total = 0;
  int n      = spec.size;
  int eff    = effective_size(n, TrType::DCT2);
  while (n > 4) {
    total += long(eff / 2) * (n / 2);
    n /= 2;
    eff /= 2;
  }
  return total + long(std::min(eff, 4)) * 4;
}

CoeffBlock inverse_mts_2d(const CoeffBlock& in, const TransformSpec& hor, const TransformSpec& ver,
                          const KernelSet& kernels, const StageConfig& cfg)
{
  cfg.validate();
  check_spec(hor);
  check_spec(ver);
  if (hor.dir != Dir::Horizontal || ver.dir != Dir::Vertical)
    throw std::invalid_argument("inverse_mts_2d: pass directions are swapped");
  if (hor.size != in.width || ver.size != in.height)
    throw std::invalid_argument("inverse_mts_2d: spec sizes do not match block");

  const TransformSpec& first  = cfg.vertical_first ? ver : hor;
  const TransformSpec& second = cfg.vertical_first ? hor : ver;

  auto run_pass = [&](const CoeffBlock& src, const TransformSpec& spec, int shift, int bits) {
    CoeffBlock dst(src.width, src.height, bits);
    std::vector<coeff_t> line;
    if (spec.dir == Dir::Vertical) {
      line.resize(src.height);
      for (int x = 0; x < src.width; x++) {
        for (int y = 0; y < src.height; y++)
          line[y] = src.at(x, y);
        auto res = inverse_mts_1d(line, spec, kernels, shift, bits);
        for (int y = 0; y < src.height; y++)
          dst.at(x, y) = res.out[y];
      }
    } else {
      line.resize(src.width);
      for (int y = 0; y < src.height; y++) {
        for (int x = 0; x < src.width; x++)
          line[x] = src.at(x, y);
        auto res = inverse_mts_1d(line, spec, kernels, shift, bits);
        for (int x = 0; x < src.width; x++)
          dst.at(x, y) = res.out[x];
      }
    }
    return dst;
  };

  CoeffBlock mid = run_pass(in, first, cfg.s1, cfg.mid_bits);
  return run_pass(mid, second, cfg.s2, cfg.out_bits);
}

}  // namespace itx
