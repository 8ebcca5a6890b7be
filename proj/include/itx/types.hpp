#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace itx {

using coeff_t = int32_t;   // one transform coefficient / residual sample
using acc_t   = int64_t;   // dot-product accumulator

enum class TrType : uint8_t { DCT2 = 0, DST7 = 1, DCT8 = 2 };

enum class Standard : uint8_t { AVC = 0, HEVC = 1, VVC = 2 };

enum class Component : uint8_t { Luma = 0, Cb = 1, Cr = 2 };

const char* to_string(TrType t);
const char* to_string(Standard s);
const char* to_string(Component c);

// Rounding right shift: (v + 2^(s-1)) >> s, arithmetic. s == 0 passes v through.
constexpr acc_t round_shift(acc_t v, int s)
{
  assert(s >= 0 && s < 63);
  if (s == 0)
    return v;
  return (v + (acc_t(1) << (s - 1))) >> s;
}

// Saturate v to a signed two's-complement range of the given width.
constexpr coeff_t clamp_bits(acc_t v, int bits)
{
  assert(bits >= 2 && bits <= 32);
  const acc_t lo = -(acc_t(1) << (bits - 1));
  const acc_t hi = (acc_t(1) << (bits - 1)) - 1;
  return coeff_t(v < lo ? lo : (v > hi ? hi : v));
}

inline constexpr int kIntermediateBits = 18;  // sample width between the two 1-D passes
inline constexpr int kOutputBits       = 11;  // residual sample width

// Exact sample-per-cycle ratio (kept exact so rate checks need no tolerance).
struct Rational {
  int num = 0;
  int den = 1;

  constexpr Rational() = default;
  constexpr Rational(int n, int d) : num(n), den(d)
  {
    assert(d != 0);
    const int g = std::gcd(num < 0 ? -num : num, den < 0 ? -den : den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
  }

  constexpr bool operator==(const Rational&) const = default;
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
  constexpr double value() const { return double(num) / double(den); }
};

// Rectangular sample block, row-major. bits records the nominal sample width
// (18 for dequantised coefficients and intermediates, 11 for residual output).
struct CoeffBlock {
  int width  = 0;
  int height = 0;
  int bits   = kIntermediateBits;
  std::vector<coeff_t> samples;

  CoeffBlock() = default;
  CoeffBlock(int w, int h, int b = kIntermediateBits) : width(w), height(h), bits(b), samples(size_t(w) * h, 0)
  {
    assert(w > 0 && h > 0);
  }

  coeff_t& at(int x, int y)
  {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return samples[size_t(y) * width + x];
  }
  coeff_t at(int x, int y) const
  {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return samples[size_t(y) * width + x];
  }
  bool operator==(const CoeffBlock& o) const
  {
    return width == o.width && height == o.height && samples == o.samples;
  }
};

inline bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace itx
