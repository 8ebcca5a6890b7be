#include "itx/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace itx {

const char* to_string(TrType t)
{
  switch (t) {
  case TrType::DCT2: return "DCT2";
  case TrType::DST7: return "DST7";
  case TrType::DCT8: return "DCT8";
  }
  return "?";
}

const char* to_string(Standard s)
{
  switch (s) {
  case Standard::AVC: return "AVC";
  case Standard::HEVC: return "HEVC";
  case Standard::VVC: return "VVC";
  }
  return "?";
}

const char* to_string(Component c)
{
  switch (c) {
  case Component::Luma: return "Y";
  case Component::Cb: return "Cb";
  case Component::Cr: return "Cr";
  }
  return "?";
}

const char* to_string(KernelKind k)
{
  switch (k) {
  case KernelKind::DCT2: return "DCT2";
  case KernelKind::DST7: return "DST7";
  case KernelKind::DCT8: return "DCT8";
  case KernelKind::LFNST16: return "LFNST16";
  case KernelKind::LFNST48: return "LFNST48";
  }
  return "?";
}

int max_size(TrType t) { return t == TrType::DCT2 ? 64 : 32; }

static KernelKind kind_of(TrType t)
{
  switch (t) {
  case TrType::DCT2: return KernelKind::DCT2;
  case TrType::DST7: return KernelKind::DST7;
  case TrType::DCT8: return KernelKind::DCT8;
  }
  return KernelKind::DCT2;
}

double generate_basis(TrType type, int n, int i, int j)
{
  if (n < 1 || n > max_size(type) || !is_pow2(n))
    throw std::invalid_argument("unsupported size " + std::to_string(n) + " for " + to_string(type));
  if (i < 1 || i > n || j < 1 || j > n)
    throw std::invalid_argument("basis index out of range");

  const double pi = std::numbers::pi;
  switch (type) {
  case TrType::DCT2: {
    const double gain = (i == 1) ? std::sqrt(0.5) : 1.0;
    return gain * std::sqrt(2.0 / n) * std::cos(pi * (i - 1) * (2.0 * j - 1) / (2.0 * n));
  }
  case TrType::DST7:
    return std::sqrt(4.0 / (2.0 * n + 1)) * std::sin(pi * (2.0 * i - 1) * j / (2.0 * n + 1));
  case TrType::DCT8:
    return std::sqrt(4.0 / (2.0 * n + 1)) * std::cos(pi * (2.0 * i - 1) * (2.0 * j - 1) / (2.0 * (2.0 * n + 1)));
  }
  throw std::invalid_argument("bad transform type");
}

RealKernel real_kernel(TrType type, int n)
{
  RealKernel k;
  k.type = type;
  k.size = n;
  k.m.resize(size_t(n) * n);
  for (int i = 1; i <= n; i++)
    for (int j = 1; j <= n; j++)
      k.at(i - 1, j - 1) = generate_basis(type, n, i, j);
  return k;
}

IntKernel quantize_kernel(const RealKernel& k, int precision_bits, double scale_override)
{
  if (precision_bits < 2 || precision_bits > 16)
    throw std::invalid_argument("precision_bits out of range");

  const double scale = scale_override > 0.0 ? scale_override : 64.0 * std::sqrt(double(k.size));
  const long lo = -(1L << (precision_bits - 1));
  const long hi = (1L << (precision_bits - 1)) - 1;

  IntKernel q;
  q.kind           = kind_of(k.type);
  q.rows           = k.size;
  q.cols           = k.size;
  q.precision_bits = precision_bits;
  q.scale          = scale;
  q.m.resize(size_t(k.size) * k.size);
  for (size_t e = 0; e < q.m.size(); e++) {
    const long v = std::lround(std::abs(k.m[e]) * scale) * (k.m[e] < 0 ? -1 : 1);
    if (v < lo || v > hi)
      throw std::overflow_error("quantization overflow: entry " + std::to_string(v) + " exceeds " +
                                std::to_string(precision_bits) + " signed bits");
    q.m[e] = int16_t(v);
  }
  return q;
}

PermSignPair perm_sign_pair(int n)
{
  if (n < 1)
    throw std::invalid_argument("unsupported size for perm/sign pair");
  PermSignPair p;
  p.size = n;
  p.lambda.assign(size_t(n) * n, 0);
  p.gamma.assign(size_t(n) * n, 0);
  for (int i = 0; i < n; i++) {
    p.lambda[size_t(i) * n + (n - 1 - i)] = 1;
    p.gamma[size_t(i) * n + i]            = (i % 2 == 0) ? 1 : -1;
  }
  return p;
}

// C8[i][j] = (-1)^i * S7[i][n-1-j] (0-based); equivalently C8^T = L * S7^T * G.
RealKernel dct8_from_dst7(const RealKernel& s7)
{
  if (s7.type != TrType::DST7)
    throw std::invalid_argument("dct8_from_dst7 expects a DST7 kernel");
  const int n = s7.size;
  RealKernel c8;
  c8.type = TrType::DCT8;
  c8.size = n;
  c8.m.resize(size_t(n) * n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      c8.at(i, j) = (i % 2 ? -1.0 : 1.0) * s7.at(i, n - 1 - j);
  return c8;
}

IntKernel dct8_from_dst7(const IntKernel& s7)
{
  if (s7.kind != KernelKind::DST7 || s7.rows != s7.cols)
    throw std::invalid_argument("dct8_from_dst7 expects a square DST7 kernel");
  const int n = s7.rows;
  IntKernel c8 = s7;
  c8.kind      = KernelKind::DCT8;
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      c8.at(i, j) = int16_t((i % 2 ? -1 : 1) * s7.at(i, n - 1 - j));
  return c8;
}

ButterflyDecomposition butterfly_split(const IntKernel& dct2)
{
  if (dct2.kind != KernelKind::DCT2 || dct2.rows != dct2.cols)
    throw std::invalid_argument("butterfly_split expects a square DCT2 kernel");
  const int n = dct2.rows;
  if (n < 8 || !is_pow2(n))
    throw std::invalid_argument("no butterfly decomposition for size " + std::to_string(n));
  const int half = n / 2;

  ButterflyDecomposition d;
  d.size = n;

  // Even kernel rows restricted to the first half of the columns are exactly
  // the N/2-point kernel (the shared leading scale makes this hold for the
  // quantised integers, not just the real basis).
  d.even_part.kind           = KernelKind::DCT2;
  d.even_part.rows           = half;
  d.even_part.cols           = half;
  d.even_part.precision_bits = dct2.precision_bits;
  d.even_part.scale          = dct2.scale / std::numbers::sqrt2;
  d.even_part.m.resize(size_t(half) * half);
  for (int r = 0; r < half; r++)
    for (int c = 0; c < half; c++)
      d.even_part.at(r, c) = dct2.at(2 * r, c);

  d.odd.resize(size_t(half) * half);
  for (int r = 0; r < half; r++)
    for (int c = 0; c < half; c++)
      d.odd[size_t(r) * half + c] = dct2.at(2 * r + 1, c);

  d.recombine.resize(n);
  for (int c = 0; c < half; c++) {
    d.recombine[c]         = {c, c, +1};
    d.recombine[n - 1 - c] = {c, c, -1};
  }
  return d;
}

IntKernel recompose(const ButterflyDecomposition& d)
{
  const int n    = d.size;
  const int half = n / 2;
  IntKernel k;
  k.kind           = KernelKind::DCT2;
  k.rows           = n;
  k.cols           = n;
  k.precision_bits = d.even_part.precision_bits;
  k.scale          = d.even_part.scale * std::numbers::sqrt2;
  k.m.resize(size_t(n) * n);

  // Even kernel rows mirror, odd rows anti-mirror, so the left half of each
  // row plus the recombine signs rebuilds all N columns.
  for (int r = 0; r < half; r++) {
    for (int c = 0; c < half; c++) {
      k.at(2 * r, c)             = d.even_part.at(r, c);
      k.at(2 * r, n - 1 - c)     = d.even_part.at(r, c);
      k.at(2 * r + 1, c)         = d.odd_at(r, c);
      k.at(2 * r + 1, n - 1 - c) = int16_t(-d.odd_at(r, c));
    }
  }
  return k;
}

KernelSet KernelSet::generate(int precision_bits)
{
  KernelSet s;
  s.precision_bits_ = precision_bits;
  for (int n : kDct2Sizes)
    s.dct2_[n] = quantize_kernel(real_kernel(TrType::DCT2, n), precision_bits);
  for (int n : kDst7Sizes)
    s.dst7_[n] = quantize_kernel(real_kernel(TrType::DST7, n), precision_bits);
  s.derive();
  return s;
}

KernelSet KernelSet::from_kernels(std::vector<IntKernel> stored)
{
  KernelSet s;
  for (auto& k : stored) {
    if (k.rows != k.cols)
      throw std::invalid_argument("MTS kernel must be square");
    switch (k.kind) {
    case KernelKind::DCT2: s.dct2_[k.rows] = std::move(k); break;
    case KernelKind::DST7: s.dst7_[k.rows] = std::move(k); break;
    case KernelKind::DCT8: break;  // always derived, never taken from storage
    default: throw std::invalid_argument("not an MTS kernel");
    }
  }
  for (int n : kDct2Sizes)
    if (!s.dct2_.count(n))
      throw std::invalid_argument("kernel set is missing DCT2-" + std::to_string(n));
  for (int n : kDst7Sizes)
    if (!s.dst7_.count(n))
      throw std::invalid_argument("kernel set is missing DST7-" + std::to_string(n));
  s.precision_bits_ = s.dct2_.at(4).precision_bits;
  s.derive();
  return s;
}

void KernelSet::derive()
{
  for (auto& [n, k] : dst7_)
    dct8_[n] = dct8_from_dst7(k);
  for (int n : kDct2Sizes)
    if (n >= 8)
      butterfly_[n] = butterfly_split(dct2_.at(n));
}

const IntKernel& KernelSet::kernel(TrType type, int n) const
{
  const std::map<int, IntKernel>* m = nullptr;
  switch (type) {
  case TrType::DCT2: m = &dct2_; break;
  case TrType::DST7: m = &dst7_; break;
  case TrType::DCT8: m = &dct8_; break;
  }
  auto it = m->find(n);
  if (it == m->end())
    throw std::invalid_argument(std::string("no ") + to_string(type) + " kernel of size " + std::to_string(n));
  return it->second;
}

const ButterflyDecomposition& KernelSet::butterfly(int n) const
{
  auto it = butterfly_.find(n);
  if (it == butterfly_.end())
    throw std::invalid_argument("no butterfly decomposition for size " + std::to_string(n));
  return it->second;
}

std::vector<const IntKernel*> KernelSet::stored() const
{
  std::vector<const IntKernel*> v;
  for (auto& [n, k] : dct2_)
    v.push_back(&k);
  for (auto& [n, k] : dst7_)
    v.push_back(&k);
  return v;
}

}  // namespace itx
