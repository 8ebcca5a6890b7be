#include "itx/oracle.hpp"

#include <stdexcept>

namespace itx {

std::vector<coeff_t> naive_inverse_1d(std::span<const coeff_t> in, const IntKernel& k, int shift, int clamp_to_bits)
{
  const int n = k.size();
  if (int(in.size()) != n)
    throw std::invalid_argument("naive_inverse_1d: input length does not match kernel size");

  std::vector<coeff_t> out(n);
  for (int j = 0; j < n; j++) {
    acc_t sum = 0;
    for (int i = 0; i < n; i++)
      sum += acc_t(k.at(i, j)) * in[i];
    out[j] = clamp_bits(round_shift(sum, shift), clamp_to_bits);
  }
  return out;
}

CoeffBlock naive_inverse_2d(const CoeffBlock& in, const IntKernel& ver, const IntKernel& hor, int s1, int s2,
                            int mid_bits, int out_bits)
{
  if (ver.size() != in.height || hor.size() != in.width)
    throw std::invalid_argument("naive_inverse_2d: kernel sizes do not match block");

  CoeffBlock mid(in.width, in.height, mid_bits);
  std::vector<coeff_t> line;
  for (int x = 0; x < in.width; x++) {
    line.resize(in.height);
    for (int y = 0; y < in.height; y++)
      line[y] = in.at(x, y);
    auto col = naive_inverse_1d(line, ver, s1, mid_bits);
    for (int y = 0; y < in.height; y++)
      mid.at(x, y) = col[y];
  }

  CoeffBlock out(in.width, in.height, out_bits);
  for (int y = 0; y < in.height; y++) {
    line.assign(mid.samples.begin() + size_t(y) * in.width, mid.samples.begin() + size_t(y + 1) * in.width);
    auto row = naive_inverse_1d(line, hor, s2, out_bits);
    for (int x = 0; x < in.width; x++)
      out.at(x, y) = row[x];
  }
  return out;
}

std::vector<coeff_t> naive_inverse_lfnst(std::span<const coeff_t> in, const IntKernel& k, int shift,
                                         int clamp_to_bits)
{
  if (int(in.size()) > k.rows)
    throw std::invalid_argument("naive_inverse_lfnst: more inputs than kernel rows");

  std::vector<coeff_t> out(k.cols);
  for (int j = 0; j < k.cols; j++) {
    acc_t sum = 0;
    for (int i = 0; i < int(in.size()); i++)
      sum += acc_t(k.at(i, j)) * in[i];
    out[j] = clamp_bits(round_shift(sum, shift), clamp_to_bits);
  }
  return out;
}

static std::vector<double> pass_real(const std::vector<double>& in, int width, int height, const RealKernel& ver,
                                     const RealKernel& hor, bool forward)
{
  if (ver.size != height || hor.size != width)
    throw std::invalid_argument("real 2-D pass: kernel sizes do not match block");

  // forward: Y = V * X * H^t; inverse: X = V^t * Y * H
  std::vector<double> mid(in.size(), 0.0), out(in.size(), 0.0);
  for (int x = 0; x < width; x++)
    for (int y = 0; y < height; y++) {
      double s = 0.0;
      for (int i = 0; i < height; i++)
        s += (forward ? ver.at(y, i) : ver.at(i, y)) * in[size_t(i) * width + x];
      mid[size_t(y) * width + x] = s;
    }
  for (int y = 0; y < height; y++)
    for (int x = 0; x < width; x++) {
      double s = 0.0;
      for (int i = 0; i < width; i++)
        s += (forward ? hor.at(x, i) : hor.at(i, x)) * mid[size_t(y) * width + i];
      out[size_t(y) * width + x] = s;
    }
  return out;
}

std::vector<double> naive_forward_2d_real(const std::vector<double>& in, int width, int height, const RealKernel& ver,
                                          const RealKernel& hor)
{
  return pass_real(in, width, height, ver, hor, true);
}

std::vector<double> naive_inverse_2d_real(const std::vector<double>& in, int width, int height, const RealKernel& ver,
                                          const RealKernel& hor)
{
  return pass_real(in, width, height, ver, hor, false);
}

std::pair<long, long> count_naive_ops(int n)
{
  return {long(n) * n, long(n) * (n - 1)};
}

}  // namespace itx
