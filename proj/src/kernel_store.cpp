#include "itx/kernel_store.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

namespace itx {

namespace fs = std::filesystem;

std::string kernel_file_name(KernelKind kind, int size_or_set, int kernel_idx)
{
  switch (kind) {
  case KernelKind::DCT2: return "dct2_" + std::to_string(size_or_set) + kKernelFileExt;
  case KernelKind::DST7: return "dst7_" + std::to_string(size_or_set) + kKernelFileExt;
  case KernelKind::DCT8: return "dct8_" + std::to_string(size_or_set) + kKernelFileExt;
  case KernelKind::LFNST16:
    return "lfnst16_s" + std::to_string(size_or_set) + "_k" + std::to_string(kernel_idx + 1) + kKernelFileExt;
  case KernelKind::LFNST48:
    return "lfnst48_s" + std::to_string(size_or_set) + "_k" + std::to_string(kernel_idx + 1) + kKernelFileExt;
  }
  throw std::invalid_argument("bad kernel kind");
}

static void put_u16(std::string& buf, uint16_t v)
{
  buf.push_back(char(v & 0xff));
  buf.push_back(char(v >> 8));
}

static std::string serialize_kernel(const IntKernel& k)
{
  std::string buf = "ITXK";
  buf.push_back(char(kKernelFileVersion));
  buf.push_back(char(uint8_t(k.kind)));
  put_u16(buf, uint16_t(k.rows));
  put_u16(buf, uint16_t(k.cols));
  buf.push_back(char(uint8_t(k.precision_bits)));
  for (int16_t e : k.m)
    put_u16(buf, uint16_t(e));
  return buf;
}

void write_kernel_file(const fs::path& file, const IntKernel& k)
{
  std::ofstream os(file, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::runtime_error("cannot open " + file.string() + " for writing");
  const std::string buf = serialize_kernel(k);
  os.write(buf.data(), std::streamsize(buf.size()));
  os.flush();
  if (!os)
    throw std::runtime_error("short write to " + file.string());
}

IntKernel read_kernel_file(const fs::path& file)
{
  std::ifstream is(file, std::ios::binary);
  if (!is)
    throw std::runtime_error("cannot open kernel file " + file.string());
  std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

  const auto fail = [&](const std::string& why) -> std::runtime_error {
    return std::runtime_error(file.string() + ": " + why);
  };
  if (buf.size() < 11 || buf.compare(0, 4, "ITXK") != 0)
    throw fail("not a kernel file (bad magic)");
  if (uint8_t(buf[4]) != kKernelFileVersion)
    throw fail("unsupported kernel file version " + std::to_string(uint8_t(buf[4])));

  IntKernel k;
  const uint8_t kind = uint8_t(buf[5]);
  if (kind > uint8_t(KernelKind::LFNST48))
    throw fail("unknown kernel kind " + std::to_string(kind));
  k.kind           = KernelKind(kind);
  k.rows           = uint8_t(buf[6]) | (uint8_t(buf[7]) << 8);
  k.cols           = uint8_t(buf[8]) | (uint8_t(buf[9]) << 8);
  k.precision_bits = uint8_t(buf[10]);

  if (k.rows < 1 || k.rows > 64 || k.cols < 1 || k.cols > 64)
    throw fail("kernel dimensions out of range");
  const size_t expect = 11 + size_t(k.rows) * k.cols * 2;
  if (buf.size() != expect)
    throw fail("payload size mismatch (file " + std::to_string(buf.size()) + " bytes, header implies " +
               std::to_string(expect) + ")");

  k.m.resize(size_t(k.rows) * k.cols);
  for (size_t e = 0; e < k.m.size(); e++)
    k.m[e] = int16_t(uint16_t(uint8_t(buf[11 + 2 * e]) | (uint8_t(buf[12 + 2 * e]) << 8)));

  switch (k.kind) {
  case KernelKind::LFNST16:
  case KernelKind::LFNST48: k.scale = 128.0; break;
  default: k.scale = 64.0 * std::sqrt(double(k.rows)); break;
  }
  return k;
}

// Raw engine output mapped to [-0.5, 0.5); keeps generation independent of
// library distribution implementations.
static double next_unit(std::mt19937_64& rng)
{
  return double(rng() >> 11) * 0x1.0p-53 - 0.5;
}

std::vector<double> synthesize_lfnst_rows(int set_idx, int kernel_idx, int out_size)
{
  if (set_idx < 0 || set_idx > 3 || kernel_idx < 0 || kernel_idx > 1 || (out_size != 16 && out_size != 48))
    throw std::invalid_argument("bad secondary kernel coordinates");

  uint64_t seed = 0x17c5a4e9u ^ (uint64_t(set_idx) << 8) ^ (uint64_t(kernel_idx) << 16) ^ (uint64_t(out_size) << 24);
  for (int attempt = 0; attempt < 64; attempt++, seed += 0x9e3779b97f4a7c15ull) {
    std::mt19937_64 rng(seed);
    std::vector<double> m(size_t(16) * out_size);
    for (double& e : m)
      e = next_unit(rng);

    // Gram-Schmidt over the 16 rows.
    bool ok = true;
    for (int r = 0; r < 16 && ok; r++) {
      double* row = &m[size_t(r) * out_size];
      for (int p = 0; p < r; p++) {
        const double* prev = &m[size_t(p) * out_size];
        double dot         = 0.0;
        for (int c = 0; c < out_size; c++)
          dot += row[c] * prev[c];
        for (int c = 0; c < out_size; c++)
          row[c] -= dot * prev[c];
      }
      double norm = 0.0;
      for (int c = 0; c < out_size; c++)
        norm += row[c] * row[c];
      norm = std::sqrt(norm);
      if (norm < 1e-6) {
        ok = false;  // rank deficiency; regenerate with the next seed
        break;
      }
      for (int c = 0; c < out_size; c++)
        row[c] /= norm;
    }
    if (!ok)
      continue;

    // Entries must survive 8-bit quantisation at scale 128.
    for (double e : m)
      if (std::lround(std::abs(e) * 128.0) > 127)
        ok = false;
    if (ok)
      return m;
  }
  throw std::runtime_error("secondary kernel synthesis failed to converge");
}

IntKernel synthesize_lfnst_kernel(int set_idx, int kernel_idx, int out_size)
{
  const auto rows = synthesize_lfnst_rows(set_idx, kernel_idx, out_size);
  IntKernel k;
  k.kind           = out_size == 16 ? KernelKind::LFNST16 : KernelKind::LFNST48;
  k.rows           = 16;
  k.cols           = out_size;
  k.precision_bits = 8;
  k.scale          = 128.0;
  k.m.resize(rows.size());
  for (size_t e = 0; e < rows.size(); e++)
    k.m[e] = int16_t(std::lround(std::abs(rows[e]) * 128.0) * (rows[e] < 0 ? -1 : 1));
  return k;
}

KernelStore KernelStore::generate(int precision_bits)
{
  KernelStore s;
  s.mts = KernelSet::generate(precision_bits);
  for (int set = 0; set < 4; set++)
    for (int k = 0; k < 2; k++) {
      s.lfnst.k16[set][k] = synthesize_lfnst_kernel(set, k, 16);
      s.lfnst.k48[set][k] = synthesize_lfnst_kernel(set, k, 48);
    }
  s.lfnst.loaded = true;
  return s;
}

KernelStore KernelStore::load(const fs::path& dir)
{
  if (!fs::is_directory(dir))
    throw std::runtime_error("kernel directory " + dir.string() + " does not exist");

  auto read_as = [&](KernelKind kind, int size_or_set, int kernel_idx, int rows, int cols) {
    const fs::path file = dir / kernel_file_name(kind, size_or_set, kernel_idx);
    IntKernel k         = read_kernel_file(file);
    if (k.kind != kind || k.rows != rows || k.cols != cols)
      throw std::runtime_error(file.string() + ": header does not match expected " + std::string(to_string(kind)) +
                               " " + std::to_string(rows) + "x" + std::to_string(cols));
    return k;
  };

  KernelStore s;
  std::vector<IntKernel> mts;
  for (int n : kDct2Sizes)
    mts.push_back(read_as(KernelKind::DCT2, n, 0, n, n));
  for (int n : kDst7Sizes)
    mts.push_back(read_as(KernelKind::DST7, n, 0, n, n));
  s.mts = KernelSet::from_kernels(std::move(mts));

  for (int set = 0; set < 4; set++)
    for (int k = 0; k < 2; k++) {
      s.lfnst.k16[set][k] = read_as(KernelKind::LFNST16, set, k, 16, 16);
      s.lfnst.k48[set][k] = read_as(KernelKind::LFNST48, set, k, 16, 48);
    }
  s.lfnst.loaded = true;
  return s;
}

void KernelStore::save(const fs::path& dir) const
{
  std::error_code ec;
  fs::create_directories(dir, ec);

  std::vector<std::pair<std::string, const IntKernel*>> files;
  for (const IntKernel* k : mts.stored())
    files.emplace_back(kernel_file_name(k->kind, k->rows), k);
  for (int set = 0; set < 4; set++)
    for (int k = 0; k < 2; k++) {
      files.emplace_back(kernel_file_name(KernelKind::LFNST16, set, k), &lfnst.k16[set][k]);
      files.emplace_back(kernel_file_name(KernelKind::LFNST48, set, k), &lfnst.k48[set][k]);
    }

  // Stage under temporary names, then rename; on any failure remove
  // everything this call created so no partial set is left behind.
  std::vector<fs::path> created;
  try {
    for (auto& [name, k] : files) {
      const fs::path tmp = dir / (name + ".tmp");
      write_kernel_file(tmp, *k);
      created.push_back(tmp);
    }
    for (size_t i = 0; i < files.size(); i++) {
      const fs::path final = dir / files[i].first;
      fs::rename(created[i], final);
      created[i] = final;
    }
  } catch (...) {
    for (const fs::path& p : created)
      fs::remove(p, ec);
    throw;
  }
}

}  // namespace itx
