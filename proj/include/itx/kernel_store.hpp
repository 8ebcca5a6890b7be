#pragma once

#include <filesystem>

#include "itx/kernels.hpp"
#include "itx/lfnst.hpp"

namespace itx {

// Binary kernel file, little-endian:
//   magic 'I','T','X','K' | version u8 | kind u8 | rows u16 | cols u16 |
//   precision_bits u8 | rows*cols entries as int16
inline constexpr uint8_t kKernelFileVersion = 1;
inline constexpr const char* kKernelFileExt = ".itxk";

IntKernel read_kernel_file(const std::filesystem::path& file);
void write_kernel_file(const std::filesystem::path& file, const IntKernel& k);

std::string kernel_file_name(KernelKind kind, int size_or_set, int kernel_idx = 0);

// Deterministic stand-in kernels for the secondary stage: 16 orthonormal
// rows of dimension out_size, seeded per (set, kernel, shape). Returned
// row-major as doubles; quantised with scale 2^7 into 8-bit entries.
std::vector<double> synthesize_lfnst_rows(int set_idx, int kernel_idx, int out_size);
IntKernel synthesize_lfnst_kernel(int set_idx, int kernel_idx, int out_size);

// All kernels the model needs: the MTS family plus the 16 secondary kernels.
struct KernelStore {
  KernelSet mts;
  LfnstKernelSet lfnst;

  static KernelStore generate(int precision_bits = 8);

  // Reads the full expected file set from dir; throws std::runtime_error
  // naming the first missing or malformed file.
  static KernelStore load(const std::filesystem::path& dir);

  // Writes the stored kernels (9 MTS + 16 secondary files). Either all files
  // appear or none: failures roll back files already written.
  void save(const std::filesystem::path& dir) const;
};

}  // namespace itx
