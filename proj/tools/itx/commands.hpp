#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace itx::cli {

// Exit codes shared by every subcommand:
//   0 success, 1 verification mismatch or budget overflow,
//   2 malformed input stream, 3 kernel or configuration problem.
inline constexpr int kExitOk       = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitFormat   = 2;
inline constexpr int kExitConfig   = 3;

int cmd_gen_kernels(const std::string& out_dir, int precision_bits, std::ostream& err);

int cmd_itx(std::istream& in, std::ostream& out, std::ostream& err, const std::string& kernel_dir, int threads);

struct SimulateArgs {
  std::string kernel_dir;
  std::string frame;       // "WxH"; empty = stream mode
  int chroma     = 422;
  int mults      = 32;
  double clock   = 600e6;
  std::string trace_file;  // per-block cycle traces (stream mode)
};

int cmd_simulate(const SimulateArgs& args, std::istream& in, std::ostream& out, std::ostream& err);

int cmd_verify(uint64_t blocks, uint64_t seed, const std::string& kernel_dir, std::ostream& out, std::ostream& err);

int cmd_rom(const std::string& kernel_dir, std::ostream& out, std::ostream& err);

// Full argv interface (the `itx` binary's main).
int run(int argc, const char* const* argv);

}  // namespace itx::cli
