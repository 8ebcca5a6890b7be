#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "itx/engine.hpp"
#include "itx/kernel_store.hpp"
#include "itx/lfnst.hpp"
#include "itx/signaling.hpp"

namespace itx {

// Cycle model of the shared-multiplier inverse transform datapath.
//
// Topology: a secondary-transform core feeds a single 1-D MTS core through
// the input line memory; the MTS core is reused for both separable passes
// with a transpose buffer in between. Each core owns a fixed pool of
// multipliers (32 in the reference configuration, yielding r = 2 output
// samples per cycle per 1-D line).
//
// Timing rules, all in core clock cycles:
//  * A 1-D line of N points occupies the core for N/r cycles. Coefficient
//    zeroing never shortens the slot; it halves the input rate instead
//    (1 sample/cycle rather than 2 at r = 2), because only the first N/2
//    coefficients of a zeroed line exist.
//  * Multiplier usage is input-driven: each arriving coefficient fires the
//    kernel row it feeds. For DCT-II that row width follows the even/odd
//    split (odd index: N/2 wide; index 2 mod 4: N/4 wide; and so on), so a
//    zeroed 64-point line uses exactly 32 multipliers on odd-input cycles.
//    Sine-family lines use full N-wide rows.
//  * The stage latencies are fixed by construction to the worst-case line:
//    L1 = 768/m + 4 cycles for the secondary stage and L2 = 1024/m + 4 for a
//    1-D MTS pass (m = multipliers per core; 28 and 36 at m = 32). A line
//    entering the MTS core at cycle t emits its outputs starting at t + L2
//    regardless of its length; ineligible blocks pass the secondary stage
//    through a delay line with the same L1.
//  * The second pass of a block can start only when row 0 of the transpose
//    buffer is complete, i.e. one cycle after the first output of the final
//    first-pass line: an inter-pass gap of max(0, L2 - N1/r + 1) cycles,
//    N1 = first-pass line length.
//  * The secondary core is output-stationary: out_size outputs drain at r
//    per cycle, each output burning in_size multipliers, so a 16-input shape
//    occupies all 32 multipliers (at m = 32) for out_size/r cycles.
//
// Memory model: the input line memory stores 16 coefficients of 18 bits per
// line (512 x 288 bits), the output memory 16 residuals of 11 bits per line
// (512 x 176 bits). A 4:2:2 CTU (64x64 luma + two 32x64 chroma blocks) is
// exactly 512 lines, which is the high-water residency for 4:2:2 streams.
// Counted traffic per block: load writes ceil(WH/16) lines, the secondary
// stage reads 1 line and writes back 1 or 3, each pass reads ceil(WH/16)
// lines, and the final pass writes ceil(WH/16) output lines.

inline constexpr int kInputMemLines      = 512;
inline constexpr int kInputMemLineBits   = 16 * kIntermediateBits;  // 288
inline constexpr int kOutputMemLines     = 512;
inline constexpr int kOutputMemLineBits  = 16 * kOutputBits;  // 176
inline constexpr int kMtsRomBudgetBits   = 17408;
inline constexpr int kLfnstRomBudgetBits = 65536;

struct MemoryModel {
  int input_lines       = kInputMemLines;
  int input_line_bits   = kInputMemLineBits;
  int output_lines      = kOutputMemLines;
  int output_line_bits  = kOutputMemLineBits;
  int mts_rom_bits      = kMtsRomBudgetBits;
  int lfnst_rom_bits    = kLfnstRomBudgetBits;

  long input_bits_total() const { return long(input_lines) * input_line_bits; }    // 147456
  long output_bits_total() const { return long(output_lines) * output_line_bits; } // 90112
  static int lines_for(int width, int height) { return (width * height + 15) / 16; }
};

struct SimConfig {
  int mults_per_core = 32;  // per core: one MTS pool, one secondary pool
  double clock_hz    = 600e6;
  StageConfig stages;

  int rate() const { return mults_per_core / 16; }       // output samples per cycle
  int l1() const { return 768 / mults_per_core + 4; }    // secondary-stage latency
  int l2() const { return 1024 / mults_per_core + 4; }   // 1-D MTS pass latency
  void validate() const;                                 // mults_per_core in {32, 64}
};

// Control word accompanying one block, mirroring the hardware interface.
// Field widths are fixed; validate() rejects any value that does not fit.
struct BlockTransaction {
  bool input_enable     = true;  // 1 bit
  bool avc_vvc          = true;  // 1 bit: 0 = AVC, 1 = HEVC/VVC
  uint8_t tr_width      = 0;     // 3 bits: 0 -> 4 ... 4 -> 64
  uint8_t tr_height     = 0;     // 3 bits
  uint8_t mts_type      = 0;     // 2 bits: 0 = DCT2, 1 = DCT8, 2 = DST7
  bool mts_dir          = true;  // 1 bit: 0 = horizontal, 1 = vertical (first pass)
  uint8_t lfnst_pos_x   = 0;     // 5 bits
  uint8_t lfnst_pos_y   = 0;     // 3 bits
  uint8_t lfnst_set_idx = 0;     // 2 bits
  uint8_t lfnst_idx     = 0;     // 2 bits: 0 = off

  void validate() const;  // throws std::invalid_argument on any overflowing field
};

// {field name, bit width} of the block interface, plus the sample ports.
std::vector<std::pair<const char*, int>> transaction_field_bits();

int size_code(int n);        // 4..64 -> 0..4
int code_size(int code);     // 0..4 -> 4..64
uint8_t mts_type_code(TrType t);

// Transaction as the decoder front-end would raise it for this block.
BlockTransaction make_transaction(const BlockDescriptor& d);

// Per-line multiplier occupancy of one 1-D MTS pass.
struct Schedule1D {
  std::vector<int> mults_per_cycle;  // one entry per line slot cycle
  Rational in_rate;                  // coefficients consumed per cycle
  Rational out_rate;                 // samples produced per cycle
  long total_mults = 0;
};

Schedule1D schedule_1d(const TransformSpec& spec, int mults_per_core = 32);

struct LfnstSchedule {
  std::vector<int> mults_per_cycle;
  Rational in_rate;
  Rational out_rate;
  long total_mults = 0;
};

LfnstSchedule schedule_lfnst(const LfnstShape& shape, int mults_per_core = 32);

struct CycleReport {
  uint64_t total_cycles   = 0;  // first input to last residual out
  uint64_t compute_cycles = 0;  // MTS line-slot cycles over both passes
  int l1                  = 0;
  int l2                  = 0;
  uint64_t inter_pass_gap = 0;
  int samples             = 0;
  double mean_throughput  = 0.0;  // samples per compute cycle

  Rational input_rate;   // first-pass line input rate
  Rational output_rate;  // line output rate (always the core rate)
  bool lfnst_active = false;
  Rational lfnst_input_rate{0, 1};
  Rational lfnst_output_rate{0, 1};

  int max_mts_mults        = 0;
  int max_lfnst_mults      = 0;
  long total_mults_mts     = 0;
  long total_mults_lfnst   = 0;
  uint64_t memory_reads    = 0;
  uint64_t memory_writes   = 0;
  int input_lines_resident = 0;

  // filled when requested in SimOptions
  std::vector<int> per_cycle_mults_mts;
  std::vector<int> per_cycle_mults_lfnst;
};

struct SimOptions {
  bool collect_per_cycle = false;
  std::ostream* trace    = nullptr;
};

struct BlockSimResult {
  CycleReport report;
  CoeffBlock residuals;
};

// Functional + cycle simulation of one block. The residual output is the
// engine datapath result, bit for bit; the report carries the timing.
BlockSimResult simulate_block(const BlockTransaction& txn, const BlockDescriptor& d, const CoeffBlock& coeffs,
                              const KernelStore& store, const SimConfig& cfg, const SimOptions& opt = {});

// Timing-only pipeline composition of many blocks (steady-state streaming;
// data path skipped). Residency is tracked per group id: all blocks sharing
// a group are resident together.
struct SeqBlock {
  BlockDescriptor desc;
  int group = 0;
};

struct SequenceReport {
  uint64_t total_cycles  = 0;
  uint64_t samples       = 0;
  size_t blocks          = 0;
  double throughput      = 0.0;  // samples per cycle
  double fps             = 0.0;
  int l1                 = 0;
  int l2                 = 0;
  int max_mts_mults      = 0;
  int max_lfnst_mults    = 0;
  uint64_t memory_reads  = 0;
  uint64_t memory_writes = 0;
  int high_water_lines   = 0;
  int input_capacity     = kInputMemLines;
};

SequenceReport simulate_sequence(const std::vector<SeqBlock>& blocks, const SimConfig& cfg);

// Tile a frame into CTUs and transform blocks (all DCT-II, secondary stage
// bypassed) and stream it through the pipeline. chroma: 420, 422 or 444.
// 4:2:0 / 4:2:2 keep one full CTU resident (384 / 512 lines); 4:4:4 keeps a
// double buffer of two plane CTBs (512 lines).
SequenceReport simulate_frame(int width, int height, int chroma, const SimConfig& cfg);

// Modeled ROM occupancy. DCT-II butterfly storage keeps the 4-point kernel,
// the unique triangle of each symmetric odd sub-matrix (plus a duplicate of
// the 16-point one for dual-issue reads), and only the 16 live rows of the
// 64-point odd part. Falls back to dense counting if a loaded kernel breaks
// the symmetry the triangle layout relies on.
struct RomReport {
  long dct2_bits    = 0;
  long dst7_bits    = 0;
  long mts_bits     = 0;  // dct2 + dst7 (DCT-VIII is derived, 0 bits)
  long mts_budget   = kMtsRomBudgetBits;
  long lfnst_bits   = 0;
  long lfnst_budget = kLfnstRomBudgetBits;
  bool symmetric_layout = true;  // triangle storage was applicable
  bool mts_ok() const { return mts_bits <= mts_budget; }
  bool lfnst_ok() const { return lfnst_bits <= lfnst_budget; }
};

RomReport rom_budget_check(const KernelStore& store);

}  // namespace itx
