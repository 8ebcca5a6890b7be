#include "itx/pipeline.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace itx {

void SimConfig::validate() const
{
  if (mults_per_core != 32 && mults_per_core != 64)
    throw std::invalid_argument("mults_per_core must be 32 or 64");
  if (clock_hz <= 0)
    throw std::invalid_argument("clock_hz must be positive");
  stages.validate();
}

static void check_field(const char* name, unsigned value, int bits)
{
  if (value >= (1u << bits))
    throw std::invalid_argument(std::string(name) + " value " + std::to_string(value) + " does not fit " +
                                std::to_string(bits) + " bits");
}

void BlockTransaction::validate() const
{
  check_field("tr_width", tr_width, 3);
  check_field("tr_height", tr_height, 3);
  check_field("MTS_type", mts_type, 2);
  check_field("LFNST_pos_x", lfnst_pos_x, 5);
  check_field("LFNST_pos_y", lfnst_pos_y, 3);
  check_field("LFNST_set_idx", lfnst_set_idx, 2);
  check_field("LFNST_idx", lfnst_idx, 2);
  if (tr_width > 4 || tr_height > 4)
    throw std::invalid_argument("size code beyond 64 points");
  if (mts_type > 2)
    throw std::invalid_argument("MTS_type code 3 is reserved");
  if (lfnst_idx > 2)
    throw std::invalid_argument("LFNST_idx 3 is reserved");
}

std::vector<std::pair<const char*, int>> transaction_field_bits()
{
  return {
      {"input_enable", 1}, {"AVC_VVC", 1},       {"tr_width", 3},      {"tr_height", 3},  {"MTS_type", 2},
      {"MTS_dir", 1},      {"LFNST_pos_x", 5},   {"LFNST_pos_y", 3},   {"LFNST_set_idx", 2},
      {"LFNST_idx", 2},    {"tr_src_sample", kIntermediateBits}, {"tr_dst_sample", kOutputBits},
  };
}

int size_code(int n)
{
  switch (n) {
  case 4: return 0;
  case 8: return 1;
  case 16: return 2;
  case 32: return 3;
  case 64: return 4;
  default: throw std::invalid_argument("no size code for " + std::to_string(n));
  }
}

int code_size(int code)
{
  if (code < 0 || code > 4)
    throw std::invalid_argument("size code out of range");
  return 4 << code;
}

uint8_t mts_type_code(TrType t)
{
  switch (t) {
  case TrType::DCT2: return 0;
  case TrType::DCT8: return 1;
  case TrType::DST7: return 2;
  }
  return 0;
}

BlockTransaction make_transaction(const BlockDescriptor& d)
{
  BlockTransaction t;
  t.input_enable = true;
  t.avc_vvc      = d.standard != Standard::AVC;
  t.tr_width     = uint8_t(size_code(d.width));
  t.tr_height    = uint8_t(size_code(d.height));
  // the first pass is vertical, so the launch word carries the vertical type
  t.mts_type = mts_type_code(resolve_types(d).second);
  t.mts_dir  = true;

  if (lfnst_eligible(d)) {
    const auto& p   = diag_scan_4x4()[d.last_sig_pos];
    t.lfnst_pos_x   = uint8_t(p.x);
    t.lfnst_pos_y   = uint8_t(p.y);
    t.lfnst_set_idx = uint8_t(lfnst_set_index(d.ipm));
    t.lfnst_idx     = uint8_t(d.lfnst_idx);
  } else {
    // saturated position marks "outside the secondary region"
    t.lfnst_pos_x = 31;
    t.lfnst_pos_y = 7;
  }
  return t;
}

// Width of the DCT-II kernel row an arriving coefficient fires, following the
// even/odd split: odd indices hit the odd sub-matrix of the current level.
static int row_width(int i, int n)
{
  while (n > 4 && (i & 1) == 0) {
    i /= 2;
    n /= 2;
  }
  return n == 4 ? 4 : n / 2;
}

Schedule1D schedule_1d(const TransformSpec& spec, int mults_per_core)
{
  if (mults_per_core != 32 && mults_per_core != 64)
    throw std::invalid_argument("mults_per_core must be 32 or 64");
  mult_count_1d(spec);  // rejects malformed type/size combinations

  const int r      = mults_per_core / 16;
  const int n      = spec.size;
  const int eff    = effective_size(n, spec.type);
  const int cycles = n / r;
  const int ipc    = eff * r / n;  // inputs consumed per cycle (r, or r/2 when zeroed)

  Schedule1D s;
  s.in_rate  = Rational(eff * r, n);
  s.out_rate = Rational(r, 1);
  s.mults_per_cycle.resize(cycles);
  for (int k = 0; k < cycles; k++) {
    int use = 0;
    for (int t = 0; t < ipc; t++) {
      const int i = k * ipc + t;
      use += spec.type == TrType::DCT2 ? row_width(i, n) : n;
    }
    if (use > mults_per_core)
      throw std::runtime_error("multiplier budget exceeded: " + std::to_string(use) + " > " +
                               std::to_string(mults_per_core));
    s.mults_per_cycle[k] = use;
    s.total_mults += use;
  }
  return s;
}

LfnstSchedule schedule_lfnst(const LfnstShape& shape, int mults_per_core)
{
  if (mults_per_core != 32 && mults_per_core != 64)
    throw std::invalid_argument("mults_per_core must be 32 or 64");

  const int r   = mults_per_core / 16;
  const int use = r * shape.in_size;  // output-stationary: r outputs per cycle
  if (use > mults_per_core)
    throw std::runtime_error("multiplier budget exceeded in secondary stage");

  LfnstSchedule s;
  s.in_rate  = Rational(shape.in_size * r, shape.out_size);
  s.out_rate = Rational(r, 1);
  s.mults_per_cycle.assign(size_t(shape.out_size / r), use);
  s.total_mults = long(shape.in_size) * shape.out_size;
  return s;
}

// Timing skeleton shared by the single-block and streaming simulators.
struct BlockTiming {
  TransformSpec pass1, pass2;
  int lines1 = 0, lines2 = 0;  // line counts per pass
  int c1 = 0, c2 = 0;          // cycles per line slot
  uint64_t gap = 0;            // transpose turnaround before pass 2
  uint64_t lfnst_cycles = 0;
  bool lfnst = false;
  LfnstShape shape;
};

static BlockTiming block_timing(const BlockDescriptor& d, const SimConfig& cfg)
{
  const auto [hor_t, ver_t] = resolve_types(d);
  const TransformSpec hor{hor_t, d.width, Dir::Horizontal};
  const TransformSpec ver{ver_t, d.height, Dir::Vertical};
  const int r = cfg.rate();

  BlockTiming t;
  t.pass1  = cfg.stages.vertical_first ? ver : hor;
  t.pass2  = cfg.stages.vertical_first ? hor : ver;
  t.lines1 = cfg.stages.vertical_first ? d.width : d.height;
  t.lines2 = cfg.stages.vertical_first ? d.height : d.width;
  t.c1     = t.pass1.size / r;
  t.c2     = t.pass2.size / r;
  t.gap    = uint64_t(std::max(0, cfg.l2() - t.c1 + 1));
  t.lfnst  = lfnst_eligible(d);
  if (t.lfnst) {
    t.shape        = lfnst_shape(d.width, d.height);
    t.lfnst_cycles = uint64_t(t.shape.out_size / r);
  }
  return t;
}

BlockSimResult simulate_block(const BlockTransaction& txn, const BlockDescriptor& d, const CoeffBlock& coeffs,
                              const KernelStore& store, const SimConfig& cfg, const SimOptions& opt)
{
  cfg.validate();
  txn.validate();
  const auto violations = validate(d);
  if (!violations.empty())
    throw std::invalid_argument("descriptor not processable: " + violations.front().code + ": " +
                                violations.front().message);
  const BlockTransaction canonical = make_transaction(d);
  auto same = [](const BlockTransaction& a, const BlockTransaction& b) {
    return a.input_enable == b.input_enable && a.avc_vvc == b.avc_vvc && a.tr_width == b.tr_width &&
           a.tr_height == b.tr_height && a.mts_type == b.mts_type && a.mts_dir == b.mts_dir &&
           a.lfnst_pos_x == b.lfnst_pos_x && a.lfnst_pos_y == b.lfnst_pos_y && a.lfnst_set_idx == b.lfnst_set_idx &&
           a.lfnst_idx == b.lfnst_idx;
  };
  if (!same(txn, canonical))
    throw std::invalid_argument("transaction does not match the block descriptor");
  if (coeffs.width != d.width || coeffs.height != d.height)
    throw std::invalid_argument("coefficient block does not match descriptor dimensions");

  StageConfig st = cfg.stages;
  st.bit_depth   = d.bit_depth;
  st.s2          = 20 - d.bit_depth;

  // Functional path: the simulator is transparent over the engine.
  const auto [hor_t, ver_t] = resolve_types(d);
  const TransformSpec hor{hor_t, d.width, Dir::Horizontal};
  const TransformSpec ver{ver_t, d.height, Dir::Vertical};
  CoeffBlock mid = inverse_lfnst(d, coeffs, store.lfnst, st);
  CoeffBlock res = inverse_mts_2d(mid, hor, ver, store.mts, st);

  // Cycle accounting.
  const BlockTiming t  = block_timing(d, cfg);
  const Schedule1D sc1 = schedule_1d(t.pass1, cfg.mults_per_core);
  const Schedule1D sc2 = schedule_1d(t.pass2, cfg.mults_per_core);

  CycleReport rep;
  rep.l1             = cfg.l1();
  rep.l2             = cfg.l2();
  rep.inter_pass_gap = t.gap;
  rep.samples        = d.width * d.height;

  const uint64_t pass1_start = uint64_t(rep.l1);
  const uint64_t pass1_end   = pass1_start + uint64_t(t.lines1) * t.c1;
  const uint64_t pass2_start = pass1_end + t.gap;
  const uint64_t pass2_end   = pass2_start + uint64_t(t.lines2) * t.c2;
  rep.total_cycles           = pass2_end + uint64_t(rep.l2);
  rep.compute_cycles         = uint64_t(t.lines1) * t.c1 + uint64_t(t.lines2) * t.c2;
  rep.mean_throughput        = double(rep.samples) / double(rep.compute_cycles);

  rep.input_rate  = sc1.in_rate;
  rep.output_rate = sc1.out_rate;

  rep.max_mts_mults   = std::max(*std::max_element(sc1.mults_per_cycle.begin(), sc1.mults_per_cycle.end()),
                                 *std::max_element(sc2.mults_per_cycle.begin(), sc2.mults_per_cycle.end()));
  rep.total_mults_mts = sc1.total_mults * t.lines1 + sc2.total_mults * t.lines2;

  LfnstSchedule lsc;
  if (t.lfnst) {
    lsc                   = schedule_lfnst(t.shape, cfg.mults_per_core);
    rep.lfnst_active      = true;
    rep.lfnst_input_rate  = lsc.in_rate;
    rep.lfnst_output_rate = lsc.out_rate;
    rep.max_lfnst_mults   = lsc.mults_per_cycle.empty() ? 0 : lsc.mults_per_cycle.front();
    rep.total_mults_lfnst = lsc.total_mults;
  }

  const uint64_t lines = uint64_t(MemoryModel::lines_for(d.width, d.height));
  rep.memory_reads     = 2 * lines + (t.lfnst ? 1 : 0);
  rep.memory_writes    = 2 * lines + (t.lfnst ? uint64_t(t.shape.out_size) / 16 : 0);
  rep.input_lines_resident = int(lines);

  if (opt.collect_per_cycle || opt.trace) {
    rep.per_cycle_mults_mts.assign(rep.total_cycles, 0);
    rep.per_cycle_mults_lfnst.assign(rep.total_cycles, 0);
    for (uint64_t c = 0; c < t.lfnst_cycles; c++)
      rep.per_cycle_mults_lfnst[c] = lsc.mults_per_cycle[c];
    for (int l = 0; l < t.lines1; l++)
      for (int c = 0; c < t.c1; c++)
        rep.per_cycle_mults_mts[pass1_start + uint64_t(l) * t.c1 + c] = sc1.mults_per_cycle[c];
    for (int l = 0; l < t.lines2; l++)
      for (int c = 0; c < t.c2; c++)
        rep.per_cycle_mults_mts[pass2_start + uint64_t(l) * t.c2 + c] = sc2.mults_per_cycle[c];

    if (opt.trace) {
      auto& os = *opt.trace;
      os << "# itx-trace v1 block " << d.width << "x" << d.height << "\n";
      for (uint64_t c = 0; c < rep.total_cycles; c++) {
        const char* stage = c < pass1_start ? (c < t.lfnst_cycles ? "lfnst" : "fill")
                            : c < pass1_end ? "pass1"
                            : c < pass2_start ? "gap"
                            : c < pass2_end   ? "pass2"
                                              : "drain";
        os << c << " " << stage << " " << rep.per_cycle_mults_mts[c] << " " << rep.per_cycle_mults_lfnst[c] << "\n";
      }
    }
    if (!opt.collect_per_cycle) {
      rep.per_cycle_mults_mts.clear();
      rep.per_cycle_mults_lfnst.clear();
    }
  }

  return {std::move(rep), std::move(res)};
}

SequenceReport simulate_sequence(const std::vector<SeqBlock>& blocks, const SimConfig& cfg)
{
  cfg.validate();
  SequenceReport rep;
  rep.l1 = cfg.l1();
  rep.l2 = cfg.l2();

  // schedules depend only on (type, size, budget); cache across blocks
  std::map<std::pair<int, int>, Schedule1D> cache;
  auto sched = [&](const TransformSpec& s) -> const Schedule1D& {
    auto key = std::make_pair(int(s.type), s.size);
    auto it  = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, schedule_1d(s, cfg.mults_per_core)).first;
    return it->second;
  };

  uint64_t lfnst_free = 0, mts_free = 0, last_out = 0;
  std::map<int, long> group_lines;

  for (const SeqBlock& b : blocks) {
    const auto violations = validate(b.desc);
    if (!violations.empty())
      throw std::invalid_argument("descriptor not processable: " + violations.front().code);

    const BlockTiming t  = block_timing(b.desc, cfg);
    const Schedule1D& s1 = sched(t.pass1);
    const Schedule1D& s2 = sched(t.pass2);

    const uint64_t lfnst_in = lfnst_free;
    uint64_t ready          = lfnst_in + uint64_t(rep.l1);
    if (t.lfnst) {
      const LfnstSchedule lsc = schedule_lfnst(t.shape, cfg.mults_per_core);
      lfnst_free              = lfnst_in + t.lfnst_cycles;
      rep.max_lfnst_mults     = std::max(rep.max_lfnst_mults, lsc.mults_per_cycle.front());
    }

    const uint64_t p1_start = std::max(mts_free, ready);
    const uint64_t p2_start = p1_start + uint64_t(t.lines1) * t.c1 + t.gap;
    mts_free                = p2_start + uint64_t(t.lines2) * t.c2;
    last_out                = mts_free + uint64_t(rep.l2);

    rep.max_mts_mults = std::max({rep.max_mts_mults,
                                  *std::max_element(s1.mults_per_cycle.begin(), s1.mults_per_cycle.end()),
                                  *std::max_element(s2.mults_per_cycle.begin(), s2.mults_per_cycle.end())});

    const uint64_t lines = uint64_t(MemoryModel::lines_for(b.desc.width, b.desc.height));
    rep.memory_reads += 2 * lines + (t.lfnst ? 1 : 0);
    rep.memory_writes += 2 * lines + (t.lfnst ? uint64_t(t.shape.out_size) / 16 : 0);
    group_lines[b.group] += long(lines);

    rep.samples += uint64_t(b.desc.width) * b.desc.height;
    rep.blocks++;
  }

  rep.total_cycles = last_out;
  if (rep.total_cycles > 0) {
    rep.throughput = double(rep.samples) / double(rep.total_cycles);
    rep.fps        = cfg.clock_hz / double(rep.total_cycles);
  }
  for (auto& [g, lines] : group_lines)
    rep.high_water_lines = std::max(rep.high_water_lines, int(lines));
  return rep;
}

// one dimension greedily into legal transform sizes, largest first
static std::vector<int> split_1d(int len)
{
  std::vector<int> parts;
  for (int s : {64, 32, 16, 8, 4})
    while (len >= s) {
      parts.push_back(s);
      len -= s;
    }
  if (len != 0)
    throw std::invalid_argument("frame dimension not decomposable into transform sizes");
  return parts;
}

SequenceReport simulate_frame(int width, int height, int chroma, const SimConfig& cfg)
{
  if (chroma != 420 && chroma != 422 && chroma != 444)
    throw std::invalid_argument("chroma format must be 420, 422 or 444");
  if (width < 4 || height < 4 || width % 4 || height % 4)
    throw std::invalid_argument("frame dimensions must be multiples of 4");
  const int sx = chroma == 444 ? 1 : 2;
  const int sy = chroma == 420 ? 2 : 1;
  if ((width / sx) % 4 || (height / sy) % 4)
    throw std::invalid_argument("chroma plane dimensions must be multiples of 4");

  std::vector<SeqBlock> blocks;
  auto add_plane = [&](int pw, int ph, Component comp, int group) {
    for (int h : split_1d(ph))
      for (int w : split_1d(pw)) {
        BlockDescriptor d;
        d.width     = w;
        d.height    = h;
        d.component = comp;
        d.standard  = Standard::VVC;
        blocks.push_back({d, group});
      }
  };

  int group = 0;
  for (int cy = 0; cy < height; cy += 64)
    for (int cx = 0; cx < width; cx += 64, group += 3) {
      const int lw = std::min(64, width - cx);
      const int lh = std::min(64, height - cy);
      // 4:2:0 / 4:2:2 hold the full CTU; 4:4:4 holds one plane CTB at a time
      const bool per_plane = chroma == 444;
      add_plane(lw, lh, Component::Luma, group);
      add_plane(lw / sx, lh / sy, Component::Cb, per_plane ? group + 1 : group);
      add_plane(lw / sx, lh / sy, Component::Cr, per_plane ? group + 2 : group);
    }

  SequenceReport rep = simulate_sequence(blocks, cfg);
  if (chroma == 444)
    rep.high_water_lines *= 2;  // double-buffered plane CTBs
  if (rep.high_water_lines > kInputMemLines)
    throw std::runtime_error("input memory residency " + std::to_string(rep.high_water_lines) +
                             " lines exceeds capacity");
  return rep;
}

RomReport rom_budget_check(const KernelStore& store)
{
  RomReport r;
  if (store.mts.empty() && !store.lfnst.loaded)
    return r;  // empty store occupies nothing

  if (!store.mts.empty()) {
    const int p = store.mts.precision_bits();
    for (const IntKernel* k : store.mts.stored())
      if (k->kind == KernelKind::DST7)
        r.dst7_bits += long(k->rows) * k->cols * p;

    long words = 16;  // 4-point base kernel, stored dense
    for (int n : {8, 16, 32, 64}) {
      const auto& d  = store.mts.butterfly(n);
      const int half = n / 2;
      bool symmetric = true;
      for (int a = 0; a < half && symmetric; a++)
        for (int b = a + 1; b < half; b++)
          if (d.odd_at(a, b) != d.odd_at(b, a)) {
            symmetric = false;
            break;
          }
      // live rows: zeroing truncates the 64-point odd part to 16 input rows
      const int live = n == 64 ? 16 : half;
      long unique    = 0;
      if (symmetric) {
        for (int a = 0; a < live; a++)
          unique += half - a;  // entries (a, b) with b >= a
      } else {
        unique              = long(live) * half;
        r.symmetric_layout = false;
      }
      words += unique;
      if (n == 16)
        words += unique;  // duplicated 16-point odd part for dual-issue reads
    }
    r.dct2_bits = words * p;
    r.mts_bits  = r.dct2_bits + r.dst7_bits;
  }

  if (store.lfnst.loaded)
    for (int set = 0; set < 4; set++)
      for (int k = 0; k < 2; k++) {
        const auto& a = store.lfnst.k16[set][k];
        const auto& b = store.lfnst.k48[set][k];
        r.lfnst_bits += long(a.rows) * a.cols * a.precision_bits;
        r.lfnst_bits += long(b.rows) * b.cols * b.precision_bits;
      }
  return r;
}

}  // namespace itx
