#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "itx/engine.hpp"
#include "itx/kernel_store.hpp"
#include "itx/lfnst.hpp"
#include "itx/oracle.hpp"
#include "itx/pipeline.hpp"
#include "itx/records.hpp"

namespace itx::cli {

using nlohmann::json;

int cmd_gen_kernels(const std::string& out_dir, int precision_bits, std::ostream& err)
{
  try {
    KernelStore::generate(precision_bits).save(out_dir);
  } catch (const std::exception& e) {
    err << "gen-kernels: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

static KernelStore load_store(const std::string& kernel_dir)
{
  if (kernel_dir.empty())
    throw std::runtime_error("no kernel directory given (use --kernels or set ITX_KERNEL_DIR)");
  return KernelStore::load(kernel_dir);
}

static StageConfig stage_config_for(const BlockDescriptor& d)
{
  StageConfig st;
  st.bit_depth = d.bit_depth;
  st.s2        = 20 - d.bit_depth;
  return st;
}

static std::string process_record(const BlockRecord& rec, size_t idx, const KernelStore& store)
{
  const auto violations = validate(rec.desc);
  if (!violations.empty())
    return serialize_error(idx, violations);
  try {
    const StageConfig st      = stage_config_for(rec.desc);
    const auto [hor_t, ver_t] = resolve_types(rec.desc);
    const TransformSpec hor{hor_t, rec.desc.width, Dir::Horizontal};
    const TransformSpec ver{ver_t, rec.desc.height, Dir::Vertical};
    const CoeffBlock mid = inverse_lfnst(rec.desc, rec.coeffs, store.lfnst, st);
    const CoeffBlock res = inverse_mts_2d(mid, hor, ver, store.mts, st);
    return serialize_result(rec, res);
  } catch (const std::exception& e) {
    return serialize_error(idx, {{"processing-error", e.what()}});
  }
}

int cmd_itx(std::istream& in, std::ostream& out, std::ostream& err, const std::string& kernel_dir, int threads)
{
  KernelStore store;
  try {
    store = load_store(kernel_dir);
  } catch (const std::exception& e) {
    err << "itx: " << e.what() << "\n";
    return kExitConfig;
  }
  if (threads < 1)
    threads = 1;

  std::vector<BlockRecord> records;
  std::string line;
  size_t line_no = 0, index = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    try {
      records.push_back(parse_record(line));
    } catch (const FormatError& e) {
      err << "itx: line " << line_no << ": " << e.what() << "\n";
      return kExitFormat;
    }
    // single-threaded mode streams record by record
    if (threads == 1) {
      out << process_record(records.back(), index++, store) << "\n";
      records.clear();
    }
  }
  if (threads == 1)
    return kExitOk;

  // worker pool over parsed records; output re-sequenced to input order
  std::vector<std::string> results(records.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < records.size(); i = next.fetch_add(1))
      results[i] = process_record(records[i], i, store);
  };
  std::vector<std::future<void>> pool;
  for (int t = 0; t < threads; t++)
    pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool)
    f.get();
  for (const auto& r : results)
    out << r << "\n";
  return kExitOk;
}

static json rational_json(const Rational& r) { return r.str(); }

static json report_json(const CycleReport& r)
{
  json j;
  j["total_cycles"]    = r.total_cycles;
  j["compute_cycles"]  = r.compute_cycles;
  j["l1"]              = r.l1;
  j["l2"]              = r.l2;
  j["inter_pass_gap"]  = r.inter_pass_gap;
  j["samples"]         = r.samples;
  j["mean_throughput"] = r.mean_throughput;
  j["input_rate"]      = rational_json(r.input_rate);
  j["output_rate"]     = rational_json(r.output_rate);
  j["lfnst"]           = {{"active", r.lfnst_active},
                          {"input_rate", rational_json(r.lfnst_input_rate)},
                          {"output_rate", rational_json(r.lfnst_output_rate)}};
  j["max_mults"]       = {{"mts", r.max_mts_mults}, {"lfnst", r.max_lfnst_mults}};
  j["total_mults"]     = {{"mts", r.total_mults_mts}, {"lfnst", r.total_mults_lfnst}};
  j["memory"] = {{"reads", r.memory_reads}, {"writes", r.memory_writes}, {"lines_resident", r.input_lines_resident}};
  return j;
}

static json sequence_json(const SequenceReport& r)
{
  json j;
  j["total_cycles"]     = r.total_cycles;
  j["samples"]          = r.samples;
  j["blocks"]           = r.blocks;
  j["throughput"]       = r.throughput;
  j["fps"]              = r.fps;
  j["l1"]               = r.l1;
  j["l2"]               = r.l2;
  j["max_mults"]        = {{"mts", r.max_mts_mults}, {"lfnst", r.max_lfnst_mults}};
  j["memory"]           = {{"reads", r.memory_reads}, {"writes", r.memory_writes}};
  j["high_water_lines"] = r.high_water_lines;
  j["input_capacity"]   = r.input_capacity;
  return j;
}

int cmd_simulate(const SimulateArgs& args, std::istream& in, std::ostream& out, std::ostream& err)
{
  SimConfig cfg;
  cfg.mults_per_core = args.mults;
  cfg.clock_hz       = args.clock;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return kExitConfig;
  }

  if (!args.frame.empty()) {
    int w = 0, h = 0;
    char x = 0;
    std::istringstream fs(args.frame);
    if (!(fs >> w >> x >> h) || x != 'x' || w <= 0 || h <= 0) {
      err << "simulate: --frame expects WxH, got \"" << args.frame << "\"\n";
      return kExitFormat;
    }
    try {
      const SequenceReport rep = simulate_frame(w, h, args.chroma, cfg);
      json j                   = sequence_json(rep);
      j["frame"]               = {{"width", w}, {"height", h}, {"chroma", args.chroma}};
      j["clock_hz"]            = cfg.clock_hz;
      j["mults_per_core"]      = cfg.mults_per_core;
      out << j.dump() << "\n";
    } catch (const std::exception& e) {
      err << "simulate: " << e.what() << "\n";
      return kExitConfig;
    }
    return kExitOk;
  }

  KernelStore store;
  try {
    store = load_store(args.kernel_dir);
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << "\n";
    return kExitConfig;
  }

  std::ofstream trace;
  if (!args.trace_file.empty()) {
    trace.open(args.trace_file, std::ios::trunc);
    if (!trace) {
      err << "simulate: cannot open trace file " << args.trace_file << "\n";
      return kExitConfig;
    }
  }

  std::vector<SeqBlock> seq;
  std::string line;
  size_t line_no = 0, index = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    BlockRecord rec;
    try {
      rec = parse_record(line);
    } catch (const FormatError& e) {
      err << "simulate: line " << line_no << ": " << e.what() << "\n";
      return kExitFormat;
    }
    const auto violations = validate(rec.desc);
    if (!violations.empty()) {
      out << serialize_error(index++, violations) << "\n";
      continue;
    }
    try {
      SimOptions opt;
      opt.trace                = trace.is_open() ? &trace : nullptr;
      const BlockSimResult res = simulate_block(make_transaction(rec.desc), rec.desc, rec.coeffs, store, cfg, opt);
      json j                   = json::parse(serialize_result(rec, res.residuals));
      j["report"]              = report_json(res.report);
      out << j.dump() << "\n";
      seq.push_back({rec.desc, int(index)});
      index++;
    } catch (const std::exception& e) {
      err << "simulate: record " << index << ": " << e.what() << "\n";
      return kExitConfig;
    }
  }

  if (!seq.empty()) {
    json j       = json::object();
    j["summary"] = sequence_json(simulate_sequence(seq, cfg));
    out << j.dump() << "\n";
  }
  return kExitOk;
}

// ---- verify -----------------------------------------------------------

namespace {

struct VerifyCase {
  BlockDescriptor desc;
};

std::vector<BlockDescriptor> verify_protos()
{
  std::vector<BlockDescriptor> protos;
  auto push = [&](BlockDescriptor d) { protos.push_back(d); };

  for (int w : kDct2Sizes)
    for (int h : kDct2Sizes) {
      BlockDescriptor d;
      d.width    = w;
      d.height   = h;
      d.standard = Standard::VVC;

      push(d);  // luma inter DCT-II
      d.component = Component::Cb;
      push(d);  // chroma DCT-II
      d.component = Component::Luma;

      if (std::max(w, h) <= 32)
        for (int mts = 1; mts <= 4; mts++) {
          d.tu_mts_idx = mts;
          d.is_intra   = (mts % 2) != 0;
          push(d);
        }
      d.tu_mts_idx = 0;

      // secondary transform on and off, luma and chroma
      d.is_intra = true;
      for (int lf : {1, 2}) {
        d.lfnst_idx = lf;
        push(d);
      }
      d.component = Component::Cr;
      d.lfnst_idx = 1;
      push(d);
    }

  for (int n : {4, 8, 16, 32}) {
    BlockDescriptor d;
    d.width    = n;
    d.height   = n;
    d.standard = Standard::HEVC;
    push(d);  // luma inter
    d.is_intra = true;
    push(d);  // luma intra (DST-VII for 4x4)
    d.component = Component::Cb;
    push(d);
  }
  return protos;
}

// Engine path vs oracle path for one block; returns a mismatch dump or empty.
std::string check_block(const BlockRecord& rec, const KernelStore& engine_store, const KernelSet& oracle_mts)
{
  const StageConfig st      = stage_config_for(rec.desc);
  const auto [hor_t, ver_t] = resolve_types(rec.desc);
  const TransformSpec hor{hor_t, rec.desc.width, Dir::Horizontal};
  const TransformSpec ver{ver_t, rec.desc.height, Dir::Vertical};

  // engine path
  const CoeffBlock mid    = inverse_lfnst(rec.desc, rec.coeffs, engine_store.lfnst, st);
  const CoeffBlock engine = inverse_mts_2d(mid, hor, ver, engine_store.mts, st);

  // oracle path: secondary multiply, explicit zeroing, dense matrix products
  CoeffBlock stage(rec.desc.width, rec.desc.height);
  if (lfnst_eligible(rec.desc)) {
    const LfnstShape shape = lfnst_shape(rec.desc.width, rec.desc.height);
    const IntKernel& t = engine_store.lfnst.kernel(lfnst_set_index(rec.desc.ipm), rec.desc.lfnst_idx - 1,
                                                   shape.out_size);
    const auto v   = scan_extract(rec.coeffs, shape.in_size);
    const auto o   = naive_inverse_lfnst(v, t, st.lfnst_shift, st.mid_bits);
    place_output(o, shape.out_size, stage);
  } else {
    stage = rec.coeffs;
  }
  const int effx = effective_size(rec.desc.width, hor_t);
  const int effy = effective_size(rec.desc.height, ver_t);
  for (int y = 0; y < stage.height; y++)
    for (int x = 0; x < stage.width; x++)
      if (x >= effx || y >= effy)
        stage.at(x, y) = 0;

  const CoeffBlock oracle = naive_inverse_2d(stage, oracle_mts.kernel(ver_t, rec.desc.height),
                                             oracle_mts.kernel(hor_t, rec.desc.width), st.s1, st.s2);

  if (engine == oracle)
    return {};

  std::ostringstream dump;
  dump << "mismatch for block:\n" << serialize_record(rec) << "\n";
  for (size_t i = 0; i < engine.samples.size(); i++)
    if (engine.samples[i] != oracle.samples[i]) {
      dump << "first difference at index " << i << " (x=" << i % rec.desc.width << ", y=" << i / rec.desc.width
           << "): engine " << engine.samples[i] << ", reference " << oracle.samples[i] << "\n";
      break;
    }
  return dump.str();
}

}  // namespace

int cmd_verify(uint64_t blocks, uint64_t seed, const std::string& kernel_dir, std::ostream& out, std::ostream& err)
{
  KernelStore store;
  try {
    store = kernel_dir.empty() ? KernelStore::generate() : KernelStore::load(kernel_dir);
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << "\n";
    return kExitConfig;
  }
  // The reference multiplies with kernels rebuilt from the closed-form basis,
  // so a corrupted kernel file shows up as a mismatch.
  const KernelSet oracle_mts = KernelSet::generate(store.mts.precision_bits());

  const auto protos = verify_protos();
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return lo + int(rng() % uint64_t(hi - lo + 1)); };

  const auto start = std::chrono::steady_clock::now();
  for (uint64_t i = 0; i < blocks; i++) {
    BlockRecord rec;
    rec.desc = protos[i % protos.size()];
    if (rec.desc.is_intra) {
      rec.desc.ipm          = uniform(-14, 83);
      rec.desc.last_sig_pos = uniform(0, 19);
    }
    rec.desc.bit_depth = (i % 7 == 3) ? 8 : (i % 7 == 5) ? 12 : 10;

    rec.coeffs = CoeffBlock(rec.desc.width, rec.desc.height);
    for (auto& s : rec.coeffs.samples)
      s = uniform(-(1 << 17), (1 << 17) - 1);

    const std::string mismatch = check_block(rec, store, oracle_mts);
    if (!mismatch.empty()) {
      err << "verify: block " << i << ": " << mismatch;
      return kExitMismatch;
    }
  }
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "verified " << blocks << " blocks across " << protos.size() << " descriptor combinations: bit-exact ("
      << elapsed << " s)\n";
  return kExitOk;
}

int cmd_rom(const std::string& kernel_dir, std::ostream& out, std::ostream& err)
{
  KernelStore store;
  try {
    store = load_store(kernel_dir);
  } catch (const std::exception& e) {
    err << "rom: " << e.what() << "\n";
    return kExitConfig;
  }
  const RomReport r = rom_budget_check(store);
  out << "MTS ROM:   " << r.mts_bits << " / " << r.mts_budget << " bits (DCT2 " << r.dct2_bits << ", DST7 "
      << r.dst7_bits << ", DCT8 derived: 0, slack " << (r.mts_budget - r.mts_bits) << ")  "
      << (r.mts_ok() ? "[PASS]" : "[FAIL]") << "\n";
  if (!r.symmetric_layout)
    out << "note: odd sub-matrices not symmetric; dense storage counted\n";
  out << "LFNST ROM: " << r.lfnst_bits << " / " << r.lfnst_budget << " bits (slack "
      << (r.lfnst_budget - r.lfnst_bits) << ")  " << (r.lfnst_ok() ? "[PASS]" : "[FAIL]") << "\n";
  return r.mts_ok() && r.lfnst_ok() ? kExitOk : kExitMismatch;
}

int run(int argc, const char* const* argv)
{
  CLI::App app{"inverse transform model and cycle simulator"};
  app.require_subcommand(1);

  const char* env_dir       = std::getenv("ITX_KERNEL_DIR");
  const std::string env_str = env_dir ? env_dir : "";

  std::string gen_out;
  int gen_precision = 8;
  auto* gen         = app.add_subcommand("gen-kernels", "generate the kernel file set");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--precision-bits", gen_precision, "kernel entry width")->default_val(8);

  std::string itx_kernels = env_str, itx_in, itx_out;
  int itx_threads = 1;
  auto* itxc      = app.add_subcommand("itx", "inverse-transform a JSONL block stream");
  itxc->add_option("--kernels", itx_kernels, "kernel directory (default: $ITX_KERNEL_DIR)");
  itxc->add_option("--in", itx_in, "input JSONL file (default: stdin)");
  itxc->add_option("--out", itx_out, "output JSONL file (default: stdout)");
  itxc->add_option("--threads", itx_threads, "worker threads (output keeps input order)")->default_val(1);

  SimulateArgs sim;
  sim.kernel_dir = env_str;
  std::string sim_in, sim_out;
  auto* simc = app.add_subcommand("simulate", "cycle-accurate pipeline simulation");
  simc->add_option("--kernels", sim.kernel_dir, "kernel directory (default: $ITX_KERNEL_DIR)");
  simc->add_option("--in", sim_in, "input JSONL file (default: stdin)");
  simc->add_option("--out", sim_out, "output file (default: stdout)");
  simc->add_option("--frame", sim.frame, "synthesize one frame, WxH (e.g. 3840x2160)");
  simc->add_option("--chroma", sim.chroma, "chroma format: 420, 422 or 444")->default_val(422);
  simc->add_option("--mults", sim.mults, "multipliers per core (32 or 64)")->default_val(32);
  simc->add_option("--clock", sim.clock, "core clock in Hz")->default_val(600e6);
  simc->add_option("--trace", sim.trace_file, "write per-cycle trace to this file");

  uint64_t ver_blocks = 1000, ver_seed = 1;
  std::string ver_kernels = env_str;
  auto* verc = app.add_subcommand("verify", "differential check of the engine against the dense reference");
  verc->add_option("--random", ver_blocks, "number of random blocks")->default_val(1000);
  verc->add_option("--seed", ver_seed, "RNG seed")->default_val(1);
  verc->add_option("--kernels", ver_kernels, "kernel directory (default: generated in memory)");

  std::string rom_kernels = env_str;
  auto* romc              = app.add_subcommand("rom", "modeled ROM occupancy vs budgets");
  romc->add_option("--kernels", rom_kernels, "kernel directory (default: $ITX_KERNEL_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  auto with_streams = [&](const std::string& in_file, const std::string& out_file, auto fn) {
    std::ifstream fin;
    std::ofstream fout;
    if (!in_file.empty()) {
      fin.open(in_file);
      if (!fin) {
        std::cerr << "cannot open input file " << in_file << "\n";
        return kExitConfig;
      }
    }
    if (!out_file.empty()) {
      fout.open(out_file, std::ios::trunc);
      if (!fout) {
        std::cerr << "cannot open output file " << out_file << "\n";
        return kExitConfig;
      }
    }
    return fn(in_file.empty() ? std::cin : fin, out_file.empty() ? std::cout : fout);
  };

  if (gen->parsed())
    return cmd_gen_kernels(gen_out, gen_precision, std::cerr);
  if (itxc->parsed())
    return with_streams(itx_in, itx_out, [&](std::istream& in, std::ostream& out) {
      return cmd_itx(in, out, std::cerr, itx_kernels, itx_threads);
    });
  if (simc->parsed())
    return with_streams(sim_in, sim_out, [&](std::istream& in, std::ostream& out) {
      return cmd_simulate(sim, in, out, std::cerr);
    });
  if (verc->parsed())
    return cmd_verify(ver_blocks, ver_seed, ver_kernels, std::cout, std::cerr);
  if (romc->parsed())
    return cmd_rom(rom_kernels, std::cout, std::cerr);
  return kExitConfig;
}

}  // namespace itx::cli
