#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "itx/kernel_store.hpp"
#include "itx/records.hpp"

using namespace itx;
using namespace itx::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag)
  {
    path = fs::temp_directory_path() / (std::string("itx_cli_") + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// generated kernel files shared by the whole binary's test cases
const fs::path& kernel_dir()
{
  static TempDir dir("kernels");
  static bool ready = [] {
    std::ostringstream err;
    REQUIRE(cmd_gen_kernels(dir.path.string(), 8, err) == kExitOk);
    return true;
  }();
  (void)ready;
  return dir.path;
}

std::string record_line(int w, int h, const char* extra = "")
{
  std::string coeffs = "[";
  for (int i = 0; i < w * h; i++)
    coeffs += (i ? "," : "") + std::to_string((i * 37 % 255) - 127);
  coeffs += "]";
  return "{\"width\":" + std::to_string(w) + ",\"height\":" + std::to_string(h) + std::string(extra) +
         ",\"coeffs\":" + coeffs + "}";
}

}  // namespace

TEST_CASE("gen-kernels writes the complete file set")
{
  int files = 0;
  for (const auto& e : fs::directory_iterator(kernel_dir())) {
    CHECK(e.path().extension() == kKernelFileExt);
    files++;
  }
  CHECK(files == 25);
}

TEST_CASE("gen-kernels failure leaves nothing behind")
{
  TempDir tmp("genfail");
  const fs::path blocker = tmp.path / "blocker";
  std::ofstream(blocker) << "not a directory";

  std::ostringstream err;
  CHECK(cmd_gen_kernels((blocker / "sub").string(), 8, err) == kExitConfig);
  CHECK_FALSE(err.str().empty());
  CHECK(fs::is_regular_file(blocker));  // untouched, and no partial output anywhere under it
}

TEST_CASE("itx: transforms a stream and isolates bad records")
{
  std::istringstream in(record_line(4, 4) + "\n" +
                        "\n" +  // blank lines are skipped
                        record_line(6, 4) + "\n" +  // invalid size -> error object
                        record_line(8, 8, ",\"tu_mts_idx\":1,\"is_intra\":true") + "\n");
  std::ostringstream out, err;
  REQUIRE(cmd_itx(in, out, err, kernel_dir().string(), 1) == kExitOk);

  std::istringstream lines(out.str());
  std::string l1, l2, l3, more;
  REQUIRE(std::getline(lines, l1));
  REQUIRE(std::getline(lines, l2));
  REQUIRE(std::getline(lines, l3));
  CHECK_FALSE(std::getline(lines, more));

  const auto j1 = nlohmann::json::parse(l1);
  CHECK(j1.contains("residuals"));
  CHECK(j1["residuals"].size() == 16);

  const auto j2 = nlohmann::json::parse(l2);
  CHECK(j2["record"] == 1);
  CHECK(j2["errors"][0]["code"] == "size-invalid");

  const auto j3 = nlohmann::json::parse(l3);
  CHECK(j3.contains("residuals"));
  CHECK(j3["residuals"].size() == 64);
}

TEST_CASE("itx: malformed JSON aborts with the line number")
{
  std::istringstream in(record_line(4, 4) + "\n{broken\n");
  std::ostringstream out, err;
  CHECK(cmd_itx(in, out, err, kernel_dir().string(), 1) == kExitFormat);
  CHECK(err.str().find("line 2") != std::string::npos);
}

TEST_CASE("itx: missing kernel directory is a config error")
{
  std::istringstream in(record_line(4, 4));
  std::ostringstream out, err;
  CHECK(cmd_itx(in, out, err, "", 1) == kExitConfig);
  CHECK(err.str().find("no kernel directory") != std::string::npos);

  std::istringstream in2(record_line(4, 4));
  CHECK(cmd_itx(in2, out, err, "/nonexistent/dir", 1) == kExitConfig);
}

TEST_CASE("itx: multithreaded output matches single-threaded order")
{
  std::string stream;
  for (int i = 0; i < 12; i++)
    stream += record_line(4 << (i % 3), 4 << ((i + 1) % 3)) + "\n";
  stream += record_line(6, 4) + "\n";  // keep an error object in the mix

  std::istringstream in1(stream), in4(stream);
  std::ostringstream out1, out4, err;
  REQUIRE(cmd_itx(in1, out1, err, kernel_dir().string(), 1) == kExitOk);
  REQUIRE(cmd_itx(in4, out4, err, kernel_dir().string(), 4) == kExitOk);
  CHECK(out1.str() == out4.str());
}

TEST_CASE("verify: engine and reference agree")
{
  std::ostringstream out, err;
  REQUIRE(cmd_verify(120, 7, "", out, err) == kExitOk);
  CHECK(out.str().find("bit-exact") != std::string::npos);
  CHECK(err.str().empty());

  std::ostringstream out0, err0;
  CHECK(cmd_verify(0, 1, "", out0, err0) == kExitOk);
  CHECK(out0.str().find("0 blocks") != std::string::npos);
}

TEST_CASE("verify: detects a corrupted kernel file")
{
  TempDir tmp("tamper");
  std::ostringstream gen_err;
  REQUIRE(cmd_gen_kernels(tmp.path.string(), 8, gen_err) == kExitOk);

  const fs::path f = tmp.path / kernel_file_name(KernelKind::DST7, 8);
  IntKernel k      = read_kernel_file(f);
  k.m[0]           = int16_t(k.m[0] + 10);
  write_kernel_file(f, k);

  std::ostringstream out, err;
  CHECK(cmd_verify(200, 3, tmp.path.string(), out, err) == kExitMismatch);
  CHECK(err.str().find("mismatch") != std::string::npos);
  CHECK(err.str().find("first difference") != std::string::npos);
}

TEST_CASE("rom: reports occupancy against the budgets")
{
  std::ostringstream out, err;
  REQUIRE(cmd_rom(kernel_dir().string(), out, err) == kExitOk);
  const std::string s = out.str();
  CHECK(s.find("15888 / 17408") != std::string::npos);
  CHECK(s.find("65536 / 65536") != std::string::npos);
  CHECK(s.find("DCT8 derived: 0") != std::string::npos);
  CHECK(s.find("[FAIL]") == std::string::npos);

  std::ostringstream out2, err2;
  CHECK(cmd_rom("", out2, err2) == kExitConfig);
}

TEST_CASE("simulate: frame mode emits one summary object")
{
  SimulateArgs args;
  args.frame = "128x64";
  std::istringstream in;
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(args, in, out, err) == kExitOk);

  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["frame"]["width"] == 128);
  CHECK(j["frame"]["chroma"] == 422);
  CHECK(j["total_cycles"].get<uint64_t>() > 0);
  CHECK(j["l1"] == 28);
  CHECK(j["l2"] == 36);
  CHECK(j["max_mults"]["mts"] == 32);
}

TEST_CASE("simulate: bad arguments")
{
  std::istringstream in;
  std::ostringstream out, err;

  SimulateArgs bad_frame;
  bad_frame.frame = "128x";
  CHECK(cmd_simulate(bad_frame, in, out, err) == kExitFormat);

  SimulateArgs bad_mults;
  bad_mults.mults = 48;
  CHECK(cmd_simulate(bad_mults, in, out, err) == kExitConfig);

  SimulateArgs bad_chroma;
  bad_chroma.frame  = "128x64";
  bad_chroma.chroma = 411;
  CHECK(cmd_simulate(bad_chroma, in, out, err) == kExitConfig);
}

TEST_CASE("simulate: stream mode reports per block plus a summary")
{
  TempDir tmp("trace");
  SimulateArgs args;
  args.kernel_dir = kernel_dir().string();
  args.trace_file = (tmp.path / "trace.txt").string();

  std::istringstream in(
      record_line(8, 8, ",\"is_intra\":true,\"lfnst_idx\":1,\"ipm\":30,\"last_sig_pos\":5") + "\n" +
      record_line(6, 6) + "\n" +
      record_line(16, 16) + "\n");
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(args, in, out, err) == kExitOk);

  std::istringstream lines(out.str());
  std::string l1, l2, l3, l4;
  REQUIRE(std::getline(lines, l1));
  REQUIRE(std::getline(lines, l2));
  REQUIRE(std::getline(lines, l3));
  REQUIRE(std::getline(lines, l4));

  const auto j1 = nlohmann::json::parse(l1);
  CHECK(j1["report"]["lfnst"]["active"] == true);
  CHECK(j1["report"]["total_cycles"].get<int>() > 0);
  CHECK(j1.contains("residuals"));

  const auto j2 = nlohmann::json::parse(l2);
  CHECK(j2["errors"][0]["code"] == "size-invalid");

  const auto j4 = nlohmann::json::parse(l4);
  CHECK(j4["summary"]["blocks"] == 2);
  CHECK(j4["summary"]["samples"] == 64 + 256);

  std::ifstream trace(args.trace_file);
  std::string first;
  REQUIRE(std::getline(trace, first));
  CHECK(first.starts_with("# itx-trace v1 block 8x8"));
}

TEST_CASE("argv entry point")
{
  const auto runv = [](std::initializer_list<const char*> args) {
    std::vector<const char*> v(args);
    return run(int(v.size()), v.data());
  };

  CHECK(runv({"itx", "--help"}) == kExitOk);
  CHECK(runv({"itx"}) == kExitConfig);                       // subcommand required
  CHECK(runv({"itx", "unknown-subcommand"}) == kExitConfig);
  CHECK(runv({"itx", "gen-kernels"}) == kExitConfig);        // --out required
  CHECK(runv({"itx", "simulate", "--mults", "48", "--frame", "64x64"}) == kExitConfig);
  CHECK(runv({"itx", "verify", "--random", "40", "--seed", "2"}) == kExitOk);
}
