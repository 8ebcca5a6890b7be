#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "itx/engine.hpp"
#include "itx/kernel_store.hpp"
#include "itx/lfnst.hpp"
#include "itx/signaling.hpp"

using namespace itx;

namespace {

bool has_code(const std::vector<Violation>& v, const std::string& code)
{
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == code; });
}

BlockDescriptor vvc_luma(int w, int h)
{
  BlockDescriptor d;
  d.width    = w;
  d.height   = h;
  d.standard = Standard::VVC;
  return d;
}

}  // namespace

TEST_CASE("explicit transform-pair table")
{
  CHECK(mts_pair(0) == std::pair{TrType::DCT2, TrType::DCT2});
  CHECK(mts_pair(1) == std::pair{TrType::DST7, TrType::DST7});
  CHECK(mts_pair(2) == std::pair{TrType::DCT8, TrType::DST7});
  CHECK(mts_pair(3) == std::pair{TrType::DST7, TrType::DCT8});
  CHECK(mts_pair(4) == std::pair{TrType::DCT8, TrType::DCT8});
  CHECK_THROWS_AS(mts_pair(5), std::invalid_argument);
  CHECK_THROWS_AS(mts_pair(-1), std::invalid_argument);
}

TEST_CASE("resolved pairs: HEVC implicit DST-VII corner")
{
  BlockDescriptor d = vvc_luma(4, 4);
  d.standard        = Standard::HEVC;
  d.is_intra        = true;
  CHECK(resolve_types(d) == std::pair{TrType::DST7, TrType::DST7});

  d.is_intra = false;
  CHECK(resolve_types(d) == std::pair{TrType::DCT2, TrType::DCT2});

  d.is_intra  = true;
  d.component = Component::Cb;
  CHECK(resolve_types(d) == std::pair{TrType::DCT2, TrType::DCT2});

  d           = vvc_luma(8, 8);
  d.standard  = Standard::HEVC;
  d.is_intra  = true;
  CHECK(resolve_types(d) == std::pair{TrType::DCT2, TrType::DCT2});

  d            = vvc_luma(8, 8);
  d.tu_mts_idx = 3;
  CHECK(resolve_types(d) == std::pair{TrType::DST7, TrType::DCT8});
}

TEST_CASE("clean descriptors validate clean")
{
  CHECK(validate(vvc_luma(4, 4)).empty());
  CHECK(validate(vvc_luma(64, 64)).empty());
  CHECK(validate(vvc_luma(4, 64)).empty());

  BlockDescriptor d = vvc_luma(32, 16);
  d.tu_mts_idx      = 4;
  CHECK(validate(d).empty());

  d              = vvc_luma(8, 8);
  d.is_intra     = true;
  d.lfnst_idx    = 2;
  d.ipm          = -14;
  d.last_sig_pos = 5;
  CHECK(validate(d).empty());

  d          = vvc_luma(16, 16);
  d.standard = Standard::HEVC;
  CHECK(validate(d).empty());
}

TEST_CASE("size rules")
{
  CHECK(has_code(validate(vvc_luma(6, 8)), "size-invalid"));
  CHECK(has_code(validate(vvc_luma(8, 2)), "size-invalid"));
  CHECK(has_code(validate(vvc_luma(128, 8)), "size-invalid"));
  // one violation per offending dimension
  CHECK(validate(vvc_luma(6, 3)).size() == 2);

  BlockDescriptor d = vvc_luma(16, 8);
  d.standard        = Standard::HEVC;
  CHECK(has_code(validate(d), "hevc-size"));
  d.width = d.height = 64;
  CHECK(has_code(validate(d), "hevc-size"));
}

TEST_CASE("explicit-selection rules")
{
  BlockDescriptor d = vvc_luma(64, 8);
  d.tu_mts_idx      = 1;
  CHECK(has_code(validate(d), "mts-size"));

  d = vvc_luma(32, 32);
  d.tu_mts_idx = 1;
  CHECK(validate(d).empty());

  d            = vvc_luma(8, 8);
  d.component  = Component::Cr;
  d.tu_mts_idx = 2;
  CHECK(has_code(validate(d), "mts-chroma"));

  d            = vvc_luma(8, 8);
  d.tu_mts_idx = 5;
  CHECK(has_code(validate(d), "mts-range"));

  d.tu_mts_idx = -1;
  CHECK(has_code(validate(d), "implicit-mts-unsupported"));

  d            = vvc_luma(8, 8);
  d.standard   = Standard::HEVC;
  d.tu_mts_idx = 1;
  CHECK(has_code(validate(d), "hevc-mts-explicit"));
}

TEST_CASE("secondary-transform signalling rules")
{
  BlockDescriptor d = vvc_luma(8, 8);
  d.lfnst_idx       = 3;
  CHECK(has_code(validate(d), "lfnst-idx-range"));

  d           = vvc_luma(8, 8);
  d.lfnst_idx = 1;
  d.ipm       = 90;
  CHECK(has_code(validate(d), "ipm-range"));
  d.ipm = -15;
  CHECK(has_code(validate(d), "ipm-range"));
  d.ipm          = 40;
  d.last_sig_pos = -1;
  CHECK(has_code(validate(d), "last-sig-pos-range"));

  // with the secondary stage off, ipm is don't-care
  d              = vvc_luma(8, 8);
  d.lfnst_idx    = 0;
  d.ipm          = 999;
  CHECK(validate(d).empty());

  d           = vvc_luma(8, 8);
  d.standard  = Standard::HEVC;
  d.lfnst_idx = 1;
  CHECK(has_code(validate(d), "hevc-lfnst"));
}

TEST_CASE("interface-only and bit-depth rules")
{
  BlockDescriptor d = vvc_luma(17, 3);  // nonsense sizes must not add noise for AVC
  d.standard        = Standard::AVC;
  const auto v      = validate(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0].code == "avc-interface-only");

  d.bit_depth  = 7;
  const auto w = validate(d);
  CHECK(w.size() == 2);
  CHECK(has_code(w, "bit-depth-range"));

  BlockDescriptor e = vvc_luma(8, 8);
  e.bit_depth       = 17;
  CHECK(has_code(validate(e), "bit-depth-range"));
  e.bit_depth = 16;
  CHECK(validate(e).empty());
}

TEST_CASE("every accepted descriptor processes end to end")
{
  // fuzz: anything validate() passes must run through both stages without
  // throwing and produce a block of the right shape
  const KernelStore store = KernelStore::generate();
  std::mt19937 rng(777);
  const int sizes[] = {2, 4, 6, 8, 16, 32, 48, 64};

  int accepted = 0;
  for (int i = 0; i < 20000; i++) {
    BlockDescriptor d;
    d.width        = sizes[rng() % 8];
    d.height       = sizes[rng() % 8];
    d.standard     = Standard(rng() % 3);
    d.component    = Component(rng() % 3);
    d.tu_mts_idx   = int(rng() % 7) - 2;
    d.is_intra     = rng() % 2;
    d.ipm          = int(rng() % 120) - 20;
    d.lfnst_idx    = int(rng() % 4);
    d.last_sig_pos = int(rng() % 40) - 2;
    d.bit_depth    = int(rng() % 12) + 6;

    if (!validate(d).empty())
      continue;
    accepted++;

    CoeffBlock in(d.width, d.height);
    for (coeff_t& v : in.samples)
      v = int(rng() % (1 << 18)) - (1 << 17);

    const auto [hor, ver]  = resolve_types(d);
    const StageConfig cfg  = StageConfig::for_bit_depth(d.bit_depth);
    const CoeffBlock mid   = inverse_lfnst(d, in, store.lfnst, cfg);
    const CoeffBlock out   = inverse_mts_2d(mid, {hor, d.width, Dir::Horizontal},
                                            {ver, d.height, Dir::Vertical}, store.mts, cfg);
    REQUIRE(out.width == d.width);
    REQUIRE(out.height == d.height);
    REQUIRE(out.bits == kOutputBits);
    for (coeff_t s : out.samples)
      REQUIRE(std::abs(s) <= (1 << (kOutputBits - 1)));
  }
  CHECK(accepted > 150);
}
