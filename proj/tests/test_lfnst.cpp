#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "itx/kernel_store.hpp"
#include "itx/lfnst.hpp"
#include "itx/oracle.hpp"

using namespace itx;

namespace {

BlockDescriptor eligible_desc(int w, int h)
{
  BlockDescriptor d;
  d.width        = w;
  d.height       = h;
  d.standard     = Standard::VVC;
  d.component    = Component::Luma;
  d.is_intra     = true;
  d.tu_mts_idx   = 0;
  d.ipm          = 30;
  d.lfnst_idx    = 1;
  d.last_sig_pos = 3;
  return d;
}

}  // namespace

TEST_CASE("intra-mode to kernel-set mapping")
{
  // class boundaries, both directions of every edge
  CHECK(lfnst_set_index(-14) == 1);
  CHECK(lfnst_set_index(-5) == 1);
  CHECK(lfnst_set_index(-1) == 1);
  CHECK(lfnst_set_index(0) == 0);
  CHECK(lfnst_set_index(1) == 0);
  CHECK(lfnst_set_index(2) == 1);
  CHECK(lfnst_set_index(12) == 1);
  CHECK(lfnst_set_index(13) == 2);
  CHECK(lfnst_set_index(23) == 2);
  CHECK(lfnst_set_index(24) == 3);
  CHECK(lfnst_set_index(30) == 3);
  CHECK(lfnst_set_index(44) == 3);
  CHECK(lfnst_set_index(45) == 2);
  CHECK(lfnst_set_index(55) == 2);
  CHECK(lfnst_set_index(56) == 1);
  CHECK(lfnst_set_index(80) == 1);
  CHECK(lfnst_set_index(81) == 0);
  CHECK(lfnst_set_index(82) == 0);
  CHECK(lfnst_set_index(83) == 0);
  CHECK_THROWS_AS(lfnst_set_index(-15), std::invalid_argument);
  CHECK_THROWS_AS(lfnst_set_index(84), std::invalid_argument);

  // the mapping is symmetric around the diagonal mode band
  for (int ipm = 2; ipm <= 66; ipm++)
    CHECK(lfnst_set_index(ipm) == lfnst_set_index(68 - ipm));
}

TEST_CASE("block-class shapes and nominal rates")
{
  const LfnstShape s44 = lfnst_shape(4, 4);
  CHECK(s44.in_size == 8);
  CHECK(s44.out_size == 16);
  CHECK(s44.in_rate == Rational(1, 1));
  CHECK(s44.out_rate == Rational(2, 1));

  const LfnstShape s88 = lfnst_shape(8, 8);
  CHECK(s88.in_size == 8);
  CHECK(s88.out_size == 48);
  CHECK(s88.in_rate == Rational(1, 3));
  CHECK(s88.out_rate == Rational(2, 1));

  for (auto [w, h] : std::vector<std::pair<int, int>>{{4, 8}, {8, 4}, {4, 32}, {16, 4}}) {
    const LfnstShape s = lfnst_shape(w, h);
    CHECK(s.in_size == 16);
    CHECK(s.out_size == 16);
    CHECK(s.in_rate == Rational(2, 1));
  }

  for (auto [w, h] : std::vector<std::pair<int, int>>{{8, 16}, {16, 16}, {64, 64}, {32, 8}}) {
    const LfnstShape s = lfnst_shape(w, h);
    CHECK(s.in_size == 16);
    CHECK(s.out_size == 48);
    CHECK(s.in_rate == Rational(2, 3));
    CHECK(s.out_rate == Rational(2, 1));
  }
}

TEST_CASE("eligibility gate")
{
  CHECK(lfnst_eligible(eligible_desc(8, 8)));
  CHECK(lfnst_eligible(eligible_desc(4, 4)));
  CHECK(lfnst_eligible(eligible_desc(16, 64)));

  auto d = eligible_desc(8, 8);
  d.last_sig_pos = 7;
  CHECK(lfnst_eligible(d));  // < 8 for the exact 4x4 / 8x8 classes
  d.last_sig_pos = 8;
  CHECK_FALSE(lfnst_eligible(d));

  d              = eligible_desc(16, 16);
  d.last_sig_pos = 15;
  CHECK(lfnst_eligible(d));  // < 16 elsewhere
  d.last_sig_pos = 16;
  CHECK_FALSE(lfnst_eligible(d));

  d           = eligible_desc(8, 8);
  d.lfnst_idx = 0;
  CHECK_FALSE(lfnst_eligible(d));

  d          = eligible_desc(8, 8);
  d.is_intra = false;
  CHECK_FALSE(lfnst_eligible(d));

  d            = eligible_desc(8, 8);
  d.tu_mts_idx = 1;  // anything but DCT-II in both directions disables it
  CHECK_FALSE(lfnst_eligible(d));

  d          = eligible_desc(8, 8);
  d.standard = Standard::HEVC;
  CHECK_FALSE(lfnst_eligible(d));

  CHECK_FALSE(lfnst_eligible(eligible_desc(4, 2)));
}

TEST_CASE("diagonal scan of the top-left 4x4 region")
{
  const auto& scan = diag_scan_4x4();
  CHECK(scan[0].x == 0);
  CHECK(scan[0].y == 0);
  CHECK(scan[1].x == 0);
  CHECK(scan[1].y == 1);
  CHECK(scan[2].x == 1);
  CHECK(scan[2].y == 0);
  CHECK(scan[15].x == 3);
  CHECK(scan[15].y == 3);

  // a permutation of the 16 cells, anti-diagonal index never decreases
  std::set<std::pair<int, int>> seen;
  int prev_d = 0;
  for (const ScanPos& p : scan) {
    CHECK(p.x >= 0);
    CHECK(p.x < 4);
    CHECK(p.y >= 0);
    CHECK(p.y < 4);
    CHECK(p.x + p.y >= prev_d);
    prev_d = p.x + p.y;
    seen.insert({p.x, p.y});
  }
  CHECK(seen.size() == 16);
}

TEST_CASE("scan extraction reads in scan order and ignores the rest")
{
  CoeffBlock b(8, 8);
  const auto& scan = diag_scan_4x4();
  for (int i = 0; i < 16; i++)
    b.at(scan[i].x, scan[i].y) = 100 + i;
  b.at(7, 7) = 999;  // outside the scanned region

  const auto v8 = scan_extract(b, 8);
  REQUIRE(v8.size() == 8);
  for (int i = 0; i < 8; i++)
    CHECK(v8[i] == 100 + i);

  const auto v16 = scan_extract(b, 16);
  CHECK(v16[15] == 115);
}

TEST_CASE("output placement clears the block and stays inside its region")
{
  std::vector<coeff_t> out48(48);
  for (int i = 0; i < 48; i++)
    out48[i] = i + 1;

  CoeffBlock b(16, 16);
  b.at(12, 12) = 777;  // stale content must be cleared
  place_output(out48, 48, b);

  int nonzero = 0;
  for (int y = 0; y < 16; y++)
    for (int x = 0; x < 16; x++) {
      if (b.at(x, y) != 0)
        nonzero++;
      if (x >= 8 || y >= 8)
        CHECK(b.at(x, y) == 0);
      if (x >= 4 && y >= 4)
        CHECK(b.at(x, y) == 0);  // bottom-right 4x4 of the 8x8 corner stays empty
    }
  CHECK(nonzero == 48);

  // first 16 go to the top-left 4x4 in scan order
  const auto& scan = diag_scan_4x4();
  for (int i = 0; i < 16; i++)
    CHECK(b.at(scan[i].x, scan[i].y) == i + 1);
  // next 16 to the 4x4 block to the right, last 16 below
  for (int i = 0; i < 16; i++) {
    CHECK(b.at(scan[i].x + 4, scan[i].y) == 17 + i);
    CHECK(b.at(scan[i].x, scan[i].y + 4) == 33 + i);
  }

  CoeffBlock small(4, 4);
  std::vector<coeff_t> out16(16, 5);
  place_output(out16, 16, small);
  for (coeff_t v : small.samples)
    CHECK(v == 5);

  CHECK_THROWS_AS(place_output(out48, 48, small), std::invalid_argument);
  CHECK_THROWS_AS(place_output(out16, 20, small), std::invalid_argument);
}

TEST_CASE("secondary stage matches the dense reference on every shape")
{
  const KernelStore store = KernelStore::generate();
  const StageConfig cfg;
  std::mt19937 rng(404);

  for (auto [w, h] : std::vector<std::pair<int, int>>{{4, 4}, {8, 8}, {4, 8}, {16, 4}, {16, 16}, {32, 64}}) {
    for (int kernel_idx = 1; kernel_idx <= 2; kernel_idx++) {
      BlockDescriptor d = eligible_desc(w, h);
      d.lfnst_idx       = kernel_idx;
      d.ipm             = int(rng() % 98) - 14;
      const LfnstShape shape = lfnst_shape(w, h);
      d.last_sig_pos         = int(rng() % (shape.in_size == 8 ? 8 : 16));

      CoeffBlock in(w, h);
      // populate the whole block; only the scanned prefix may matter
      for (coeff_t& v : in.samples)
        v = int(rng() % 2048) - 1024;

      const IntKernel& k =
          store.lfnst.kernel(lfnst_set_index(d.ipm), kernel_idx - 1, shape.out_size);
      const auto coeffs = scan_extract(in, shape.in_size);
      const auto dense  = naive_inverse_lfnst(coeffs, k, cfg.lfnst_shift, cfg.mid_bits);
      CoeffBlock ref(w, h);
      place_output(dense, shape.out_size, ref);

      CHECK(inverse_lfnst(d, in, store.lfnst, cfg) == ref);
    }
  }
}

TEST_CASE("scan positions beyond the input length are ignored")
{
  const KernelStore store = KernelStore::generate();
  const StageConfig cfg;
  const BlockDescriptor d = eligible_desc(8, 8);  // in_size 8

  CoeffBlock a(8, 8), b(8, 8);
  const auto& scan = diag_scan_4x4();
  for (int i = 0; i < 16; i++) {
    a.at(scan[i].x, scan[i].y) = i < 8 ? 50 - i : 123;
    b.at(scan[i].x, scan[i].y) = i < 8 ? 50 - i : -77;
  }
  CHECK(inverse_lfnst(d, a, store.lfnst, cfg) == inverse_lfnst(d, b, store.lfnst, cfg));
}

TEST_CASE("ineligible blocks bypass unchanged")
{
  const KernelStore store = KernelStore::generate();
  const StageConfig cfg;
  BlockDescriptor d = eligible_desc(8, 8);
  d.lfnst_idx       = 0;

  CoeffBlock in(8, 8);
  std::mt19937 rng(9);
  for (coeff_t& v : in.samples)
    v = int(rng() % 1000) - 500;
  CHECK(inverse_lfnst(d, in, store.lfnst, cfg) == in);
}

TEST_CASE("kernel lookup rejects bad indices")
{
  const KernelStore store = KernelStore::generate();
  CHECK_THROWS_AS(store.lfnst.kernel(4, 0, 16), std::invalid_argument);
  CHECK_THROWS_AS(store.lfnst.kernel(0, 2, 16), std::invalid_argument);
  CHECK_THROWS_AS(store.lfnst.kernel(0, 0, 32), std::invalid_argument);
}
