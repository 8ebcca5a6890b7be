#pragma once

#include <string>
#include <utility>
#include <vector>

#include "itx/types.hpp"

namespace itx {

// Everything the decoder knows about one transform block before the inverse
// transform runs. ipm / lfnst_idx / last_sig_pos only matter when the
// secondary stage is in play (lfnst_idx > 0 marks it as signalled).
struct BlockDescriptor {
  int width           = 0;
  int height          = 0;
  Component component = Component::Luma;
  Standard standard   = Standard::VVC;
  int tu_mts_idx      = 0;  // 0..4 explicit signalling; -1 reserved for implicit mode
  bool is_intra       = false;
  int ipm             = 0;  // intra prediction mode, -14..83 (negative: wide angles)
  int lfnst_idx       = 0;  // 0 = off, 1..2 = kernel choice
  int last_sig_pos    = 0;  // diagonal-scan index of the last significant coefficient
  int bit_depth       = 10;
};

// tu_mts_idx -> (horizontal, vertical) transform pair.
std::pair<TrType, TrType> mts_pair(int tu_mts_idx);

// Transform pair a conforming decoder applies, including the fixed rule that
// 4x4 intra luma under HEVC uses DST-VII in both directions.
std::pair<TrType, TrType> resolve_types(const BlockDescriptor& d);

struct Violation {
  std::string code;
  std::string message;
  bool operator==(const Violation& o) const = default;
};

// All conformance violations of the descriptor; empty means processable.
// Pure: depends only on the descriptor, and the set of violations does not
// depend on rule evaluation order.
std::vector<Violation> validate(const BlockDescriptor& d);

}  // namespace itx
