#pragma once

#include <string>

#include "itx/signaling.hpp"
#include "itx/types.hpp"

namespace itx {

// One line of the JSONL block-stream format (version 1; see docs/formats.md).
// Required: width, height, coeffs (row-major, width*height entries). All
// other fields carry defaults matching BlockDescriptor.

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlockRecord {
  BlockDescriptor desc;
  CoeffBlock coeffs;
};

BlockRecord parse_record(const std::string& line);               // throws FormatError
std::string serialize_record(const BlockRecord& r);              // input-side record
std::string serialize_result(const BlockRecord& r, const CoeffBlock& residuals);
std::string serialize_error(size_t index, const std::vector<Violation>& violations);

}  // namespace itx
