#include "itx/records.hpp"

#include <json.hpp>

namespace itx {

using nlohmann::json;

static Component parse_component(const std::string& s)
{
  if (s == "Y")
    return Component::Luma;
  if (s == "Cb")
    return Component::Cb;
  if (s == "Cr")
    return Component::Cr;
  throw FormatError("component must be \"Y\", \"Cb\" or \"Cr\", got \"" + s + "\"");
}

static Standard parse_standard(const std::string& s)
{
  if (s == "AVC")
    return Standard::AVC;
  if (s == "HEVC")
    return Standard::HEVC;
  if (s == "VVC")
    return Standard::VVC;
  throw FormatError("standard must be \"AVC\", \"HEVC\" or \"VVC\", got \"" + s + "\"");
}

BlockRecord parse_record(const std::string& line)
{
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw FormatError("record must be a JSON object");

  BlockRecord r;
  try {
    r.desc.width  = j.at("width").get<int>();
    r.desc.height = j.at("height").get<int>();
    if (j.contains("component"))
      r.desc.component = parse_component(j["component"].get<std::string>());
    if (j.contains("standard"))
      r.desc.standard = parse_standard(j["standard"].get<std::string>());
    r.desc.tu_mts_idx   = j.value("tu_mts_idx", 0);
    r.desc.is_intra     = j.value("is_intra", false);
    r.desc.ipm          = j.value("ipm", 0);
    r.desc.lfnst_idx    = j.value("lfnst_idx", 0);
    r.desc.last_sig_pos = j.value("last_sig_pos", 0);
    r.desc.bit_depth    = j.value("bit_depth", 10);

    const auto& c = j.at("coeffs");
    if (!c.is_array())
      throw FormatError("coeffs must be an array");
    if (r.desc.width < 1 || r.desc.height < 1 || r.desc.width > 256 || r.desc.height > 256)
      throw FormatError("width/height outside sane range [1,256]");
    if (int(c.size()) != r.desc.width * r.desc.height)
      throw FormatError("coeffs has " + std::to_string(c.size()) + " entries, expected " +
                        std::to_string(r.desc.width * r.desc.height));
    r.coeffs = CoeffBlock(r.desc.width, r.desc.height);
    for (size_t i = 0; i < c.size(); i++)
      r.coeffs.samples[i] = c[i].get<coeff_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad record field: ") + e.what());
  }
  return r;
}

static json desc_json(const BlockDescriptor& d)
{
  json j;
  j["width"]        = d.width;
  j["height"]       = d.height;
  j["component"]    = to_string(d.component);
  j["standard"]     = to_string(d.standard);
  j["tu_mts_idx"]   = d.tu_mts_idx;
  j["is_intra"]     = d.is_intra;
  j["ipm"]          = d.ipm;
  j["lfnst_idx"]    = d.lfnst_idx;
  j["last_sig_pos"] = d.last_sig_pos;
  j["bit_depth"]    = d.bit_depth;
  return j;
}

std::string serialize_record(const BlockRecord& r)
{
  json j      = desc_json(r.desc);
  j["coeffs"] = r.coeffs.samples;
  return j.dump();
}

std::string serialize_result(const BlockRecord& r, const CoeffBlock& residuals)
{
  json j         = desc_json(r.desc);
  j["residuals"] = residuals.samples;
  return j.dump();
}

std::string serialize_error(size_t index, const std::vector<Violation>& violations)
{
  json errs = json::array();
  for (const auto& v : violations)
    errs.push_back({{"code", v.code}, {"message", v.message}});
  return json{{"record", index}, {"errors", errs}}.dump();
}

}  // namespace itx
