#include "vsm/volume.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "vsm/errors.hpp"
#include "vsm/io_util.hpp"

namespace vsm {

using nlohmann::json;

std::string to_string(OperativeStatus s) {
  return s == OperativeStatus::pre_op ? "pre_op" : "post_op";
}

std::string to_string(Modality m) {
  switch (m) {
    case Modality::T1C: return "T1C";
    case Modality::T2: return "T2";
    default: return "unknown";
  }
}

OperativeStatus parse_operative_status(const std::string& s) {
  if (s == "pre_op") return OperativeStatus::pre_op;
  if (s == "post_op") return OperativeStatus::post_op;
  throw FormatError("invalid operative_status: " + s);
}

Modality parse_modality(const std::string& s) {
  if (s == "T1C") return Modality::T1C;
  if (s == "T2") return Modality::T2;
  if (s == "unknown") return Modality::unknown;
  throw FormatError("invalid modality: " + s);
}

void validate(const LabelVolume& volume) {
  for (int i = 0; i < 3; ++i) {
    if (volume.dims[i] == 0) throw FormatError("dims must be strictly positive");
    if (!(volume.spacing_mm[i] > 0.0) || !std::isfinite(volume.spacing_mm[i])) {
      throw FormatError("spacing_mm must be strictly positive");
    }
  }
  if (volume.voxels.size() != volume.voxel_count()) {
    throw FormatError("voxel array length does not match dims");
  }
  for (std::uint8_t v : volume.voxels) {
    if (v > 2) throw FormatError("label code outside {0,1,2}: " + std::to_string(int(v)));
  }
}

namespace {

const char* kHeaderSuffix = ".vsm.json";
const char* kRawSuffix = ".vsm.raw";

std::filesystem::path with_vsm_suffix(std::filesystem::path path, const char* suffix) {
  std::string s = path.string();
  std::string hdr = kHeaderSuffix;
  if (s.size() >= hdr.size() && s.compare(s.size() - hdr.size(), hdr.size(), hdr) == 0) {
    s = s.substr(0, s.size() - hdr.size());
  }
  return std::filesystem::path(s + suffix);
}

const json& require_key(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("header missing key: ") + key);
  return *it;
}

} // namespace

LabelVolume load_canonical(const std::filesystem::path& header_path) {
  json j;
  try {
    j = json::parse(read_file(header_path));
  } catch (const json::parse_error& e) {
    throw FormatError("malformed header JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw FormatError("header is not a JSON object");

  LabelVolume vol;

  const json& dims = require_key(j, "dims");
  const json& spacing = require_key(j, "spacing_mm");
  if (!dims.is_array() || dims.size() != 3 || !spacing.is_array() || spacing.size() != 3) {
    throw FormatError("dims and spacing_mm must be 3-element arrays");
  }
  for (int i = 0; i < 3; ++i) {
    if (!dims[i].is_number_integer() || dims[i].get<long long>() <= 0) {
      throw FormatError("dims must be positive integers");
    }
    vol.dims[i] = dims[i].get<std::size_t>();
    if (!spacing[i].is_number() || !(spacing[i].get<double>() > 0.0)) {
      throw FormatError("spacing_mm must be positive");
    }
    vol.spacing_mm[i] = spacing[i].get<double>();
  }

  const json& labels = require_key(j, "labels");
  if (!labels.is_object() || labels.size() != 3 ||
      labels.value("0", "") != "background" ||
      labels.value("1", "") != "intrameatal" ||
      labels.value("2", "") != "extrameatal") {
    throw FormatError("labels must map 0/1/2 to background/intrameatal/extrameatal");
  }

  const json& session = require_key(j, "session");
  vol.session.case_id = require_key(session, "case_id").get<std::string>();
  vol.session.session_id = require_key(session, "session_id").get<std::string>();
  vol.session.operative_status =
      parse_operative_status(require_key(session, "operative_status").get<std::string>());
  vol.session.modality = parse_modality(require_key(session, "modality").get<std::string>());

  std::string raw_name = require_key(j, "raw_file").get<std::string>();
  std::filesystem::path raw_path = header_path.parent_path() / raw_name;
  std::string raw = read_file(raw_path);
  if (raw.size() != vol.voxel_count()) {
    throw FormatError("raw length mismatch: expected " + std::to_string(vol.voxel_count()) +
                      " bytes, got " + std::to_string(raw.size()));
  }
  vol.voxels.assign(raw.begin(), raw.end());
  validate(vol);
  return vol;
}

void save_canonical(const LabelVolume& volume, const std::filesystem::path& header_path) {
  validate(volume);
  std::filesystem::path hdr = with_vsm_suffix(header_path, kHeaderSuffix);
  std::filesystem::path raw = with_vsm_suffix(header_path, kRawSuffix);

  json j;
  j["dims"] = {volume.dims[0], volume.dims[1], volume.dims[2]};
  j["spacing_mm"] = {volume.spacing_mm[0], volume.spacing_mm[1], volume.spacing_mm[2]};
  j["raw_file"] = raw.filename().string();
  j["labels"] = {{"0", "background"}, {"1", "intrameatal"}, {"2", "extrameatal"}};
  j["session"] = {{"case_id", volume.session.case_id},
                  {"session_id", volume.session.session_id},
                  {"operative_status", to_string(volume.session.operative_status)},
                  {"modality", to_string(volume.session.modality)}};

  atomic_write_file(hdr, j.dump(2) + "\n");
  atomic_write_file(raw, std::string(volume.voxels.begin(), volume.voxels.end()));
}

} // namespace vsm
