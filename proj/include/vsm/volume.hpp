#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace vsm {

enum class OperativeStatus { pre_op, post_op };
enum class Modality { T1C, T2, unknown };

std::string to_string(OperativeStatus s);
std::string to_string(Modality m);
OperativeStatus parse_operative_status(const std::string& s);
Modality parse_modality(const std::string& s);

struct SessionMeta {
  std::string case_id;
  std::string session_id;
  OperativeStatus operative_status = OperativeStatus::pre_op;
  Modality modality = Modality::unknown;
};

// Labelled voxel grid. Labels: 0 background, 1 intrameatal, 2 extrameatal.
// Storage is x-fastest (x, then y, then z); z is the axial slice axis.
struct LabelVolume {
  static constexpr std::uint8_t kBackground = 0;
  static constexpr std::uint8_t kIntrameatal = 1;
  static constexpr std::uint8_t kExtrameatal = 2;

  std::array<std::size_t, 3> dims{0, 0, 0};     // nx, ny, nz
  std::array<double, 3> spacing_mm{1.0, 1.0, 1.0}; // sx, sy, sz
  std::vector<std::uint8_t> voxels;
  SessionMeta session;

  std::size_t nx() const { return dims[0]; }
  std::size_t ny() const { return dims[1]; }
  std::size_t nz() const { return dims[2]; }
  std::size_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }

  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
    return x + dims[0] * (y + dims[1] * z);
  }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t z) const {
    return voxels[index(x, y, z)];
  }
  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t z) {
    return voxels[index(x, y, z)];
  }
};

// Throws FormatError if any LabelVolume invariant is violated.
void validate(const LabelVolume& volume);

// Canonical on-disk format: `<stem>.vsm.json` header next to a
// `<stem>.vsm.raw` file of nx*ny*nz uint8 voxels, x-fastest.
LabelVolume load_canonical(const std::filesystem::path& header_path);
void save_canonical(const LabelVolume& volume, const std::filesystem::path& header_path);

} // namespace vsm
