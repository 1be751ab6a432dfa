#pragma once

// Shared phantoms and generators for the test and acceptance suites.

#include <filesystem>
#include <random>
#include <string>

#include <unistd.h>

#include "vsm/volume.hpp"

namespace fixtures {

inline vsm::LabelVolume make_volume(std::size_t nx, std::size_t ny, std::size_t nz,
                                    std::array<double, 3> spacing = {1.0, 1.0, 1.0}) {
  vsm::LabelVolume v;
  v.dims = {nx, ny, nz};
  v.spacing_mm = spacing;
  v.voxels.assign(nx * ny * nz, 0);
  v.session.case_id = "case";
  v.session.session_id = "1";
  v.session.operative_status = vsm::OperativeStatus::pre_op;
  v.session.modality = vsm::Modality::T2;
  return v;
}

// Intrameatal 10x2 bar meeting an extrameatal 6x6 square along a vertical
// interface, unit spacing, one slice.
inline vsm::LabelVolume bar_square_fixture() {
  vsm::LabelVolume v = make_volume(16, 8, 1);
  for (std::size_t x = 0; x < 10; ++x) {
    for (std::size_t y = 3; y <= 4; ++y) v.at(x, y, 0) = vsm::LabelVolume::kIntrameatal;
  }
  for (std::size_t x = 10; x < 16; ++x) {
    for (std::size_t y = 1; y <= 6; ++y) v.at(x, y, 0) = vsm::LabelVolume::kExtrameatal;
  }
  return v;
}

// In-plane 90-degree rotation: (x, y) -> (ny-1-y, x), dims swapped.
inline vsm::LabelVolume rotate90_inplane(const vsm::LabelVolume& v) {
  vsm::LabelVolume out = v;
  out.dims = {v.dims[1], v.dims[0], v.dims[2]};
  out.spacing_mm = {v.spacing_mm[1], v.spacing_mm[0], v.spacing_mm[2]};
  out.voxels.assign(v.voxel_count(), 0);
  for (std::size_t z = 0; z < v.nz(); ++z) {
    for (std::size_t y = 0; y < v.ny(); ++y) {
      for (std::size_t x = 0; x < v.nx(); ++x) {
        out.at(v.ny() - 1 - y, x, z) = v.at(x, y, z);
      }
    }
  }
  return out;
}

// Single-slice digitised ellipse (semi-axes a_mm x b_mm), pixel centre
// membership, the given label.
inline vsm::LabelVolume ellipse_phantom(double a_mm, double b_mm, double pitch,
                                        std::uint8_t label, std::size_t nz = 1) {
  auto cells_x = static_cast<std::size_t>(2.0 * a_mm / pitch) + 8;
  auto cells_y = static_cast<std::size_t>(2.0 * b_mm / pitch) + 8;
  vsm::LabelVolume v = make_volume(cells_x, cells_y, nz, {pitch, pitch, 1.0});
  const double cx = 0.5 * static_cast<double>(cells_x) * pitch;
  const double cy = 0.5 * static_cast<double>(cells_y) * pitch;
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < cells_y; ++y) {
      for (std::size_t x = 0; x < cells_x; ++x) {
        double px = (static_cast<double>(x) + 0.5) * pitch - cx;
        double py = (static_cast<double>(y) + 0.5) * pitch - cy;
        if ((px * px) / (a_mm * a_mm) + (py * py) / (b_mm * b_mm) <= 1.0) {
          v.at(x, y, z) = label;
        }
      }
    }
  }
  return v;
}

// Random connected-ish two-label phantom: an intrameatal box with an
// extrameatal box grown off its +x face.
inline vsm::LabelVolume random_two_label_phantom(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> dim(12, 24);
  std::uniform_real_distribution<double> sp(0.4, 1.5);
  std::size_t nx = dim(rng), ny = dim(rng), nz = std::uniform_int_distribution<std::size_t>(3, 8)(rng);
  vsm::LabelVolume v = make_volume(nx, ny, nz, {sp(rng), sp(rng), sp(rng)});

  auto span = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::size_t ix1 = span(0, nx / 2), ix2 = span(ix1 + 1, nx / 2 + 2);
  std::size_t iy1 = span(1, ny / 2), iy2 = span(iy1 + 1, ny - 2);
  std::size_t iz1 = span(0, nz - 2), iz2 = span(iz1, nz - 1);
  for (std::size_t z = iz1; z <= iz2; ++z)
    for (std::size_t y = iy1; y <= iy2; ++y)
      for (std::size_t x = ix1; x <= ix2; ++x) v.at(x, y, z) = vsm::LabelVolume::kIntrameatal;

  std::size_t ex2 = span(ix2 + 1, nx - 1);
  std::size_t ey1 = span(1, iy1), ey2 = span(iy2, ny - 1);
  for (std::size_t z = iz1; z <= iz2; ++z)
    for (std::size_t y = ey1; y <= ey2; ++y)
      for (std::size_t x = ix2 + 1; x <= ex2; ++x) v.at(x, y, z) = vsm::LabelVolume::kExtrameatal;
  return v;
}

inline vsm::LabelVolume random_volume(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  std::uniform_real_distribution<double> sp(0.25, 3.0);
  std::uniform_int_distribution<int> label(0, 2);
  vsm::LabelVolume v = make_volume(dim(rng), dim(rng), dim(rng), {sp(rng), sp(rng), sp(rng)});
  for (auto& vox : v.voxels) vox = static_cast<std::uint8_t>(label(rng));
  v.session.case_id = "rand" + std::to_string(rng() % 1000);
  v.session.session_id = std::to_string(rng() % 10);
  v.session.operative_status =
      (rng() & 1) ? vsm::OperativeStatus::post_op : vsm::OperativeStatus::pre_op;
  return v;
}

// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("vsm_" + name + "_" +
                                                       std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace fixtures
