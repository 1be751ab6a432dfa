#include "vsm/morphology.hpp"

#include <algorithm>

#include "vsm/errors.hpp"

namespace vsm {

BinaryMask3D extract_mask(const LabelVolume& volume, LabelSet selector) {
  BinaryMask3D mask;
  mask.dims = volume.dims;
  mask.spacing_mm = volume.spacing_mm;
  mask.bits.resize(volume.voxel_count());
  const std::int64_t n = static_cast<std::int64_t>(volume.voxel_count());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    mask.bits[i] = selector.contains(volume.voxels[i]) ? 1 : 0;
  }
  return mask;
}

ComponentLabelling connected_components(const BinaryMask3D& mask, Connectivity connectivity) {
  const std::int64_t nx = static_cast<std::int64_t>(mask.dims[0]);
  const std::int64_t ny = static_cast<std::int64_t>(mask.dims[1]);
  const std::int64_t nz = static_cast<std::int64_t>(mask.dims[2]);

  ComponentLabelling out;
  out.labels.assign(mask.bits.size(), 0);

  // Neighbour offsets.
  std::vector<std::array<std::int64_t, 3>> offsets;
  if (connectivity == Connectivity::faces6) {
    offsets = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  } else {
    for (std::int64_t dz = -1; dz <= 1; ++dz)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dx = -1; dx <= 1; ++dx)
          if (dx || dy || dz) offsets.push_back({dx, dy, dz});
  }

  std::vector<std::size_t> stack;
  for (std::int64_t z = 0; z < nz; ++z) {
    for (std::int64_t y = 0; y < ny; ++y) {
      for (std::int64_t x = 0; x < nx; ++x) {
        std::size_t idx = mask.index(x, y, z);
        if (!mask.bits[idx] || out.labels[idx] != 0) continue;
        ++out.count;
        out.labels[idx] = out.count;
        stack.clear();
        stack.push_back(idx);
        while (!stack.empty()) {
          std::size_t cur = stack.back();
          stack.pop_back();
          std::int64_t cz = static_cast<std::int64_t>(cur / (nx * ny));
          std::int64_t rem = static_cast<std::int64_t>(cur % (nx * ny));
          std::int64_t cy = rem / nx;
          std::int64_t cx = rem % nx;
          for (const auto& d : offsets) {
            std::int64_t px = cx + d[0], py = cy + d[1], pz = cz + d[2];
            if (px < 0 || px >= nx || py < 0 || py >= ny || pz < 0 || pz >= nz) continue;
            std::size_t nidx = mask.index(px, py, pz);
            if (mask.bits[nidx] && out.labels[nidx] == 0) {
              out.labels[nidx] = out.count;
              stack.push_back(nidx);
            }
          }
        }
      }
    }
  }
  return out;
}

LabelVolume largest_component_filter(const LabelVolume& volume, std::size_t* removed_voxels) {
  BinaryMask3D tumour = extract_mask(volume, LabelSet::whole_tumour());
  ComponentLabelling cc = connected_components(tumour, Connectivity::full26);
  if (cc.count == 0) throw EmptyTumourError("no voxel with label 1 or 2");

  std::vector<std::size_t> counts(static_cast<std::size_t>(cc.count) + 1, 0);
  for (std::int32_t l : cc.labels) {
    if (l > 0) ++counts[static_cast<std::size_t>(l)];
  }
  std::int32_t keep = 1;
  for (std::int32_t id = 2; id <= cc.count; ++id) {
    if (counts[static_cast<std::size_t>(id)] > counts[static_cast<std::size_t>(keep)]) keep = id;
  }

  LabelVolume out = volume;
  std::size_t removed = 0;
  const std::int64_t n = static_cast<std::int64_t>(out.voxel_count());
#pragma omp parallel for schedule(static) reduction(+ : removed)
  for (std::int64_t i = 0; i < n; ++i) {
    if (out.voxels[i] != 0 && cc.labels[i] != keep) {
      out.voxels[i] = 0;
      ++removed;
    }
  }
  if (removed_voxels) *removed_voxels = removed;
  return out;
}

namespace {

void sort_dedup(std::vector<Point2>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

} // namespace

SlicePointSet slice_boundary(const LabelVolume& volume, LabelSet selector, int z,
                             Convention convention) {
  const std::int64_t nx = static_cast<std::int64_t>(volume.nx());
  const std::int64_t ny = static_cast<std::int64_t>(volume.ny());
  if (z < 0 || static_cast<std::size_t>(z) >= volume.nz()) {
    throw SliceOutOfRangeError("slice index out of range: " + std::to_string(z));
  }
  const double sx = volume.spacing_mm[0];
  const double sy = volume.spacing_mm[1];

  auto selected = [&](std::int64_t x, std::int64_t y) {
    if (x < 0 || x >= nx || y < 0 || y >= ny) return false;
    return selector.contains(volume.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                                       static_cast<std::size_t>(z)));
  };

  SlicePointSet out;
  out.slice_index = z;
  for (std::int64_t y = 0; y < ny; ++y) {
    for (std::int64_t x = 0; x < nx; ++x) {
      if (!selected(x, y)) continue;
      bool boundary = !selected(x - 1, y) || !selected(x + 1, y) || !selected(x, y - 1) ||
                      !selected(x, y + 1);
      if (!boundary) continue;
      if (convention == Convention::pixel_centers) {
        out.points.push_back({(static_cast<double>(x) + 0.5) * sx,
                              (static_cast<double>(y) + 0.5) * sy});
      } else {
        for (int cy = 0; cy <= 1; ++cy) {
          for (int cx = 0; cx <= 1; ++cx) {
            out.points.push_back({static_cast<double>(x + cx) * sx,
                                  static_cast<double>(y + cy) * sy});
          }
        }
      }
    }
  }
  sort_dedup(out.points);
  return out;
}

SlicePointSet interface_points(const LabelVolume& volume, int z) {
  const std::int64_t nx = static_cast<std::int64_t>(volume.nx());
  const std::int64_t ny = static_cast<std::int64_t>(volume.ny());
  if (z < 0 || static_cast<std::size_t>(z) >= volume.nz()) {
    throw SliceOutOfRangeError("slice index out of range: " + std::to_string(z));
  }
  const double sx = volume.spacing_mm[0];
  const double sy = volume.spacing_mm[1];
  const auto zz = static_cast<std::size_t>(z);

  auto is_pair = [](std::uint8_t a, std::uint8_t b) {
    return (a == LabelVolume::kIntrameatal && b == LabelVolume::kExtrameatal) ||
           (a == LabelVolume::kExtrameatal && b == LabelVolume::kIntrameatal);
  };

  SlicePointSet out;
  out.slice_index = z;
  for (std::int64_t y = 0; y < ny; ++y) {
    for (std::int64_t x = 0; x < nx; ++x) {
      std::uint8_t here = volume.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y), zz);
      if (x + 1 < nx &&
          is_pair(here, volume.at(static_cast<std::size_t>(x + 1), static_cast<std::size_t>(y), zz))) {
        out.points.push_back({static_cast<double>(x + 1) * sx,
                              (static_cast<double>(y) + 0.5) * sy});
      }
      if (y + 1 < ny &&
          is_pair(here, volume.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y + 1), zz))) {
        out.points.push_back({(static_cast<double>(x) + 0.5) * sx,
                              static_cast<double>(y + 1) * sy});
      }
    }
  }
  sort_dedup(out.points);
  return out;
}

double dice(const BinaryMask3D& a, const BinaryMask3D& b) {
  if (a.dims != b.dims) throw DimMismatchError("dice: mask dimensions differ");
  const std::int64_t n = static_cast<std::int64_t>(a.voxel_count());
  std::size_t ca = 0, cb = 0, inter = 0;
#pragma omp parallel for schedule(static) reduction(+ : ca, cb, inter)
  for (std::int64_t i = 0; i < n; ++i) {
    ca += a.bits[i] ? 1 : 0;
    cb += b.bits[i] ? 1 : 0;
    inter += (a.bits[i] && b.bits[i]) ? 1 : 0;
  }
  if (ca + cb == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(ca + cb);
}

} // namespace vsm
