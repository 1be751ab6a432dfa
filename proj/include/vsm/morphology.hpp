#pragma once

#include <cstdint>
#include <vector>

#include "vsm/geometry.hpp"
#include "vsm/volume.hpp"

namespace vsm {

// Subset of label codes {0,1,2}, used to select regions of a LabelVolume.
struct LabelSet {
  std::uint8_t bits = 0;

  static constexpr LabelSet of(std::initializer_list<std::uint8_t> labels) {
    LabelSet s;
    for (auto l : labels) s.bits = static_cast<std::uint8_t>(s.bits | (1u << l));
    return s;
  }
  static constexpr LabelSet intrameatal() { return of({LabelVolume::kIntrameatal}); }
  static constexpr LabelSet extrameatal() { return of({LabelVolume::kExtrameatal}); }
  static constexpr LabelSet whole_tumour() {
    return of({LabelVolume::kIntrameatal, LabelVolume::kExtrameatal});
  }
  bool contains(std::uint8_t label) const { return (bits >> label) & 1u; }
  friend bool operator==(LabelSet a, LabelSet b) { return a.bits == b.bits; }
};

struct BinaryMask3D {
  std::array<std::size_t, 3> dims{0, 0, 0};
  std::array<double, 3> spacing_mm{1.0, 1.0, 1.0};
  std::vector<std::uint8_t> bits; // 0 or 1 per voxel, x-fastest

  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
    return x + dims[0] * (y + dims[1] * z);
  }
  std::size_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }
};

BinaryMask3D extract_mask(const LabelVolume& volume, LabelSet selector);

// Points on one axial slice, in slice-plane millimetre coordinates.
// Sorted lexicographically, no duplicates.
struct SlicePointSet {
  int slice_index = 0;
  std::vector<Point2> points;
};

enum class Connectivity { faces6, full26 };

enum class Convention { pixel_centers, pixel_corners };

struct ComponentLabelling {
  std::vector<std::int32_t> labels; // 0 background, 1..count per component
  std::int32_t count = 0;
};

// Component ids are assigned in ascending order of each component's first
// voxel in x-fastest scan order.
ComponentLabelling connected_components(const BinaryMask3D& mask, Connectivity connectivity);

// Keeps only the largest connected component of the union mask (labels 1|2)
// under 26-adjacency; everything outside it becomes background. Ties go to
// the smallest component id. Throws EmptyTumourError when no tumour voxel
// exists. `removed_voxels`, when given, receives the number of voxels zeroed.
LabelVolume largest_component_filter(const LabelVolume& volume,
                                     std::size_t* removed_voxels = nullptr);

// Inner boundary of the selected pixels on slice z: selected pixels with at
// least one in-plane 4-neighbour outside the selection (out-of-bounds counts
// as outside). pixel_centers emits one point per boundary pixel at its
// centre; pixel_corners emits the four corners, de-duplicated.
SlicePointSet slice_boundary(const LabelVolume& volume, LabelSet selector, int z,
                             Convention convention);

// Midpoints between in-plane 4-adjacent intrameatal/extrameatal pixel pairs.
SlicePointSet interface_points(const LabelVolume& volume, int z);

// 2|A n B| / (|A| + |B|); 1.0 when both masks are empty.
double dice(const BinaryMask3D& a, const BinaryMask3D& b);

} // namespace vsm
