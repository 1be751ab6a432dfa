#pragma once

#include <cstdint>
#include <filesystem>
#include <map>

#include "vsm/volume.hpp"

namespace vsm {

using LabelMap = std::map<long long, std::uint8_t>;

// Identity map for masks already coded 0/1/2.
LabelMap identity_label_map();

// Reads a single-volume integer-valued NIfTI-1 file (.nii or .nii.gz) and
// remaps its values through `label_map`. Voxel axes are permuted so the axis
// most aligned with the scanner inferior-superior direction becomes z;
// acquisitions oblique by more than 5 degrees on any axis are rejected.
// Session metadata is left at defaults for the caller to fill in.
LabelVolume import_nifti(const std::filesystem::path& path, const LabelMap& label_map);

} // namespace vsm
