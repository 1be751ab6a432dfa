#include "vsm/nifti.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <vector>

#include <zlib.h>

#include "vsm/errors.hpp"

namespace vsm {

namespace {

// NIfTI-1 datatype codes.
enum : std::int16_t {
  DT_UINT8 = 2,
  DT_INT16 = 4,
  DT_INT32 = 8,
  DT_FLOAT32 = 16,
  DT_FLOAT64 = 64,
  DT_INT8 = 256,
  DT_UINT16 = 512,
  DT_UINT32 = 768,
};

struct Nifti1Header {
  std::int32_t sizeof_hdr;
  std::int16_t dim[8];
  std::int16_t datatype;
  std::int16_t bitpix;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t qform_code;
  std::int16_t sform_code;
  float quatern[3]; // b, c, d
  float qoffset[3];
  float srow_x[4];
  float srow_y[4];
  float srow_z[4];
  char magic[4];
};

template <typename T>
T swap_bytes(T v) {
  T out;
  auto* s = reinterpret_cast<const unsigned char*>(&v);
  auto* d = reinterpret_cast<unsigned char*>(&out);
  for (size_t i = 0; i < sizeof(T); ++i) d[i] = s[sizeof(T) - 1 - i];
  return out;
}

template <typename T>
T read_at(const unsigned char* buf, size_t offset, bool swapped) {
  T v;
  std::memcpy(&v, buf + offset, sizeof(T));
  return swapped ? swap_bytes(v) : v;
}

Nifti1Header parse_header(const unsigned char* buf, bool& swapped) {
  std::int32_t size;
  std::memcpy(&size, buf, 4);
  if (size == 348) {
    swapped = false;
  } else if (swap_bytes(size) == 348) {
    swapped = true;
  } else {
    throw FormatError("not a NIfTI-1 file: sizeof_hdr != 348");
  }

  Nifti1Header h{};
  h.sizeof_hdr = 348;
  for (int i = 0; i < 8; ++i) {
    h.dim[i] = read_at<std::int16_t>(buf, 40 + 2 * i, swapped);
    h.pixdim[i] = read_at<float>(buf, 76 + 4 * i, swapped);
  }
  h.datatype = read_at<std::int16_t>(buf, 70, swapped);
  h.bitpix = read_at<std::int16_t>(buf, 72, swapped);
  h.vox_offset = read_at<float>(buf, 108, swapped);
  h.scl_slope = read_at<float>(buf, 112, swapped);
  h.scl_inter = read_at<float>(buf, 116, swapped);
  h.qform_code = read_at<std::int16_t>(buf, 252, swapped);
  h.sform_code = read_at<std::int16_t>(buf, 254, swapped);
  for (int i = 0; i < 3; ++i) {
    h.quatern[i] = read_at<float>(buf, 256 + 4 * i, swapped);
    h.qoffset[i] = read_at<float>(buf, 268 + 4 * i, swapped);
  }
  for (int i = 0; i < 4; ++i) {
    h.srow_x[i] = read_at<float>(buf, 280 + 4 * i, swapped);
    h.srow_y[i] = read_at<float>(buf, 296 + 4 * i, swapped);
    h.srow_z[i] = read_at<float>(buf, 312 + 4 * i, swapped);
  }
  std::memcpy(h.magic, buf + 344, 4);
  return h;
}

// Columns of the voxel-to-world rotation/scale matrix (world axes in RAS:
// x right, y anterior, z superior).
std::array<std::array<double, 3>, 3> direction_columns(const Nifti1Header& h) {
  std::array<std::array<double, 3>, 3> cols{}; // cols[j][worldaxis]
  if (h.sform_code > 0) {
    for (int j = 0; j < 3; ++j) {
      cols[j] = {h.srow_x[j], h.srow_y[j], h.srow_z[j]};
    }
    return cols;
  }
  if (h.qform_code > 0) {
    double b = h.quatern[0], c = h.quatern[1], d = h.quatern[2];
    double a2 = 1.0 - (b * b + c * c + d * d);
    double a = a2 > 0.0 ? std::sqrt(a2) : 0.0;
    double R[3][3] = {
        {a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
        {2 * (b * c + a * d), a * a + c * c - b * b - d * d, 2 * (c * d - a * b)},
        {2 * (b * d - a * c), 2 * (c * d + a * b), a * a + d * d - b * b - c * c}};
    double qfac = h.pixdim[0] < 0.0f ? -1.0 : 1.0;
    for (int j = 0; j < 3; ++j) {
      double scale = h.pixdim[j + 1] * (j == 2 ? qfac : 1.0);
      cols[j] = {R[0][j] * scale, R[1][j] * scale, R[2][j] * scale};
    }
    return cols;
  }
  // No orientation stored: assume the data is already axial RAS.
  for (int j = 0; j < 3; ++j) cols[j] = {0.0, 0.0, 0.0};
  cols[0][0] = h.pixdim[1];
  cols[1][1] = h.pixdim[2];
  cols[2][2] = h.pixdim[3];
  return cols;
}

struct GzReader {
  gzFile f = nullptr;
  explicit GzReader(const std::filesystem::path& path) {
    f = gzopen(path.string().c_str(), "rb");
    if (!f) throw IoError("cannot open: " + path.string());
  }
  ~GzReader() {
    if (f) gzclose(f);
  }
  void read_exact(void* dst, size_t n, const char* what) {
    size_t got = 0;
    auto* p = static_cast<unsigned char*>(dst);
    while (got < n) {
      unsigned chunk = static_cast<unsigned>(std::min<size_t>(n - got, 1u << 28));
      int r = gzread(f, p + got, chunk);
      if (r <= 0) throw FormatError(std::string("truncated NIfTI file while reading ") + what);
      got += static_cast<size_t>(r);
    }
  }
  void skip(size_t n) {
    std::vector<unsigned char> sink(std::min<size_t>(n, 1 << 16));
    size_t left = n;
    while (left > 0) {
      unsigned chunk = static_cast<unsigned>(std::min(left, sink.size()));
      int r = gzread(f, sink.data(), chunk);
      if (r <= 0) throw FormatError("truncated NIfTI file before voxel data");
      left -= static_cast<size_t>(r);
    }
  }
};

long long decode_sample(const unsigned char* p, std::int16_t dtype, bool swapped) {
  switch (dtype) {
    case DT_UINT8: return *p;
    case DT_INT8: return *reinterpret_cast<const std::int8_t*>(p);
    case DT_INT16: return read_at<std::int16_t>(p, 0, swapped);
    case DT_UINT16: return read_at<std::uint16_t>(p, 0, swapped);
    case DT_INT32: return read_at<std::int32_t>(p, 0, swapped);
    case DT_UINT32: return read_at<std::uint32_t>(p, 0, swapped);
    default: return 0; // float types handled separately
  }
}

} // namespace

LabelMap identity_label_map() {
  return {{0, 0}, {1, 1}, {2, 2}};
}

LabelVolume import_nifti(const std::filesystem::path& path, const LabelMap& label_map) {
  std::string name = path.filename().string();
  auto ends_with = [&](const char* suf) {
    size_t l = std::strlen(suf);
    return name.size() >= l && name.compare(name.size() - l, l, suf) == 0;
  };
  if (!ends_with(".nii") && !ends_with(".nii.gz")) {
    throw FormatError("only .nii and .nii.gz files are accepted: " + name);
  }
  for (const auto& [from, to] : label_map) {
    if (to > 2) throw FormatError("label_map targets must be in {0,1,2}");
  }

  GzReader in(path);
  unsigned char hbuf[348];
  in.read_exact(hbuf, sizeof(hbuf), "header");
  bool swapped = false;
  Nifti1Header h = parse_header(hbuf, swapped);

  if (std::strncmp(h.magic, "n+1", 3) != 0 || h.magic[3] != '\0') {
    throw FormatError("non-NIfTI magic (expected \"n+1\")");
  }
  bool single_volume = h.dim[0] == 3 || (h.dim[0] == 4 && h.dim[4] <= 1);
  if (!single_volume) throw FormatError("not a single 3D volume (dim[0] = " +
                                        std::to_string(h.dim[0]) + ")");
  for (int i = 1; i <= 3; ++i) {
    if (h.dim[i] <= 0) throw FormatError("non-positive dimension in header");
    if (!(h.pixdim[i] > 0.0f)) throw FormatError("non-positive pixdim in header");
  }

  int bytes_per = 0;
  switch (h.datatype) {
    case DT_UINT8:
    case DT_INT8: bytes_per = 1; break;
    case DT_INT16:
    case DT_UINT16: bytes_per = 2; break;
    case DT_INT32:
    case DT_UINT32:
    case DT_FLOAT32: bytes_per = 4; break;
    case DT_FLOAT64: bytes_per = 8; break;
    default:
      throw FormatError("unsupported NIfTI datatype: " + std::to_string(h.datatype));
  }

  // Axis assignment: each voxel axis must sit within 5 degrees of one world
  // axis, and the three must claim distinct world axes.
  auto cols = direction_columns(h);
  const double cos_tol = std::cos(5.0 * 3.14159265358979323846 / 180.0);
  int world_to_voxel[3] = {-1, -1, -1};
  for (int j = 0; j < 3; ++j) {
    double n = std::sqrt(cols[j][0] * cols[j][0] + cols[j][1] * cols[j][1] +
                         cols[j][2] * cols[j][2]);
    if (!(n > 0.0)) throw FormatError("degenerate affine column in header");
    int k = 0;
    for (int w = 1; w < 3; ++w) {
      if (std::fabs(cols[j][w]) > std::fabs(cols[j][k])) k = w;
    }
    if (std::fabs(cols[j][k]) / n < cos_tol) {
      throw FormatError("oblique acquisition beyond 5 degree tolerance");
    }
    if (world_to_voxel[k] != -1) {
      throw FormatError("two voxel axes map to the same world axis");
    }
    world_to_voxel[k] = j;
  }

  // Voxel payload.
  size_t offset = static_cast<size_t>(h.vox_offset);
  if (offset < 348) throw FormatError("vox_offset inside header");
  in.skip(offset - 348);
  size_t stored_dims[3] = {static_cast<size_t>(h.dim[1]), static_cast<size_t>(h.dim[2]),
                           static_cast<size_t>(h.dim[3])};
  size_t nvox = stored_dims[0] * stored_dims[1] * stored_dims[2];
  std::vector<unsigned char> data(nvox * static_cast<size_t>(bytes_per));
  in.read_exact(data.data(), data.size(), "voxel data");

  bool has_scl = h.scl_slope != 0.0f && !(h.scl_slope == 1.0f && h.scl_inter == 0.0f);
  bool is_float = h.datatype == DT_FLOAT32 || h.datatype == DT_FLOAT64;

  std::vector<std::uint8_t> remapped(nvox);
  for (size_t i = 0; i < nvox; ++i) {
    const unsigned char* p = data.data() + i * static_cast<size_t>(bytes_per);
    long long value;
    if (is_float || has_scl) {
      double v;
      if (h.datatype == DT_FLOAT32) {
        v = read_at<float>(p, 0, swapped);
      } else if (h.datatype == DT_FLOAT64) {
        v = read_at<double>(p, 0, swapped);
      } else {
        v = static_cast<double>(decode_sample(p, h.datatype, swapped));
      }
      if (has_scl) v = static_cast<double>(h.scl_slope) * v + static_cast<double>(h.scl_inter);
      double r = std::round(v);
      if (std::fabs(v - r) > 1e-6) {
        throw FormatError("non-integer voxel value in mask: " + std::to_string(v));
      }
      value = static_cast<long long>(r);
    } else {
      value = decode_sample(p, h.datatype, swapped);
    }
    auto it = label_map.find(value);
    if (it == label_map.end()) {
      throw FormatError("unmapped label value: " + std::to_string(value));
    }
    remapped[i] = it->second;
  }

  // Permute so the inferior-superior axis is z (axis order only; no flips,
  // which cannot change any in-plane or volumetric measurement).
  LabelVolume vol;
  int px = world_to_voxel[0], py = world_to_voxel[1], pz = world_to_voxel[2];
  vol.dims = {stored_dims[px], stored_dims[py], stored_dims[pz]};
  vol.spacing_mm = {h.pixdim[px + 1], h.pixdim[py + 1], h.pixdim[pz + 1]};
  vol.voxels.resize(nvox);
  size_t stride[3] = {1, stored_dims[0], stored_dims[0] * stored_dims[1]};
  for (size_t z = 0; z < vol.nz(); ++z) {
    for (size_t y = 0; y < vol.ny(); ++y) {
      for (size_t x = 0; x < vol.nx(); ++x) {
        size_t src = x * stride[px] + y * stride[py] + z * stride[pz];
        vol.voxels[vol.index(x, y, z)] = remapped[src];
      }
    }
  }
  validate(vol);
  return vol;
}

} // namespace vsm
