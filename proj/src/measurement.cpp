#include "vsm/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "vsm/errors.hpp"
#include "vsm/io_util.hpp"

namespace vsm {

std::string to_string(DiameterKind k) {
  switch (k) {
    case DiameterKind::WT: return "WT";
    case DiameterKind::EM: return "EM";
    case DiameterKind::intra_par: return "intra_par";
    case DiameterKind::extra_par: return "extra_par";
    default: return "extra_perp";
  }
}

std::string to_string(Convention c) {
  return c == Convention::pixel_centers ? "pixel_centers" : "pixel_corners";
}

Convention parse_convention(const std::string& s) {
  if (s == "pixel_centers" || s == "pixel-centers") return Convention::pixel_centers;
  if (s == "pixel_corners" || s == "pixel-corners") return Convention::pixel_corners;
  throw FormatError("invalid convention: " + s);
}

std::string to_string(InterfaceSource s) {
  switch (s) {
    case InterfaceSource::per_slice: return "per_slice";
    case InterfaceSource::volume_aggregate: return "volume_aggregate";
    default: return "absent";
  }
}

namespace {

bool slice_has_label(const LabelVolume& v, std::size_t z, std::uint8_t label) {
  const std::size_t base = v.index(0, 0, z);
  const std::size_t n = v.nx() * v.ny();
  for (std::size_t i = 0; i < n; ++i) {
    if (v.voxels[base + i] == label) return true;
  }
  return false;
}

std::string mm(double v) { return format_fixed(v, 3) + " mm"; }

// Segment of length `extent` parallel to `dir`, centred between the two
// extreme vertices, so the drawn feature line matches the reported value.
Segment2D centred_extent_segment(const DirectionalExtent& ext, const UnitDir2D& dir) {
  double cx = 0.5 * (ext.realising.p.x + ext.realising.q.x);
  double cy = 0.5 * (ext.realising.p.y + ext.realising.q.y);
  double h = 0.5 * ext.extent_mm;
  Point2 a{cx - dir.dx * h, cy - dir.dy * h};
  Point2 b{cx + dir.dx * h, cy + dir.dy * h};
  if (b < a) std::swap(a, b);
  return Segment2D::between(a, b);
}

struct ExtentCandidate {
  bool valid = false;
  double extent = 0.0;
  Segment2D segment;
  UnitDir2D dir;
};

ExtentCandidate slice_extent(const LabelVolume& volume, LabelSet sel, int z,
                             Convention convention, const UnitDir2D& dir) {
  SlicePointSet pts = slice_boundary(volume, sel, z, convention);
  if (pts.points.empty()) return {};
  Hull hull = convex_hull(pts.points);
  DirectionalExtent ext = directional_extent(hull, dir);
  ExtentCandidate c;
  c.valid = true;
  c.extent = ext.extent_mm;
  c.segment = centred_extent_segment(ext, dir);
  c.dir = dir;
  return c;
}

} // namespace

Diameter region_diameter(const LabelVolume& volume, LabelSet selector, Convention convention) {
  const std::int64_t nz = static_cast<std::int64_t>(volume.nz());
  struct SliceBest {
    bool present = false;
    double length = 0.0;
    Segment2D segment;
  };
  std::vector<SliceBest> per_slice(static_cast<std::size_t>(nz));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t z = 0; z < nz; ++z) {
    SlicePointSet pts = slice_boundary(volume, selector, static_cast<int>(z), convention);
    if (pts.points.empty()) continue;
    Hull hull = convex_hull(pts.points);
    Segment2D seg = max_diameter(hull);
    per_slice[static_cast<std::size_t>(z)] = {true, seg.length_mm, seg};
  }

  int best_z = -1;
  for (std::int64_t z = 0; z < nz; ++z) {
    const auto& s = per_slice[static_cast<std::size_t>(z)];
    if (!s.present) continue;
    if (best_z < 0 || s.length > per_slice[static_cast<std::size_t>(best_z)].length) {
      best_z = static_cast<int>(z);
    }
  }
  if (best_z < 0) throw EmptyRegionError("selector matches no voxel");

  Diameter d;
  d.kind = (selector == LabelSet::extrameatal()) ? DiameterKind::EM : DiameterKind::WT;
  d.length_mm = per_slice[static_cast<std::size_t>(best_z)].length;
  d.segment = per_slice[static_cast<std::size_t>(best_z)].segment;
  d.slice_index = best_z;
  d.convention = convention;
  return d;
}

AuxFeatures aux_features(const LabelVolume& volume, Convention convention,
                         std::vector<std::string>* warnings) {
  const std::int64_t nz = static_cast<std::int64_t>(volume.nz());

  struct SliceAux {
    bool both_labels = false;
    bool has_dir = false;
    bool from_aggregate = false;
    UnitDir2D dir;
    ExtentCandidate intra_par, extra_par, extra_perp;
  };
  std::vector<SliceAux> slices(static_cast<std::size_t>(nz));

  // Pass 1: per-slice interface directions.
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t z = 0; z < nz; ++z) {
    auto& s = slices[static_cast<std::size_t>(z)];
    s.both_labels = slice_has_label(volume, static_cast<std::size_t>(z), LabelVolume::kIntrameatal) &&
                    slice_has_label(volume, static_cast<std::size_t>(z), LabelVolume::kExtrameatal);
    if (!s.both_labels) continue;
    SlicePointSet ifc = interface_points(volume, static_cast<int>(z));
    try {
      s.dir = fit_line_direction(ifc.points);
      s.has_dir = true;
    } catch (const Error&) {
      // degenerate or isotropic; aggregate fallback below
    }
  }

  bool any_both = false;
  bool any_needs_fallback = false;
  for (const auto& s : slices) {
    any_both = any_both || s.both_labels;
    any_needs_fallback = any_needs_fallback || (s.both_labels && !s.has_dir);
  }

  AuxFeatures out;
  if (!any_both) {
    out.interface_source = InterfaceSource::absent;
    return out;
  }

  // Aggregate fallback direction over all slices' interface points.
  std::optional<UnitDir2D> aggregate_dir;
  if (any_needs_fallback) {
    std::vector<Point2> all;
    for (std::int64_t z = 0; z < nz; ++z) {
      if (!slices[static_cast<std::size_t>(z)].both_labels) continue;
      SlicePointSet ifc = interface_points(volume, static_cast<int>(z));
      all.insert(all.end(), ifc.points.begin(), ifc.points.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    try {
      aggregate_dir = fit_line_direction(all);
    } catch (const Error&) {
      aggregate_dir.reset();
    }
  }

  for (std::int64_t z = 0; z < nz; ++z) {
    auto& s = slices[static_cast<std::size_t>(z)];
    if (!s.both_labels || s.has_dir) continue;
    if (aggregate_dir) {
      s.dir = *aggregate_dir;
      s.has_dir = true;
      s.from_aggregate = true;
      if (warnings) {
        warnings->push_back("interface fit degenerate on slice " + std::to_string(z) +
                            "; used volume-aggregate direction");
      }
    } else if (warnings) {
      warnings->push_back("interface fit degenerate on slice " + std::to_string(z) +
                          " and no aggregate direction available");
    }
  }

  // Pass 2: directional extents on every slice with a direction.
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t z = 0; z < nz; ++z) {
    auto& s = slices[static_cast<std::size_t>(z)];
    if (!s.has_dir) continue;
    UnitDir2D perp = perpendicular(s.dir);
    s.intra_par = slice_extent(volume, LabelSet::intrameatal(), static_cast<int>(z), convention, s.dir);
    s.extra_par = slice_extent(volume, LabelSet::extrameatal(), static_cast<int>(z), convention, s.dir);
    s.extra_perp = slice_extent(volume, LabelSet::extrameatal(), static_cast<int>(z), convention, perp);
  }

  auto pick_max = [&](DiameterKind kind, ExtentCandidate SliceAux::* member) -> std::optional<Diameter> {
    int best_z = -1;
    for (std::int64_t z = 0; z < nz; ++z) {
      const auto& c = slices[static_cast<std::size_t>(z)].*member;
      if (!c.valid) continue;
      if (best_z < 0 || c.extent > (slices[static_cast<std::size_t>(best_z)].*member).extent) {
        best_z = static_cast<int>(z);
      }
    }
    if (best_z < 0) return std::nullopt;
    const auto& c = slices[static_cast<std::size_t>(best_z)].*member;
    Diameter d;
    d.kind = kind;
    d.length_mm = c.extent;
    d.segment = c.segment;
    d.slice_index = best_z;
    d.convention = convention;
    return d;
  };

  out.d_intra_par = pick_max(DiameterKind::intra_par, &SliceAux::intra_par);
  out.d_extra_par = pick_max(DiameterKind::extra_par, &SliceAux::extra_par);
  out.d_extra_perp = pick_max(DiameterKind::extra_perp, &SliceAux::extra_perp);

  if (!out.d_intra_par || !out.d_extra_par || !out.d_extra_perp) {
    // Interface exists but no direction was recoverable anywhere.
    out = AuxFeatures{};
    out.interface_source = InterfaceSource::absent;
    if (warnings) {
      warnings->push_back("auxiliary features absent: no usable interface direction");
    }
    return out;
  }

  bool used_aggregate = false;
  for (const auto& s : slices) used_aggregate = used_aggregate || s.from_aggregate;
  out.interface_source =
      used_aggregate ? InterfaceSource::volume_aggregate : InterfaceSource::per_slice;
  out.interface_dir = slices[static_cast<std::size_t>(out.d_extra_par->slice_index)].dir;
  return out;
}

Volumes tumour_volumes(const LabelVolume& volume) {
  const std::int64_t n = static_cast<std::int64_t>(volume.voxel_count());
  std::size_t n_intra = 0, n_extra = 0;
#pragma omp parallel for schedule(static) reduction(+ : n_intra, n_extra)
  for (std::int64_t i = 0; i < n; ++i) {
    n_intra += volume.voxels[i] == LabelVolume::kIntrameatal ? 1 : 0;
    n_extra += volume.voxels[i] == LabelVolume::kExtrameatal ? 1 : 0;
  }
  const double voxel_mm3 = volume.spacing_mm[0] * volume.spacing_mm[1] * volume.spacing_mm[2];
  Volumes v;
  v.intrameatal_mm3 = static_cast<double>(n_intra) * voxel_mm3;
  v.extrameatal_mm3 = static_cast<double>(n_extra) * voxel_mm3;
  v.whole_mm3 = v.intrameatal_mm3 + v.extrameatal_mm3;
  return v;
}

Selection select_diameter(const LabelVolume& volume, const AuxFeatures& aux) {
  Selection sel;

  if (volume.session.operative_status == OperativeStatus::post_op) {
    sel.trace.push_back({"operative_status", "operative_status == post_op: true", "use D_WT"});
    sel.chosen_kind = DiameterKind::WT;
    return sel;
  }
  sel.trace.push_back({"operative_status", "operative_status == post_op: false", "continue"});

  std::size_t n_extra = 0;
  for (std::uint8_t v : volume.voxels) {
    if (v == LabelVolume::kExtrameatal) ++n_extra;
  }
  if (n_extra == 0) {
    sel.trace.push_back({"extrameatal_presence",
                         "extrameatal_voxels (0) == 0 (intracanalicular): true", "use D_WT"});
    sel.chosen_kind = DiameterKind::WT;
    return sel;
  }
  sel.trace.push_back({"extrameatal_presence",
                       "extrameatal_voxels (" + std::to_string(n_extra) + ") > 0: true",
                       "continue"});

  if (!aux.d_intra_par || !aux.d_extra_par || !aux.d_extra_perp) {
    throw MissingFeaturesError(
        "pre-operative volume with an extrameatal region but auxiliary features absent");
  }

  const double di = aux.d_intra_par->length_mm;
  const double de = aux.d_extra_par->length_mm;
  const double dp = aux.d_extra_perp->length_mm;

  if (di >= de) {
    sel.trace.push_back({"parallel_extents",
                         "d_intra_par (" + mm(di) + ") >= d_extra_par (" + mm(de) + "): true",
                         "use D_WT"});
    sel.chosen_kind = DiameterKind::WT;
    return sel;
  }
  sel.trace.push_back({"parallel_extents",
                       "d_intra_par (" + mm(di) + ") >= d_extra_par (" + mm(de) + "): false",
                       "continue"});

  if (dp > 2.0) {
    sel.trace.push_back({"perpendicular_threshold",
                         "d_extra_perp (" + mm(dp) + ") > 2.000 mm: true", "use D_EM"});
    sel.chosen_kind = DiameterKind::EM;
    return sel;
  }
  sel.trace.push_back({"perpendicular_threshold",
                       "d_extra_perp (" + mm(dp) + ") <= 2.000 mm: true", "use D_WT"});
  sel.chosen_kind = DiameterKind::WT;
  return sel;
}

MeasurementReport measure_session(const LabelVolume& volume, Convention convention) {
  MeasurementReport report;
  report.session = volume.session;

  std::size_t removed = 0;
  LabelVolume filtered = largest_component_filter(volume, &removed);
  if (removed > 0) {
    report.warnings.push_back("largest_component_filter removed " + std::to_string(removed) +
                              " voxel(s) outside the main component");
  }

  report.aux = aux_features(filtered, convention, &report.warnings);
  report.volumes = tumour_volumes(filtered);

  Selection sel = select_diameter(filtered, report.aux);
  report.chosen_kind = sel.chosen_kind;
  report.decision_trace = std::move(sel.trace);

  LabelSet target = sel.chosen_kind == DiameterKind::EM ? LabelSet::extrameatal()
                                                        : LabelSet::whole_tumour();
  report.chosen = region_diameter(filtered, target, convention);

  std::sort(report.warnings.begin(), report.warnings.end());
  return report;
}

} // namespace vsm
