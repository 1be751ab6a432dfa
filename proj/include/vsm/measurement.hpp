#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsm/geometry.hpp"
#include "vsm/morphology.hpp"
#include "vsm/volume.hpp"

namespace vsm {

enum class DiameterKind { WT, EM, intra_par, extra_par, extra_perp };

std::string to_string(DiameterKind k);
std::string to_string(Convention c);
Convention parse_convention(const std::string& s);

// A measured line segment: what was measured, how long, where.
struct Diameter {
  DiameterKind kind = DiameterKind::WT;
  double length_mm = 0.0;
  Segment2D segment;
  int slice_index = 0;
  Convention convention = Convention::pixel_centers;
};

enum class InterfaceSource { per_slice, volume_aggregate, absent };

std::string to_string(InterfaceSource s);

// The three directional features used by the diameter selection rule, plus
// the interface direction they were measured against.
struct AuxFeatures {
  std::optional<Diameter> d_intra_par;
  std::optional<Diameter> d_extra_par;
  std::optional<Diameter> d_extra_perp;
  std::optional<UnitDir2D> interface_dir;
  InterfaceSource interface_source = InterfaceSource::absent;
};

struct Volumes {
  double intrameatal_mm3 = 0.0;
  double extrameatal_mm3 = 0.0;
  double whole_mm3 = 0.0;
};

struct TraceStep {
  std::string rule;
  std::string comparison;
  std::string outcome;

  std::string str() const { return rule + ": " + comparison + " -> " + outcome; }
};

struct MeasurementReport {
  SessionMeta session;
  Diameter chosen;
  DiameterKind chosen_kind = DiameterKind::WT; // WT or EM
  AuxFeatures aux;
  Volumes volumes;
  std::vector<TraceStep> decision_trace;
  std::vector<std::string> warnings;
};

// Maximum in-plane diameter of the selected region: per axial slice, boundary
// points -> convex hull -> rotating calipers; the maximum over slices wins,
// length ties going to the smallest slice index. Throws EmptyRegionError when
// the selector matches nothing.
Diameter region_diameter(const LabelVolume& volume, LabelSet selector, Convention convention);

// Directional features measured on slices containing both labels, against
// each slice's fitted interface direction (volume-aggregate fallback when a
// slice's interface is degenerate). All three are absent when no intrameatal/
// extrameatal interface exists anywhere.
AuxFeatures aux_features(const LabelVolume& volume, Convention convention,
                         std::vector<std::string>* warnings = nullptr);

Volumes tumour_volumes(const LabelVolume& volume);

struct Selection {
  DiameterKind chosen_kind = DiameterKind::WT;
  std::vector<TraceStep> trace;
};

// Diameter choice: post-operative and purely intrameatal volumes use the
// whole-tumour diameter; otherwise the extrameatal diameter is shown only
// when the extrameatal region dominates the parallel comparison and is more
// than 2 mm deep perpendicular to the interface.
Selection select_diameter(const LabelVolume& volume, const AuxFeatures& aux);

// Full pipeline for one session: largest-component filtering, auxiliary
// features, volumes, diameter selection, and the chosen measurement.
MeasurementReport measure_session(const LabelVolume& volume, Convention convention);

} // namespace vsm
