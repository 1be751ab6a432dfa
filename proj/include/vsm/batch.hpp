#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vsm/measurement.hpp"

namespace vsm {

struct ManifestRow {
  std::filesystem::path header_path;                  // resolved against the manifest
  std::optional<OperativeStatus> status_override;
  std::filesystem::path output_stem;
};

struct BatchManifest {
  std::vector<ManifestRow> rows;
};

// Manifest CSV: header,operative_status,output_stem. operative_status may be
// empty (keep the session's own), pre_op or post_op. Paths are resolved
// relative to the manifest file. Throws ManifestError on parse problems.
BatchManifest parse_manifest(const std::filesystem::path& path);

struct BatchOptions {
  Convention convention = Convention::pixel_centers;
  bool write_svg = false;
  int threads = 0; // 0: library default
};

struct BatchRowResult {
  std::string case_id;
  std::string session_id;
  std::optional<MeasurementReport> report;
  std::string error; // short code: EmptyTumour, IoError, FormatError, Error
};

struct BatchResult {
  std::vector<BatchRowResult> rows; // manifest order
  std::string csv_text;
};

// Runs every session (rows fan out across a worker pool), writes one report
// JSON (and optional SVG) per row at its output stem, and assembles the
// results CSV in manifest order. Row failures land in the CSV error column;
// the batch never aborts on them.
BatchResult run_batch(const BatchManifest& manifest, const BatchOptions& options);

} // namespace vsm
