#include "vsm/batch.hpp"

#include <omp.h>

#include "vsm/csv.hpp"
#include "vsm/errors.hpp"
#include "vsm/io_util.hpp"
#include "vsm/render.hpp"
#include "vsm/report_json.hpp"

namespace vsm {

BatchManifest parse_manifest(const std::filesystem::path& path) {
  std::string text = read_file(path);
  std::vector<std::vector<std::string>> rows;
  try {
    rows = parse_csv(text);
  } catch (const FormatError& e) {
    throw ManifestError(e.what());
  }
  if (rows.empty()) throw ManifestError("manifest is empty");

  const std::vector<std::string> expected = {"header", "operative_status", "output_stem"};
  if (rows[0] != expected) {
    throw ManifestError("manifest header must be header,operative_status,output_stem");
  }

  const std::filesystem::path base = path.parent_path();
  BatchManifest manifest;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 3) {
      throw ManifestError("manifest row " + std::to_string(i + 1) + " has " +
                          std::to_string(r.size()) + " fields, expected 3");
    }
    ManifestRow row;
    if (r[0].empty() || r[2].empty()) {
      throw ManifestError("manifest row " + std::to_string(i + 1) +
                          ": header and output_stem must be non-empty");
    }
    row.header_path = base / r[0];
    if (!r[1].empty()) {
      try {
        row.status_override = parse_operative_status(r[1]);
      } catch (const FormatError& e) {
        throw ManifestError("manifest row " + std::to_string(i + 1) + ": " + e.what());
      }
    }
    row.output_stem = base / r[2];
    manifest.rows.push_back(std::move(row));
  }
  return manifest;
}

namespace {

const std::vector<std::string> kCsvColumns = {
    "case_id",        "session_id",     "chosen_kind",     "chosen_mm",
    "slice_index",    "d_intra_par_mm", "d_extra_par_mm",  "d_extra_perp_mm",
    "intra_mm3",      "extra_mm3",      "whole_mm3",       "warnings",
    "error"};

std::string error_code(const std::exception& e) {
  if (dynamic_cast<const EmptyTumourError*>(&e)) return "EmptyTumour";
  if (dynamic_cast<const MissingFeaturesError*>(&e)) return "MissingFeatures";
  if (dynamic_cast<const IoError*>(&e)) return "IoError";
  if (dynamic_cast<const FormatError*>(&e)) return "FormatError";
  return "Error";
}

std::string opt_mm(const std::optional<Diameter>& d) {
  return d ? format_fixed(d->length_mm, 3) : std::string();
}

std::string join_warnings(const std::vector<std::string>& warnings) {
  std::string out;
  for (size_t i = 0; i < warnings.size(); ++i) {
    if (i) out += "; ";
    out += warnings[i];
  }
  return out;
}

} // namespace

BatchResult run_batch(const BatchManifest& manifest, const BatchOptions& options) {
  const std::int64_t n = static_cast<std::int64_t>(manifest.rows.size());
  BatchResult result;
  result.rows.resize(manifest.rows.size());

  int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    const ManifestRow& row = manifest.rows[static_cast<std::size_t>(i)];
    BatchRowResult& out = result.rows[static_cast<std::size_t>(i)];
    try {
      LabelVolume volume = load_canonical(row.header_path);
      if (row.status_override) volume.session.operative_status = *row.status_override;
      out.case_id = volume.session.case_id;
      out.session_id = volume.session.session_id;

      MeasurementReport report = measure_session(volume, options.convention);
      atomic_write_file(row.output_stem.string() + ".json", report_json_text(report));
      if (options.write_svg) {
        atomic_write_file(row.output_stem.string() + ".svg", render_overlay(volume, report));
      }
      out.report = std::move(report);
    } catch (const std::exception& e) {
      out.error = error_code(e);
    }
  }

  // CSV assembly is serial and in manifest order, so the output is identical
  // whatever the worker count.
  std::string csv = csv_join(kCsvColumns) + "\n";
  for (const auto& row : result.rows) {
    std::vector<std::string> fields(kCsvColumns.size());
    fields[0] = row.case_id;
    fields[1] = row.session_id;
    if (row.report) {
      const MeasurementReport& r = *row.report;
      fields[2] = to_string(r.chosen_kind);
      fields[3] = format_fixed(r.chosen.length_mm, 3);
      fields[4] = std::to_string(r.chosen.slice_index);
      fields[5] = opt_mm(r.aux.d_intra_par);
      fields[6] = opt_mm(r.aux.d_extra_par);
      fields[7] = opt_mm(r.aux.d_extra_perp);
      fields[8] = format_fixed(r.volumes.intrameatal_mm3, 3);
      fields[9] = format_fixed(r.volumes.extrameatal_mm3, 3);
      fields[10] = format_fixed(r.volumes.whole_mm3, 3);
      fields[11] = join_warnings(r.warnings);
    } else {
      fields[12] = row.error;
    }
    csv += csv_join(fields) + "\n";
  }
  result.csv_text = std::move(csv);
  return result;
}

} // namespace vsm
