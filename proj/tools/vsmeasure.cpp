#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vsm/agreement.hpp"
#include "vsm/batch.hpp"
#include "vsm/csv.hpp"
#include "vsm/errors.hpp"
#include "vsm/io_util.hpp"
#include "vsm/nifti.hpp"
#include "vsm/render.hpp"
#include "vsm/report_json.hpp"

namespace {

// Exit codes: 0 success, 1 input/IO error, 2 empty tumour, 3 schema/manifest.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kEmptyTumour = 2;
constexpr int kManifestError = 3;

int classify_exception(const std::exception& e) {
  if (dynamic_cast<const vsm::EmptyTumourError*>(&e)) return kEmptyTumour;
  if (dynamic_cast<const vsm::ManifestError*>(&e)) return kManifestError;
  return kInputError;
}

struct ImportArgs {
  std::string input;
  std::string output;
  std::string case_id;
  std::string session_id;
  std::string modality = "unknown";
  std::string label_map = "0=0,1=1,2=2";
  bool post_op = false;
};

vsm::LabelMap parse_label_map(const std::string& text) {
  vsm::LabelMap map;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t comma = text.find(',', pos);
    std::string entry = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                    : comma - pos);
    size_t eq = entry.find('=');
    if (eq == std::string::npos) throw vsm::FormatError("label map entry missing '=': " + entry);
    long long from = std::stoll(entry.substr(0, eq));
    long long to = std::stoll(entry.substr(eq + 1));
    if (to < 0 || to > 2) throw vsm::FormatError("label map target must be 0, 1 or 2: " + entry);
    map[from] = static_cast<std::uint8_t>(to);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (map.empty()) throw vsm::FormatError("label map is empty");
  return map;
}

int cmd_import(const ImportArgs& args) {
  vsm::LabelVolume volume = vsm::import_nifti(args.input, parse_label_map(args.label_map));
  volume.session.case_id = args.case_id.empty()
                               ? std::filesystem::path(args.input).stem().stem().string()
                               : args.case_id;
  volume.session.session_id = args.session_id.empty() ? "1" : args.session_id;
  volume.session.operative_status =
      args.post_op ? vsm::OperativeStatus::post_op : vsm::OperativeStatus::pre_op;
  volume.session.modality = vsm::parse_modality(args.modality);
  vsm::save_canonical(volume, args.output);
  return kOk;
}

struct MeasureArgs {
  std::string input;
  std::string output;
  std::string svg_path;
  std::string convention = "pixel-centers";
  bool post_op = false;
};

int cmd_measure(const MeasureArgs& args, bool svg_only) {
  vsm::LabelVolume volume = vsm::load_canonical(args.input);
  if (args.post_op) volume.session.operative_status = vsm::OperativeStatus::post_op;
  vsm::Convention convention = vsm::parse_convention(args.convention);

  vsm::MeasurementReport report = vsm::measure_session(volume, convention);
  if (!svg_only && !args.output.empty()) {
    vsm::atomic_write_file(args.output, vsm::report_json_text(report));
  }
  if (!args.svg_path.empty()) {
    vsm::atomic_write_file(args.svg_path, vsm::render_overlay(volume, report));
  }
  return kOk;
}

struct BatchArgs {
  std::string manifest;
  std::string output;
  std::string convention = "pixel-centers";
  bool svg = false;
  int jobs = 0;
};

int cmd_batch(const BatchArgs& args) {
  vsm::BatchManifest manifest = vsm::parse_manifest(args.manifest);
  vsm::BatchOptions options;
  options.convention = vsm::parse_convention(args.convention);
  options.write_svg = args.svg;
  options.threads = args.jobs;
  vsm::BatchResult result = vsm::run_batch(manifest, options);
  vsm::atomic_write_file(args.output, result.csv_text);
  for (const auto& row : result.rows) {
    if (!row.error.empty()) {
      std::cerr << "vsmeasure: batch row failed (" << row.error << ")\n";
    }
  }
  return kOk;
}

struct AgreeArgs {
  std::string pairs;
  std::string auto_csv;
  std::string manual_csv;
  std::string category;
  std::string output;
  std::string points_path;
  std::string ba_svg;
  std::string scatter_svg;
};

std::vector<vsm::PairedMeasurement> load_pairs(const AgreeArgs& args) {
  if (!args.pairs.empty()) {
    return vsm::parse_pairs_csv(vsm::read_file(args.pairs));
  }
  // Separate automated and manual tables, joined on (case_id, session_id).
  // automated: case_id,session_id,category,automated_mm,automated_kind
  // manual:    case_id,session_id,manual_mm,manual_kind
  auto arows = vsm::parse_csv(vsm::read_file(args.auto_csv));
  auto mrows = vsm::parse_csv(vsm::read_file(args.manual_csv));
  const std::vector<std::string> aheader = {"case_id", "session_id", "category", "automated_mm",
                                            "automated_kind"};
  const std::vector<std::string> mheader = {"case_id", "session_id", "manual_mm", "manual_kind"};
  if (arows.empty() || arows[0] != aheader) {
    throw vsm::FormatError("automated CSV header must be "
                           "case_id,session_id,category,automated_mm,automated_kind");
  }
  if (mrows.empty() || mrows[0] != mheader) {
    throw vsm::FormatError("manual CSV header must be case_id,session_id,manual_mm,manual_kind");
  }

  auto parse_kind = [](const std::string& s) -> std::optional<vsm::DiameterKind> {
    if (s.empty()) return std::nullopt;
    if (s == "WT") return vsm::DiameterKind::WT;
    if (s == "EM") return vsm::DiameterKind::EM;
    throw vsm::FormatError("invalid kind: " + s);
  };
  auto parse_value = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
  };

  std::vector<vsm::PairedMeasurement> pairs;
  for (size_t i = 1; i < arows.size(); ++i) {
    const auto& r = arows[i];
    if (r.size() != 5) throw vsm::FormatError("automated CSV row has wrong field count");
    vsm::PairedMeasurement p;
    p.case_id = r[0];
    p.session_id = r[1];
    p.category = vsm::parse_category(r[2]);
    p.automated_mm = parse_value(r[3]);
    p.automated_kind = parse_kind(r[4]);
    for (size_t k = 1; k < mrows.size(); ++k) {
      const auto& m = mrows[k];
      if (m.size() != 4) throw vsm::FormatError("manual CSV row has wrong field count");
      if (m[0] == p.case_id && m[1] == p.session_id) {
        p.manual_mm = parse_value(m[2]);
        p.manual_kind = parse_kind(m[3]);
        break;
      }
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

int cmd_agree(const AgreeArgs& args) {
  std::vector<vsm::PairedMeasurement> pairs = load_pairs(args);
  vsm::Category category = vsm::parse_category(args.category);
  vsm::CategoryAnalysis analysis = vsm::analyze_category(pairs, category);

  vsm::atomic_write_file(args.output, vsm::agreement_json_text(analysis));
  if (!args.points_path.empty() && analysis.ba) {
    vsm::atomic_write_file(args.points_path, vsm::plot_points_csv(*analysis.ba));
  }
  if (!args.ba_svg.empty() && analysis.ba) {
    vsm::atomic_write_file(args.ba_svg, vsm::render_bland_altman_svg(*analysis.ba));
  }
  if (!args.scatter_svg.empty()) {
    vsm::FilterResult filtered = vsm::filter_pairs(pairs, category);
    vsm::atomic_write_file(args.scatter_svg, vsm::render_scatter_svg(filtered.included));
  }
  if (!analysis.ba) {
    std::cerr << "vsmeasure: agreement skipped: " << args.category << ": "
              << analysis.ba_skip_reason << "\n";
  } else if (!analysis.pearson) {
    std::cerr << "vsmeasure: pearson skipped: " << args.category << ": "
              << analysis.pearson_skip_reason << "\n";
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vestibular schwannoma measurement toolkit"};
  app.require_subcommand(1);

  ImportArgs import_args;
  auto* import_cmd = app.add_subcommand("import", "Convert a NIfTI-1 mask to canonical format");
  import_cmd->add_option("input", import_args.input, "Input .nii or .nii.gz")->required();
  import_cmd->add_option("-o,--output", import_args.output, "Output stem or .vsm.json path")
      ->required();
  import_cmd->add_option("--case-id", import_args.case_id, "Case identifier");
  import_cmd->add_option("--session-id", import_args.session_id, "Session identifier");
  import_cmd->add_option("--modality", import_args.modality, "T1C, T2 or unknown");
  import_cmd->add_option("--label-map", import_args.label_map,
                         "Stored-value remapping, e.g. 0=0,1=1,2=2");
  import_cmd->add_flag("--post-op", import_args.post_op, "Mark the session post-operative");

  MeasureArgs measure_args;
  auto* measure_cmd = app.add_subcommand("measure", "Measure one canonical volume");
  measure_cmd->add_option("input", measure_args.input, "Canonical .vsm.json header")->required();
  measure_cmd->add_option("-o,--output", measure_args.output, "Report JSON path")->required();
  measure_cmd->add_option("--svg", measure_args.svg_path, "Also write an overlay SVG");
  measure_cmd->add_option("--convention", measure_args.convention,
                          "pixel-centers or pixel-corners");
  measure_cmd->add_flag("--post-op", measure_args.post_op, "Override session to post-operative");

  MeasureArgs render_args;
  auto* render_cmd = app.add_subcommand("render", "Render the measurement overlay SVG");
  render_cmd->add_option("input", render_args.input, "Canonical .vsm.json header")->required();
  render_cmd->add_option("-o,--output", render_args.svg_path, "Overlay SVG path")->required();
  render_cmd->add_option("--convention", render_args.convention,
                         "pixel-centers or pixel-corners");
  render_cmd->add_flag("--post-op", render_args.post_op, "Override session to post-operative");

  BatchArgs batch_args;
  auto* batch_cmd = app.add_subcommand("batch", "Measure every session in a manifest");
  batch_cmd->add_option("manifest", batch_args.manifest, "Manifest CSV")->required();
  batch_cmd->add_option("-o,--output", batch_args.output, "Results CSV path")->required();
  batch_cmd->add_option("--convention", batch_args.convention, "pixel-centers or pixel-corners");
  batch_cmd->add_flag("--svg", batch_args.svg, "Write an overlay SVG per session");
  batch_cmd->add_option("--jobs", batch_args.jobs, "Worker count (0: all cores)");

  AgreeArgs agree_args;
  auto* agree_cmd = app.add_subcommand("agree", "Automated vs manual agreement statistics");
  agree_cmd->add_option("--pairs", agree_args.pairs, "Merged pairs CSV");
  agree_cmd->add_option("--auto", agree_args.auto_csv, "Automated measurements CSV");
  agree_cmd->add_option("--manual", agree_args.manual_csv, "Manual measurements CSV");
  agree_cmd->add_option("--category", agree_args.category,
                        "preop-extrameatal, preop-intrameatal-only or postop")
      ->required();
  agree_cmd->add_option("-o,--output", agree_args.output, "Stats JSON path")->required();
  agree_cmd->add_option("--points", agree_args.points_path, "Bland-Altman plot points CSV");
  agree_cmd->add_option("--ba-svg", agree_args.ba_svg, "Bland-Altman plot SVG");
  agree_cmd->add_option("--scatter-svg", agree_args.scatter_svg, "Scatter plot SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e); // prints usage/errors to the right stream
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (import_cmd->parsed()) return cmd_import(import_args);
    if (measure_cmd->parsed()) return cmd_measure(measure_args, false);
    if (render_cmd->parsed()) return cmd_measure(render_args, true);
    if (batch_cmd->parsed()) return cmd_batch(batch_args);
    if (agree_cmd->parsed()) {
      if (agree_args.pairs.empty() == (agree_args.auto_csv.empty() || agree_args.manual_csv.empty())) {
        throw vsm::FormatError("agree needs either --pairs or both --auto and --manual");
      }
      return cmd_agree(agree_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "vsmeasure: error: " << e.what() << "\n";
    return classify_exception(e);
  }
  return kOk;
}
