#include "vsm/report_json.hpp"

#include <cmath>

#include "vsm/io_util.hpp"

namespace vsm {

using nlohmann::json;

double round3(double v) {
  return std::round(v * 1000.0) / 1000.0;
}

namespace {

json point_json(const Point2& p) {
  return json::array({round3(p.x), round3(p.y)});
}

json point_raw_json(const Point2& p) {
  return json::array({p.x, p.y});
}

json diameter_json(const Diameter& d) {
  json j;
  j["kind"] = to_string(d.kind);
  j["length_mm"] = round3(d.length_mm);
  j["length_mm_raw"] = d.length_mm;
  j["slice_index"] = d.slice_index;
  j["p_mm"] = point_json(d.segment.p);
  j["p_mm_raw"] = point_raw_json(d.segment.p);
  j["q_mm"] = point_json(d.segment.q);
  j["q_mm_raw"] = point_raw_json(d.segment.q);
  j["convention"] = to_string(d.convention);
  return j;
}

const char* kInterfaceNote =
    "interface direction is a line fit to the intrameatal/extrameatal boundary, "
    "used as a proxy for the posterior petrous pyramid orientation";

} // namespace

json report_to_json(const MeasurementReport& report) {
  json j;
  j["session"] = {{"case_id", report.session.case_id},
                  {"session_id", report.session.session_id},
                  {"operative_status", to_string(report.session.operative_status)},
                  {"modality", to_string(report.session.modality)}};
  j["chosen"] = diameter_json(report.chosen);
  j["chosen"]["kind"] = to_string(report.chosen_kind);

  json aux;
  aux["d_intra_par"] = report.aux.d_intra_par ? diameter_json(*report.aux.d_intra_par) : json();
  aux["d_extra_par"] = report.aux.d_extra_par ? diameter_json(*report.aux.d_extra_par) : json();
  aux["d_extra_perp"] = report.aux.d_extra_perp ? diameter_json(*report.aux.d_extra_perp) : json();
  aux["interface_source"] = to_string(report.aux.interface_source);
  if (report.aux.interface_dir) {
    aux["interface_dir"] = json::array({report.aux.interface_dir->dx, report.aux.interface_dir->dy});
    aux["interface_note"] = kInterfaceNote;
  } else {
    aux["interface_dir"] = json();
  }
  j["aux"] = aux;

  j["volumes_mm3"] = {{"intrameatal", round3(report.volumes.intrameatal_mm3)},
                      {"intrameatal_raw", report.volumes.intrameatal_mm3},
                      {"extrameatal", round3(report.volumes.extrameatal_mm3)},
                      {"extrameatal_raw", report.volumes.extrameatal_mm3},
                      {"whole", round3(report.volumes.whole_mm3)},
                      {"whole_raw", report.volumes.whole_mm3}};

  json trace = json::array();
  for (const auto& step : report.decision_trace) trace.push_back(step.str());
  j["decision_trace"] = trace;
  j["warnings"] = report.warnings;
  return j;
}

std::string report_json_text(const MeasurementReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

namespace {

void check(std::vector<std::string>& problems, bool ok, const std::string& msg) {
  if (!ok) problems.push_back(msg);
}

bool is_point(const json& j) {
  return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number();
}

void check_diameter(std::vector<std::string>& problems, const json& d, const std::string& where,
                    bool top_level) {
  if (!d.is_object()) {
    problems.push_back(where + " is not an object");
    return;
  }
  check(problems, d.contains("kind") && d["kind"].is_string(), where + ".kind missing");
  if (top_level && d.contains("kind")) {
    std::string k = d["kind"].get<std::string>();
    check(problems, k == "WT" || k == "EM", where + ".kind must be WT or EM");
  }
  check(problems, d.contains("length_mm") && d["length_mm"].is_number() &&
                      d["length_mm"].get<double>() >= 0.0,
        where + ".length_mm missing or negative");
  check(problems, d.contains("slice_index") && d["slice_index"].is_number_integer(),
        where + ".slice_index missing");
  check(problems, d.contains("p_mm") && is_point(d["p_mm"]), where + ".p_mm not a 2-point");
  check(problems, d.contains("q_mm") && is_point(d["q_mm"]), where + ".q_mm not a 2-point");
  if (d.contains("convention")) {
    std::string c = d["convention"].get<std::string>();
    check(problems, c == "pixel_centers" || c == "pixel_corners", where + ".convention invalid");
  } else {
    problems.push_back(where + ".convention missing");
  }
}

} // namespace

std::vector<std::string> validate_report_json(const json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) {
    problems.push_back("report is not a JSON object");
    return problems;
  }

  if (j.contains("session") && j["session"].is_object()) {
    const json& s = j["session"];
    check(problems, s.contains("case_id") && s["case_id"].is_string(), "session.case_id missing");
    check(problems, s.contains("session_id") && s["session_id"].is_string(),
          "session.session_id missing");
    std::string st = s.value("operative_status", "");
    check(problems, st == "pre_op" || st == "post_op", "session.operative_status invalid");
    std::string mo = s.value("modality", "");
    check(problems, mo == "T1C" || mo == "T2" || mo == "unknown", "session.modality invalid");
  } else {
    problems.push_back("session missing");
  }

  if (j.contains("chosen")) {
    check_diameter(problems, j["chosen"], "chosen", true);
  } else {
    problems.push_back("chosen missing");
  }

  if (j.contains("aux") && j["aux"].is_object()) {
    const json& a = j["aux"];
    for (const char* key : {"d_intra_par", "d_extra_par", "d_extra_perp"}) {
      if (!a.contains(key)) {
        problems.push_back(std::string("aux.") + key + " missing");
      } else if (!a[key].is_null()) {
        check_diameter(problems, a[key], std::string("aux.") + key, false);
      }
    }
    std::string src = a.value("interface_source", "");
    check(problems, src == "per_slice" || src == "volume_aggregate" || src == "absent",
          "aux.interface_source invalid");
  } else {
    problems.push_back("aux missing");
  }

  if (j.contains("volumes_mm3") && j["volumes_mm3"].is_object()) {
    for (const char* key : {"intrameatal", "extrameatal", "whole"}) {
      check(problems, j["volumes_mm3"].contains(key) && j["volumes_mm3"][key].is_number(),
            std::string("volumes_mm3.") + key + " missing");
    }
  } else {
    problems.push_back("volumes_mm3 missing");
  }

  if (j.contains("decision_trace") && j["decision_trace"].is_array()) {
    check(problems, !j["decision_trace"].empty(), "decision_trace empty");
    for (const auto& t : j["decision_trace"]) {
      check(problems, t.is_string(), "decision_trace entries must be strings");
    }
  } else {
    problems.push_back("decision_trace missing");
  }

  if (j.contains("warnings") && j["warnings"].is_array()) {
    for (const auto& w : j["warnings"]) {
      check(problems, w.is_string(), "warnings entries must be strings");
    }
  } else {
    problems.push_back("warnings missing");
  }
  return problems;
}

json category_analysis_to_json(const CategoryAnalysis& analysis) {
  json j;
  j["category"] = to_string(analysis.category);
  j["n"] = analysis.n_included;

  json excluded = json::array();
  for (const auto& e : analysis.excluded) {
    excluded.push_back({{"session_id", e.session_id}, {"reason", e.reason}});
  }
  j["excluded"] = excluded;

  if (analysis.ba) {
    j["bias_mm"] = round3(analysis.ba->bias_mm);
    j["bias_mm_raw"] = analysis.ba->bias_mm;
    j["sd_mm"] = round3(analysis.ba->sd_mm);
    j["sd_mm_raw"] = analysis.ba->sd_mm;
    j["loa_low_mm"] = round3(analysis.ba->loa_low_mm);
    j["loa_low_mm_raw"] = analysis.ba->loa_low_mm;
    j["loa_high_mm"] = round3(analysis.ba->loa_high_mm);
    j["loa_high_mm_raw"] = analysis.ba->loa_high_mm;
  } else {
    j["bland_altman_skipped"] = analysis.ba_skip_reason;
  }

  if (analysis.pearson) {
    j["pearson_r"] = analysis.pearson->r;
    j["p_value"] = analysis.pearson->p_value;
    if (analysis.pearson->p_underflow) j["p_underflow"] = true;
  } else {
    j["pearson_skipped"] = analysis.pearson_skip_reason;
  }
  return j;
}

std::string agreement_json_text(const CategoryAnalysis& analysis) {
  return category_analysis_to_json(analysis).dump(2) + "\n";
}

std::string plot_points_csv(const BlandAltmanResult& ba) {
  std::string out = "mean_mm,diff_mm\n";
  for (const auto& [mean, diff] : ba.points) {
    out += format_fixed(mean, 3) + "," + format_fixed(diff, 3) + "\n";
  }
  return out;
}

} // namespace vsm
