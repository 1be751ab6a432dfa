#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vsm/agreement.hpp"
#include "vsm/measurement.hpp"

namespace vsm {

// Report JSON: keys `session`, `chosen`, `aux`, `volumes_mm3`,
// `decision_trace`, `warnings`. mm/mm^3 values are rounded to 3 decimals;
// full-precision values sit beside them under `_raw` keys.
nlohmann::json report_to_json(const MeasurementReport& report);
std::string report_json_text(const MeasurementReport& report);

// Returns schema violations (empty means valid).
std::vector<std::string> validate_report_json(const nlohmann::json& j);

nlohmann::json category_analysis_to_json(const CategoryAnalysis& analysis);
std::string agreement_json_text(const CategoryAnalysis& analysis);

// Bland-Altman plot points as CSV: header mean_mm,diff_mm.
std::string plot_points_csv(const BlandAltmanResult& ba);

double round3(double v);

} // namespace vsm
