#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsm/measurement.hpp"

namespace vsm {

enum class Category { preop_extrameatal, preop_intrameatal_only, postop };

std::string to_string(Category c);
Category parse_category(const std::string& s);

// One automated/manual measurement pair. A pair enters statistics only when
// both values are present and both kinds agree.
struct PairedMeasurement {
  std::string case_id;
  std::string session_id;
  std::optional<double> automated_mm;
  std::optional<double> manual_mm;
  std::optional<DiameterKind> automated_kind; // WT or EM
  std::optional<DiameterKind> manual_kind;
  Category category = Category::preop_extrameatal;
};

struct Exclusion {
  std::string session_id;
  std::string reason; // missing_automated | missing_manual | kind_mismatch
};

struct FilterResult {
  std::vector<PairedMeasurement> included;
  std::vector<Exclusion> excluded;
};

FilterResult filter_pairs(const std::vector<PairedMeasurement>& pairs, Category category);

struct PearsonResult {
  double r = 0.0;
  double p_value = 0.0;
  bool p_underflow = false; // p below 1e-12, reported as 0
};

// Sample Pearson correlation of (automated, manual) with a two-sided p-value
// from the t statistic r*sqrt((n-2)/(1-r^2)). Requires n >= 3 and
// non-constant series.
PearsonResult pearson(const std::vector<PairedMeasurement>& included);

struct BlandAltmanResult {
  int n = 0;
  double bias_mm = 0.0;
  double sd_mm = 0.0; // sample standard deviation, n-1 denominator
  double loa_low_mm = 0.0;
  double loa_high_mm = 0.0;
  std::vector<std::pair<double, double>> points; // (mean_mm, diff_mm) per pair
};

// Differences are automated - manual; limits of agreement are bias +/- 1.96*sd.
// Requires n >= 2.
BlandAltmanResult bland_altman(const std::vector<PairedMeasurement>& included);

struct AgreementStats {
  int n = 0;
  double bias_mm = 0.0;
  double sd_mm = 0.0;
  double loa_low_mm = 0.0;
  double loa_high_mm = 0.0;
  double pearson_r = 0.0;
  double p_value = 0.0;
  bool p_underflow = false;
  std::vector<Exclusion> excluded;
};

// Everything one category produces; parts that could not be computed carry a
// skip reason instead of numbers.
struct CategoryAnalysis {
  Category category = Category::preop_extrameatal;
  std::vector<Exclusion> excluded;
  int n_included = 0;
  std::optional<BlandAltmanResult> ba;
  std::optional<PearsonResult> pearson;
  std::string ba_skip_reason;
  std::string pearson_skip_reason;

  std::optional<AgreementStats> stats() const;
};

CategoryAnalysis analyze_category(const std::vector<PairedMeasurement>& pairs, Category category);

// Pairing table: CSV with header
// case_id,session_id,category,automated_mm,automated_kind,manual_mm,manual_kind.
// Empty fields denote missing values.
std::vector<PairedMeasurement> parse_pairs_csv(const std::string& text);

} // namespace vsm
