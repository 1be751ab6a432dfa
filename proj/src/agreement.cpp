#include "vsm/agreement.hpp"

#include <cmath>

#include "vsm/csv.hpp"
#include "vsm/errors.hpp"
#include "vsm/special_functions.hpp"

namespace vsm {

std::string to_string(Category c) {
  switch (c) {
    case Category::preop_extrameatal: return "preop_extrameatal";
    case Category::preop_intrameatal_only: return "preop_intrameatal_only";
    default: return "postop";
  }
}

Category parse_category(const std::string& s) {
  std::string norm = s;
  for (char& c : norm) {
    if (c == '-') c = '_';
  }
  if (norm == "preop_extrameatal") return Category::preop_extrameatal;
  if (norm == "preop_intrameatal_only") return Category::preop_intrameatal_only;
  if (norm == "postop" || norm == "post_op") return Category::postop;
  throw FormatError("invalid category: " + s);
}

FilterResult filter_pairs(const std::vector<PairedMeasurement>& pairs, Category category) {
  FilterResult out;
  for (const auto& p : pairs) {
    if (p.category != category) continue;
    if (!p.automated_mm.has_value()) {
      out.excluded.push_back({p.session_id, "missing_automated"});
    } else if (!p.manual_mm.has_value()) {
      out.excluded.push_back({p.session_id, "missing_manual"});
    } else if (!p.automated_kind.has_value() || !p.manual_kind.has_value() ||
               *p.automated_kind != *p.manual_kind) {
      out.excluded.push_back({p.session_id, "kind_mismatch"});
    } else {
      out.included.push_back(p);
    }
  }
  return out;
}

PearsonResult pearson(const std::vector<PairedMeasurement>& included) {
  const int n = static_cast<int>(included.size());
  if (n < 3) throw InsufficientDataError("pearson requires n >= 3, got " + std::to_string(n));

  double mx = 0.0, my = 0.0;
  for (const auto& p : included) {
    mx += *p.automated_mm;
    my += *p.manual_mm;
  }
  mx /= n;
  my /= n;

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& p : included) {
    double dx = *p.automated_mm - mx;
    double dy = *p.manual_mm - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ConstantSeriesError("pearson: a series is constant");
  }

  PearsonResult res;
  res.r = sxy / std::sqrt(sxx * syy);
  if (res.r > 1.0) res.r = 1.0;
  if (res.r < -1.0) res.r = -1.0;

  double dof = n - 2;
  if (std::fabs(res.r) >= 1.0) {
    res.p_value = 0.0;
  } else {
    double t = res.r * std::sqrt(dof / (1.0 - res.r * res.r));
    res.p_value = student_t_two_sided_p(t, dof);
  }
  if (res.p_value < 1e-12) {
    res.p_value = 0.0;
    res.p_underflow = true;
  }
  return res;
}

BlandAltmanResult bland_altman(const std::vector<PairedMeasurement>& included) {
  const int n = static_cast<int>(included.size());
  if (n < 2) {
    throw InsufficientDataError("bland_altman requires n >= 2, got " + std::to_string(n));
  }

  BlandAltmanResult res;
  res.n = n;
  res.points.reserve(included.size());
  double sum = 0.0;
  for (const auto& p : included) {
    double diff = *p.automated_mm - *p.manual_mm;
    double mean = 0.5 * (*p.automated_mm + *p.manual_mm);
    res.points.emplace_back(mean, diff);
    sum += diff;
  }
  res.bias_mm = sum / n;

  double ss = 0.0;
  for (const auto& [mean, diff] : res.points) {
    double d = diff - res.bias_mm;
    ss += d * d;
  }
  res.sd_mm = std::sqrt(ss / (n - 1));
  res.loa_low_mm = res.bias_mm - 1.96 * res.sd_mm;
  res.loa_high_mm = res.bias_mm + 1.96 * res.sd_mm;
  return res;
}

std::optional<AgreementStats> CategoryAnalysis::stats() const {
  if (!ba || !pearson) return std::nullopt;
  AgreementStats s;
  s.n = ba->n;
  s.bias_mm = ba->bias_mm;
  s.sd_mm = ba->sd_mm;
  s.loa_low_mm = ba->loa_low_mm;
  s.loa_high_mm = ba->loa_high_mm;
  s.pearson_r = pearson->r;
  s.p_value = pearson->p_value;
  s.p_underflow = pearson->p_underflow;
  s.excluded = excluded;
  return s;
}

CategoryAnalysis analyze_category(const std::vector<PairedMeasurement>& pairs, Category category) {
  CategoryAnalysis out;
  out.category = category;
  FilterResult filtered = filter_pairs(pairs, category);
  out.excluded = std::move(filtered.excluded);
  out.n_included = static_cast<int>(filtered.included.size());

  try {
    out.ba = bland_altman(filtered.included);
  } catch (const Error& e) {
    out.ba_skip_reason = e.what();
  }
  try {
    out.pearson = pearson(filtered.included);
  } catch (const Error& e) {
    out.pearson_skip_reason = e.what();
  }
  return out;
}

namespace {

std::optional<double> parse_optional_double(const std::string& s, const char* what) {
  if (s.empty()) return std::nullopt;
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw FormatError("");
    return v;
  } catch (...) {
    throw FormatError(std::string("invalid number for ") + what + ": " + s);
  }
}

std::optional<DiameterKind> parse_optional_kind(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "WT") return DiameterKind::WT;
  if (s == "EM") return DiameterKind::EM;
  throw FormatError("invalid measurement kind (expected WT or EM): " + s);
}

} // namespace

std::vector<PairedMeasurement> parse_pairs_csv(const std::string& text) {
  auto rows = parse_csv(text);
  if (rows.empty()) throw FormatError("pairs CSV is empty");

  const std::vector<std::string> expected = {"case_id",      "session_id", "category",
                                             "automated_mm", "automated_kind",
                                             "manual_mm",    "manual_kind"};
  if (rows[0] != expected) {
    throw FormatError("pairs CSV header must be "
                      "case_id,session_id,category,automated_mm,automated_kind,manual_mm,manual_kind");
  }

  std::vector<PairedMeasurement> pairs;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != expected.size()) {
      throw FormatError("pairs CSV row " + std::to_string(i + 1) + " has " +
                        std::to_string(r.size()) + " fields, expected 7");
    }
    PairedMeasurement p;
    p.case_id = r[0];
    p.session_id = r[1];
    p.category = parse_category(r[2]);
    p.automated_mm = parse_optional_double(r[3], "automated_mm");
    p.automated_kind = parse_optional_kind(r[4]);
    p.manual_mm = parse_optional_double(r[5], "manual_mm");
    p.manual_kind = parse_optional_kind(r[6]);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

} // namespace vsm
