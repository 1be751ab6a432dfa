// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "nifti_ref_writer.hpp"
#include "vsm/agreement.hpp"
#include "vsm/batch.hpp"
#include "vsm/errors.hpp"
#include "vsm/geometry.hpp"
#include "vsm/io_util.hpp"
#include "vsm/measurement.hpp"
#include "vsm/morphology.hpp"
#include "vsm/nifti.hpp"
#include "vsm/reference.hpp"
#include "vsm/render.hpp"
#include "vsm/report_json.hpp"
#include "vsm/special_functions.hpp"

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

std::vector<vsm::Point2> random_points(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::vector<vsm::Point2> pts(static_cast<size_t>(n));
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  return pts;
}

// --- criterion 1 & 2: calipers oracle equivalence + hull correctness -------

void run_hull_and_calipers() {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> count(3, 64);

  const int kSets = 1000;
  bool diameters_ok = true;
  bool containment_ok = true;
  bool idempotent_ok = true;

  auto t0 = std::chrono::steady_clock::now();
  for (int iter = 0; iter < kSets; ++iter) {
    auto pts = random_points(rng, count(rng));
    vsm::Hull hull = vsm::convex_hull(pts);

    double fast = vsm::max_diameter(hull).length_mm;
    double brute = vsm::ref::diameter_allpairs(pts).length_mm;
    double denom = std::max(1.0, std::fabs(brute));
    if (std::fabs(fast - brute) / denom > 1e-9) diameters_ok = false;

    for (const auto& p : pts) {
      if (!vsm::ref::hull_contains(hull, p)) containment_ok = false;
    }
    vsm::Hull again = vsm::convex_hull(hull.vertices);
    if (!(again.vertices == hull.vertices)) idempotent_ok = false;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  criterion(1, "rotating calipers equals all-pairs oracle on 1000 random sets",
            diameters_ok && seconds < 5.0,
            "rel err <= 1e-9, " + vsm::format_fixed(seconds, 2) + " s");
  criterion(2, "hull contains every input point and hull(hull(P)) = hull(P)",
            containment_ok && idempotent_ok);
}

// --- criterion 3: decision rule truth table ---------------------------------

vsm::AuxFeatures synth_aux(double intra_par, double extra_par, double extra_perp) {
  auto mk = [](vsm::DiameterKind kind, double len) {
    vsm::Diameter d;
    d.kind = kind;
    d.length_mm = len;
    d.segment = vsm::Segment2D::between({0, 0}, {len, 0});
    return d;
  };
  vsm::AuxFeatures aux;
  aux.d_intra_par = mk(vsm::DiameterKind::intra_par, intra_par);
  aux.d_extra_par = mk(vsm::DiameterKind::extra_par, extra_par);
  aux.d_extra_perp = mk(vsm::DiameterKind::extra_perp, extra_perp);
  aux.interface_source = vsm::InterfaceSource::per_slice;
  return aux;
}

void run_decision_table() {
  using vsm::DiameterKind;

  vsm::LabelVolume with_extra = fixtures::make_volume(4, 4, 1);
  with_extra.at(0, 0, 0) = vsm::LabelVolume::kIntrameatal;
  with_extra.at(1, 0, 0) = vsm::LabelVolume::kExtrameatal;
  vsm::LabelVolume intra_only = fixtures::make_volume(4, 4, 1);
  intra_only.at(0, 0, 0) = vsm::LabelVolume::kIntrameatal;
  vsm::LabelVolume post = with_extra;
  post.session.operative_status = vsm::OperativeStatus::post_op;

  struct Case {
    const vsm::LabelVolume* volume;
    double intra_par, extra_par, extra_perp;
    DiameterKind expect;
  };
  const Case table[] = {
      {&post, 5.0, 7.0, 9.0, DiameterKind::WT},       // post-operative
      {&intra_only, 0.0, 0.0, 0.0, DiameterKind::WT}, // intracanalicular
      {&with_extra, 8.0, 6.0, 9.0, DiameterKind::WT}, // intra >= extra, perp > 2
      {&with_extra, 8.0, 6.0, 1.0, DiameterKind::WT}, // intra >= extra, perp <= 2
      {&with_extra, 6.0, 6.0, 9.0, DiameterKind::WT}, // equality branch of >=
      {&with_extra, 5.0, 7.0, 3.5, DiameterKind::EM}, // intra < extra, perp > 2
      {&with_extra, 5.0, 7.0, 2.0, DiameterKind::WT}, // perp exactly 2 mm
      {&with_extra, 5.0, 7.0, 1.5, DiameterKind::WT}, // perp < 2
  };

  bool ok = true;
  for (const auto& c : table) {
    vsm::AuxFeatures aux = (c.volume == &intra_only)
                               ? vsm::AuxFeatures{}
                               : synth_aux(c.intra_par, c.extra_par, c.extra_perp);
    vsm::Selection sel = vsm::select_diameter(*c.volume, aux);
    if (sel.chosen_kind != c.expect) ok = false;
    if (sel.trace.empty()) ok = false;
  }
  criterion(3, "diameter selection truth table matches on all branch combinations", ok);
}

// --- criterion 4: Bland-Altman reference intervals + stats oracles ----------

void run_agreement_checks() {
  auto loa = [](double bias, double sd) {
    return std::pair<double, double>(bias - 1.96 * sd, bias + 1.96 * sd);
  };

  auto [lo1, hi1] = loa(0.777, 1.057);
  bool extrameatal_ok = std::fabs(lo1 - (-1.294)) < 0.005 && std::fabs(hi1 - 2.848) < 0.005 &&
                        std::fabs(lo1 - (-1.295)) < 5e-4 && std::fabs(hi1 - 2.849) < 5e-4;

  auto [lo2, hi2] = loa(-0.069, 1.635);
  bool intrameatal_ok = std::fabs(lo2 - (-3.277)) < 0.005 && std::fabs(hi2 - 3.138) < 0.005;

  // implementation agrees with the formula route on synthetic pairs
  std::mt19937 rng(77);
  std::normal_distribution<double> diff_dist(0.777, 1.057);
  std::uniform_real_distribution<double> base(8.0, 30.0);
  std::vector<vsm::PairedMeasurement> pairs;
  for (int i = 0; i < 65; ++i) {
    vsm::PairedMeasurement p;
    p.case_id = "c";
    p.session_id = "s" + std::to_string(i);
    p.category = vsm::Category::preop_extrameatal;
    double m = base(rng);
    p.manual_mm = m;
    p.automated_mm = m + diff_dist(rng);
    p.automated_kind = p.manual_kind = vsm::DiameterKind::EM;
    pairs.push_back(p);
  }
  auto ba = vsm::bland_altman(pairs);
  bool construction_ok = std::fabs((ba.loa_high_mm - ba.loa_low_mm) - 2 * 1.96 * ba.sd_mm) < 1e-12 &&
                         std::fabs(ba.loa_low_mm - (ba.bias_mm - 1.96 * ba.sd_mm)) < 1e-12;

  criterion(4, "limits of agreement reproduce the reference intervals",
            extrameatal_ok && intrameatal_ok && construction_ok,
            "(" + vsm::format_fixed(lo1, 3) + ", " + vsm::format_fixed(hi1, 3) + ") and (" +
                vsm::format_fixed(lo2, 3) + ", " + vsm::format_fixed(hi2, 3) + ")");

  // pearson and dice against independent oracles on 50 random instances
  bool pearson_ok = true;
  bool dice_ok = true;
  std::normal_distribution<double> noise(0.0, 1.5);
  std::uniform_real_distribution<double> val(5.0, 40.0);
  std::uniform_int_distribution<std::size_t> dim(3, 9);
  std::bernoulli_distribution fill(0.35);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> xs, ys;
    std::vector<vsm::PairedMeasurement> ps;
    for (int i = 0; i < 40; ++i) {
      double x = val(rng);
      double y = 0.9 * x + noise(rng);
      xs.push_back(x);
      ys.push_back(y);
      vsm::PairedMeasurement p;
      p.case_id = "c";
      p.session_id = std::to_string(i);
      p.automated_mm = x;
      p.manual_mm = y;
      p.automated_kind = p.manual_kind = vsm::DiameterKind::EM;
      p.category = vsm::Category::preop_extrameatal;
      ps.push_back(p);
    }
    auto res = vsm::pearson(ps);
    double r_ref = vsm::ref::pearson_r_rawsums(xs, ys);
    if (std::fabs(res.r - r_ref) > 1e-9) pearson_ok = false;
    double t = res.r * std::sqrt(38.0 / (1.0 - res.r * res.r));
    double p_ref = vsm::ref::t_two_sided_p_numeric(t, 38.0);
    double p_impl = res.p_underflow ? 0.0 : res.p_value;
    if (std::fabs(p_impl - p_ref) > 1e-6) pearson_ok = false;

    vsm::BinaryMask3D a, b;
    a.dims = {dim(rng), dim(rng), dim(rng)};
    a.bits.resize(a.voxel_count());
    for (auto& bit : a.bits) bit = fill(rng) ? 1 : 0;
    b = a;
    for (auto& bit : b.bits) {
      if (fill(rng)) bit = !bit;
    }
    std::size_t ca = 0, cb = 0, inter = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
      ca += a.bits[i];
      cb += b.bits[i];
      inter += a.bits[i] & b.bits[i];
    }
    double expected = (ca + cb) == 0 ? 1.0
                                     : 2.0 * static_cast<double>(inter) /
                                           static_cast<double>(ca + cb);
    if (vsm::dice(a, b) != expected) dice_ok = false; // exact rational check
    if (vsm::dice(a, b) != vsm::ref::dice_serial(a, b)) dice_ok = false;
  }
  criterion(4, "pearson/dice match independent oracles on 50 random instances",
            pearson_ok && dice_ok, "r within 1e-9, p within 1e-6, dice exact");
}

// --- criterion 5: ellipse phantom geometry ----------------------------------

void run_phantom_checks() {
  const double a = 10.0, b = 5.0, pitch = 0.5, thickness = 1.0;
  vsm::LabelVolume phantom =
      fixtures::ellipse_phantom(a, b, pitch, vsm::LabelVolume::kIntrameatal, 3);
  const double tol = std::hypot(pitch, pitch);

  vsm::Diameter d =
      vsm::region_diameter(phantom, vsm::LabelSet::intrameatal(), vsm::Convention::pixel_centers);
  bool diameter_ok = std::fabs(d.length_mm - 2.0 * a) <= tol;

  vsm::SlicePointSet boundary = vsm::slice_boundary(phantom, vsm::LabelSet::intrameatal(), 0,
                                                    vsm::Convention::pixel_centers);
  vsm::Hull hull = vsm::convex_hull(boundary.points);
  double ex = vsm::directional_extent(hull, vsm::UnitDir2D{1.0, 0.0}).extent_mm;
  double ey = vsm::directional_extent(hull, vsm::UnitDir2D{0.0, 1.0}).extent_mm;
  bool extent_ok = std::fabs(ex - 2.0 * a) <= tol && std::fabs(ey - 2.0 * b) <= tol;

  vsm::Volumes vol = vsm::tumour_volumes(phantom);
  double analytic = 3.14159265358979323846 * a * b * thickness * 3.0; // 3 slices
  bool volume_ok = std::fabs(vol.intrameatal_mm3 - analytic) / analytic <= 0.02;

  criterion(5, "digitised ellipse phantom: diameter, extents and volume",
            diameter_ok && extent_ok && volume_ok,
            "D=" + vsm::format_fixed(d.length_mm, 3) + ", extents " + vsm::format_fixed(ex, 3) +
                "/" + vsm::format_fixed(ey, 3) + ", vol err " +
                vsm::format_fixed(100.0 * std::fabs(vol.intrameatal_mm3 - analytic) / analytic, 2) +
                "%");
}

// --- criterion 6: invariance suite -------------------------------------------

void run_invariance_suite() {
  std::mt19937 rng(20240812);

  // translation invariance of hull diameter and extents
  bool translation_ok = true;
  std::uniform_real_distribution<double> shift(-200.0, 200.0);
  for (int iter = 0; iter < 100; ++iter) {
    auto pts = random_points(rng, 3 + static_cast<int>(rng() % 40));
    double tx = shift(rng), ty = shift(rng);
    auto moved = pts;
    for (auto& p : moved) p = {p.x + tx, p.y + ty};
    double d0 = vsm::max_diameter(vsm::convex_hull(pts)).length_mm;
    double d1 = vsm::max_diameter(vsm::convex_hull(moved)).length_mm;
    if (std::fabs(d0 - d1) > 1e-9) translation_ok = false;

    vsm::UnitDir2D dir = vsm::UnitDir2D::from_vector(1.0, 0.7);
    double e0 = vsm::directional_extent(vsm::convex_hull(pts), dir).extent_mm;
    double e1 = vsm::directional_extent(vsm::convex_hull(moved), dir).extent_mm;
    if (std::fabs(e0 - e1) > 1e-9) translation_ok = false;
  }

  // direction-negation symmetry
  bool negation_ok = true;
  std::uniform_real_distribution<double> angle(0.0, 6.2831853);
  for (int iter = 0; iter < 100; ++iter) {
    auto pts = random_points(rng, 3 + static_cast<int>(rng() % 40));
    vsm::Hull hull = vsm::convex_hull(pts);
    double aa = angle(rng);
    vsm::UnitDir2D dir = vsm::UnitDir2D::from_vector(std::cos(aa), std::sin(aa));
    vsm::UnitDir2D neg = vsm::UnitDir2D::from_vector(-dir.dx, -dir.dy);
    if (vsm::directional_extent(hull, dir).extent_mm !=
        vsm::directional_extent(hull, neg).extent_mm) {
      negation_ok = false;
    }
  }

  // rotation equivariance of the aux features on the two-region fixture
  vsm::LabelVolume fixture = fixtures::bar_square_fixture();
  vsm::LabelVolume rotated = fixtures::rotate90_inplane(fixture);
  vsm::AuxFeatures fa = vsm::aux_features(fixture, vsm::Convention::pixel_centers);
  vsm::AuxFeatures fr = vsm::aux_features(rotated, vsm::Convention::pixel_centers);
  bool rotation_ok = fa.d_intra_par && fr.d_intra_par &&
                     std::fabs(fa.d_intra_par->length_mm - fr.d_intra_par->length_mm) <= 1e-9 &&
                     std::fabs(fa.d_extra_par->length_mm - fr.d_extra_par->length_mm) <= 1e-9 &&
                     std::fabs(fa.d_extra_perp->length_mm - fr.d_extra_perp->length_mm) <= 1e-9;

  // D_WT >= D_EM on 100 random two-label phantoms
  bool dominance_ok = true;
  for (int iter = 0; iter < 100; ++iter) {
    vsm::LabelVolume v = fixtures::random_two_label_phantom(rng);
    double wt = vsm::region_diameter(v, vsm::LabelSet::whole_tumour(),
                                     vsm::Convention::pixel_centers)
                    .length_mm;
    double em = vsm::region_diameter(v, vsm::LabelSet::extrameatal(),
                                     vsm::Convention::pixel_centers)
                    .length_mm;
    if (!(wt >= em)) dominance_ok = false;
  }

  criterion(6, "invariance suite: translation, negation, rotation, WT dominance",
            translation_ok && negation_ok && rotation_ok && dominance_ok);
}

// --- criterion 7: determinism -------------------------------------------------

void run_determinism() {
  auto dir = fixtures::scratch_dir("acceptance_det");

  vsm::LabelVolume v = fixtures::bar_square_fixture();
  vsm::MeasurementReport r1 = vsm::measure_session(v, vsm::Convention::pixel_centers);
  vsm::MeasurementReport r2 = vsm::measure_session(v, vsm::Convention::pixel_centers);
  bool measure_ok = vsm::report_json_text(r1) == vsm::report_json_text(r2);

  bool render_ok = vsm::render_overlay(v, r1) == vsm::render_overlay(v, r2);

  // batch: two runs and serial vs parallel
  vsm::save_canonical(fixtures::bar_square_fixture(), dir / "s1");
  vsm::LabelVolume intra = fixtures::ellipse_phantom(4.0, 3.0, 0.5, vsm::LabelVolume::kIntrameatal);
  vsm::save_canonical(intra, dir / "s2");
  vsm::save_canonical(fixtures::make_volume(3, 3, 1), dir / "s3");
  vsm::atomic_write_file(dir / "manifest.csv",
                         "header,operative_status,output_stem\n"
                         "s1.vsm.json,,o1\ns2.vsm.json,post_op,o2\ns3.vsm.json,,o3\n");
  vsm::BatchManifest manifest = vsm::parse_manifest(dir / "manifest.csv");

  vsm::BatchOptions serial;
  serial.threads = 1;
  vsm::BatchOptions parallel;
  parallel.threads = 8;
  std::string csv1 = vsm::run_batch(manifest, serial).csv_text;
  std::string csv2 = vsm::run_batch(manifest, parallel).csv_text;
  std::string csv3 = vsm::run_batch(manifest, parallel).csv_text;
  bool batch_ok = csv1 == csv2 && csv2 == csv3;

  // agree twice
  std::vector<vsm::PairedMeasurement> pairs;
  for (int i = 0; i < 10; ++i) {
    vsm::PairedMeasurement p;
    p.case_id = "c";
    p.session_id = std::to_string(i);
    p.automated_mm = 10.0 + i;
    p.manual_mm = 10.0 + 0.9 * i;
    p.automated_kind = p.manual_kind = vsm::DiameterKind::EM;
    p.category = vsm::Category::preop_extrameatal;
    pairs.push_back(p);
  }
  auto a1 = vsm::analyze_category(pairs, vsm::Category::preop_extrameatal);
  auto a2 = vsm::analyze_category(pairs, vsm::Category::preop_extrameatal);
  bool agree_ok = vsm::agreement_json_text(a1) == vsm::agreement_json_text(a2) &&
                  vsm::plot_points_csv(*a1.ba) == vsm::plot_points_csv(*a2.ba);

  criterion(7, "measure, batch, agree and render are byte-deterministic",
            measure_ok && render_ok && batch_ok && agree_ok,
            batch_ok ? "serial == parallel" : "batch outputs diverged");
  std::filesystem::remove_all(dir);
}

// --- criterion 8: round-trip and formats --------------------------------------

void run_format_checks() {
  auto dir = fixtures::scratch_dir("acceptance_fmt");
  std::mt19937 rng(20240813);

  bool roundtrip_ok = true;
  for (int iter = 0; iter < 100; ++iter) {
    vsm::LabelVolume v = fixtures::random_volume(rng);
    vsm::save_canonical(v, dir / "r1");
    std::string hdr = vsm::read_file(dir / "r1.vsm.json");
    std::string raw = vsm::read_file(dir / "r1.vsm.raw");

    vsm::LabelVolume loaded = vsm::load_canonical(dir / "r1.vsm.json");
    if (!(loaded.dims == v.dims && loaded.spacing_mm == v.spacing_mm &&
          loaded.voxels == v.voxels)) {
      roundtrip_ok = false;
    }
    // save(load(f)) == f byte-for-byte
    vsm::save_canonical(loaded, dir / "r1");
    if (vsm::read_file(dir / "r1.vsm.json") != hdr ||
        vsm::read_file(dir / "r1.vsm.raw") != raw) {
      roundtrip_ok = false;
    }
  }

  // synthetic NIfTI written by the independent reference writer
  bool nifti_ok = true;
  std::int64_t dims[3] = {9, 7, 5};
  std::vector<double> values(9 * 7 * 5);
  std::uniform_int_distribution<int> lab(0, 2);
  for (auto& val : values) val = lab(rng);
  for (bool gz : {false, true}) {
    niftiref::WriterOptions opt;
    opt.datatype = 4; // int16
    opt.gzip = gz;
    opt.pixdim[0] = 0.6f;
    opt.pixdim[1] = 0.6f;
    opt.pixdim[2] = 2.0f;
    opt.srow[0][0] = 0.6f;
    opt.srow[1][1] = 0.6f;
    opt.srow[2][2] = 2.0f;
    auto path = dir / (gz ? "m.nii.gz" : "m.nii");
    niftiref::write_nifti(path, dims, values, opt);
    vsm::LabelVolume imported = vsm::import_nifti(path, vsm::identity_label_map());
    if (imported.nx() != 9 || imported.ny() != 7 || imported.nz() != 5) nifti_ok = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (imported.voxels[i] != static_cast<std::uint8_t>(values[i])) nifti_ok = false;
    }
  }

  // report JSON validates against the published schema
  vsm::MeasurementReport report =
      vsm::measure_session(fixtures::bar_square_fixture(), vsm::Convention::pixel_centers);
  auto j = vsm::report_to_json(report);
  auto problems = vsm::validate_report_json(j);
  bool schema_ok = problems.empty();

  criterion(8, "canonical round-trip, NIfTI reference import, report schema",
            roundtrip_ok && nifti_ok && schema_ok,
            schema_ok ? "" : problems.front());
  std::filesystem::remove_all(dir);
}

} // namespace

int main() {
  run_hull_and_calipers();
  run_decision_table();
  run_agreement_checks();
  run_phantom_checks();
  run_invariance_suite();
  run_determinism();
  run_format_checks();

  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criterion(s) failed\n", g_failures);
  return 1;
}
