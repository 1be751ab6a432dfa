#include "vsm/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>

#include "vsm/errors.hpp"
#include "vsm/io_util.hpp"

namespace vsm {

namespace {

std::string num(double v) {
  return format_fixed(v, 3);
}

// Corner-lattice vertex key.
struct Corner {
  std::int64_t x, y;
  friend bool operator<(const Corner& a, const Corner& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
  friend bool operator==(const Corner& a, const Corner& b) { return a.x == b.x && a.y == b.y; }
};

} // namespace

std::vector<std::vector<Point2>> trace_region_contours(const LabelVolume& volume,
                                                       LabelSet selector, int z) {
  const std::int64_t nx = static_cast<std::int64_t>(volume.nx());
  const std::int64_t ny = static_cast<std::int64_t>(volume.ny());
  if (z < 0 || static_cast<std::size_t>(z) >= volume.nz()) {
    throw SliceOutOfRangeError("slice index out of range: " + std::to_string(z));
  }

  auto inside = [&](std::int64_t x, std::int64_t y) {
    if (x < 0 || x >= nx || y < 0 || y >= ny) return false;
    return selector.contains(volume.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                                       static_cast<std::size_t>(z)));
  };

  // Directed boundary edges on the corner lattice, region on the left.
  std::map<Corner, std::vector<Corner>> edges;
  auto add_edge = [&](Corner from, Corner to) { edges[from].push_back(to); };
  for (std::int64_t y = 0; y < ny; ++y) {
    for (std::int64_t x = 0; x < nx; ++x) {
      if (!inside(x, y)) continue;
      if (!inside(x, y - 1)) add_edge({x, y}, {x + 1, y});
      if (!inside(x, y + 1)) add_edge({x + 1, y + 1}, {x, y + 1});
      if (!inside(x - 1, y)) add_edge({x, y + 1}, {x, y});
      if (!inside(x + 1, y)) add_edge({x + 1, y}, {x + 1, y + 1});
    }
  }
  for (auto& [from, outs] : edges) std::sort(outs.begin(), outs.end());

  const double sx = volume.spacing_mm[0];
  const double sy = volume.spacing_mm[1];
  std::vector<std::vector<Point2>> loops;

  while (!edges.empty()) {
    auto it = edges.begin();
    Corner start = it->first;
    Corner cur = start;
    Corner prev{start.x - 1, start.y}; // fake incoming direction (+x)
    std::vector<Point2> loop;
    while (true) {
      loop.push_back({static_cast<double>(cur.x) * sx, static_cast<double>(cur.y) * sy});
      auto eit = edges.find(cur);
      if (eit == edges.end() || eit->second.empty()) break; // defensive; loops always close
      // At a pinch vertex two exits exist; prefer the leftmost turn relative
      // to the incoming direction so touching loops stay separate.
      std::int64_t inx = cur.x - prev.x, iny = cur.y - prev.y;
      size_t pick = 0;
      std::int64_t best_cross = std::numeric_limits<std::int64_t>::min();
      for (size_t i = 0; i < eit->second.size(); ++i) {
        std::int64_t ox = eit->second[i].x - cur.x, oy = eit->second[i].y - cur.y;
        std::int64_t cr = inx * oy - iny * ox;
        if (cr > best_cross) {
          best_cross = cr;
          pick = i;
        }
      }
      Corner next = eit->second[pick];
      eit->second.erase(eit->second.begin() + static_cast<std::ptrdiff_t>(pick));
      if (eit->second.empty()) edges.erase(eit);
      prev = cur;
      cur = next;
      if (cur == start) break;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

namespace {

constexpr double kScale = 8.0; // SVG user units per mm
constexpr double kMargin = 16.0;
constexpr double kFooter = 56.0;

struct SceneMap {
  double x(double mm) const { return kMargin + mm * kScale; }
  double y(double mm) const { return kMargin + mm * kScale; }
};

void emit_segment(std::ostringstream& svg, const SceneMap& map, const Segment2D& seg,
                  const std::string& cls, const std::string& colour, double width,
                  const std::string& extra = "") {
  svg << "  <line class=\"" << cls << "\" x1=\"" << num(map.x(seg.p.x)) << "\" y1=\""
      << num(map.y(seg.p.y)) << "\" x2=\"" << num(map.x(seg.q.x)) << "\" y2=\""
      << num(map.y(seg.q.y)) << "\" stroke=\"" << colour << "\" stroke-width=\""
      << num(width) << "\" stroke-linecap=\"round\"" << extra << "/>\n";
}

void emit_contours(std::ostringstream& svg, const SceneMap& map,
                   const std::vector<std::vector<Point2>>& loops, const std::string& id,
                   const std::string& colour) {
  svg << "  <g id=\"" << id << "\" fill=\"none\" stroke=\"" << colour
      << "\" stroke-width=\"1.5\">\n";
  for (const auto& loop : loops) {
    svg << "    <polygon points=\"";
    for (size_t i = 0; i < loop.size(); ++i) {
      if (i) svg << ' ';
      svg << num(map.x(loop[i].x)) << ',' << num(map.y(loop[i].y));
    }
    svg << "\"/>\n";
  }
  svg << "  </g>\n";
}

} // namespace

std::string render_overlay(const LabelVolume& volume, const MeasurementReport& report) {
  const int z = report.chosen.slice_index;
  if (z < 0 || static_cast<std::size_t>(z) >= volume.nz()) {
    throw SliceOutOfRangeError("report slice out of range: " + std::to_string(z));
  }

  const double width_mm = static_cast<double>(volume.nx()) * volume.spacing_mm[0];
  const double height_mm = static_cast<double>(volume.ny()) * volume.spacing_mm[1];
  const double w = width_mm * kScale + 2 * kMargin;
  const double h = height_mm * kScale + 2 * kMargin + kFooter;
  SceneMap map;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
      << num(h) << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n";
  svg << "  <title>" << report.session.case_id << " / " << report.session.session_id
      << " slice " << z << "</title>\n";
  svg << "  <rect width=\"" << num(w) << "\" height=\"" << num(h) << "\" fill=\"black\"/>\n";

  emit_contours(svg, map, trace_region_contours(volume, LabelSet::intrameatal(), z),
                "intrameatal-contour", "green");
  emit_contours(svg, map, trace_region_contours(volume, LabelSet::extrameatal(), z),
                "extrameatal-contour", "yellow");

  // Interface line: fitted direction through the slice interface centroid,
  // drawn dashed white across the interface extent (plus a small overhang).
  SlicePointSet ifc = interface_points(volume, z);
  if (ifc.points.size() >= 2 && report.aux.interface_dir) {
    const UnitDir2D& dir = *report.aux.interface_dir;
    double cx = 0.0, cy = 0.0;
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    for (const auto& p : ifc.points) {
      cx += p.x;
      cy += p.y;
      double s = p.x * dir.dx + p.y * dir.dy;
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
    cx /= static_cast<double>(ifc.points.size());
    cy /= static_cast<double>(ifc.points.size());
    double c = cx * dir.dx + cy * dir.dy;
    double lo = smin - c - 2.0, hi = smax - c + 2.0;
    Segment2D line = Segment2D::between({cx + dir.dx * lo, cy + dir.dy * lo},
                                        {cx + dir.dx * hi, cy + dir.dy * hi});
    emit_segment(svg, map, line, "interface", "white", 1.0, " stroke-dasharray=\"4 3\"");
  }

  // Auxiliary feature segments as toggleable layers (they may have been
  // measured on other slices; data-slice records which).
  struct AuxLayer {
    const std::optional<Diameter>& d;
    const char* id;
    const char* colour;
  };
  const AuxLayer layers[] = {{report.aux.d_intra_par, "aux-intra-par", "green"},
                             {report.aux.d_extra_par, "aux-extra-par", "blue"},
                             {report.aux.d_extra_perp, "aux-extra-perp", "yellow"}};
  for (const auto& layer : layers) {
    if (!layer.d) continue;
    svg << "  <g id=\"" << layer.id << "\" data-slice=\"" << layer.d->slice_index << "\">\n  ";
    emit_segment(svg, map, layer.d->segment, "aux", layer.colour, 1.2);
    svg << "  </g>\n";
  }

  // The one measurement segment of the scene.
  const bool em = report.chosen_kind == DiameterKind::EM;
  emit_segment(svg, map, report.chosen.segment, "measurement", em ? "red" : "orange", 2.0);

  // Scale bar (10 mm) and annotation in the footer.
  const double bar_y = h - kFooter + 20.0;
  const double bar_x = kMargin;
  svg << "  <line class=\"scalebar\" x1=\"" << num(bar_x) << "\" y1=\"" << num(bar_y)
      << "\" x2=\"" << num(bar_x + 10.0 * kScale) << "\" y2=\"" << num(bar_y)
      << "\" stroke=\"white\" stroke-width=\"2\"/>\n";
  svg << "  <text x=\"" << num(bar_x) << "\" y=\"" << num(bar_y + 16.0)
      << "\" fill=\"white\" font-size=\"12\" font-family=\"sans-serif\">10 mm</text>\n";
  svg << "  <text class=\"annotation\" x=\"" << num(w - kMargin) << "\" y=\"" << num(bar_y + 16.0)
      << "\" fill=\"" << (em ? "red" : "orange")
      << "\" font-size=\"14\" font-family=\"sans-serif\" text-anchor=\"end\">D_"
      << to_string(report.chosen_kind) << " " << format_fixed(report.chosen.length_mm, 1)
      << " mm (slice " << z << ")</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

namespace {

struct PlotFrame {
  double x0 = 60, y0 = 20, width = 420, height = 300; // plot area
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

  double px(double v) const { return x0 + (v - xmin) / (xmax - xmin) * width; }
  double py(double v) const { return y0 + (ymax - v) / (ymax - ymin) * height; }
};

void expand_range(double& lo, double& hi) {
  if (lo > hi) std::swap(lo, hi);
  double pad = (hi - lo) * 0.08;
  if (pad <= 0.0) pad = 1.0;
  lo -= pad;
  hi += pad;
}

void emit_plot_header(std::ostringstream& svg, const PlotFrame& f, const std::string& xlabel,
                      const std::string& ylabel) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.x0 + f.width + 30)
      << "\" height=\"" << num(f.y0 + f.height + 60) << "\">\n";
  svg << "  <rect width=\"" << num(f.x0 + f.width + 30) << "\" height=\""
      << num(f.y0 + f.height + 60) << "\" fill=\"white\"/>\n";
  svg << "  <rect x=\"" << num(f.x0) << "\" y=\"" << num(f.y0) << "\" width=\"" << num(f.width)
      << "\" height=\"" << num(f.height) << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "  <text x=\"" << num(f.x0 + f.width / 2) << "\" y=\"" << num(f.y0 + f.height + 40)
      << "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  svg << "  <text x=\"16\" y=\"" << num(f.y0 + f.height / 2)
      << "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(f.y0 + f.height / 2) << ")\">" << ylabel << "</text>\n";
}

void emit_hline(std::ostringstream& svg, const PlotFrame& f, double yval,
                const std::string& colour, const std::string& cls) {
  svg << "  <line class=\"" << cls << "\" x1=\"" << num(f.px(f.xmin)) << "\" y1=\""
      << num(f.py(yval)) << "\" x2=\"" << num(f.px(f.xmax)) << "\" y2=\"" << num(f.py(yval))
      << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
}

} // namespace

std::string render_bland_altman_svg(const BlandAltmanResult& ba) {
  PlotFrame f;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = ba.loa_low_mm, ymax = ba.loa_high_mm;
  for (const auto& [mean, diff] : ba.points) {
    xmin = std::min(xmin, mean);
    xmax = std::max(xmax, mean);
    ymin = std::min(ymin, diff);
    ymax = std::max(ymax, diff);
  }
  expand_range(xmin, xmax);
  expand_range(ymin, ymax);
  f.xmin = xmin;
  f.xmax = xmax;
  f.ymin = ymin;
  f.ymax = ymax;

  std::ostringstream svg;
  emit_plot_header(svg, f, "mean of automated and manual (mm)",
                   "automated - manual (mm)");
  emit_hline(svg, f, ba.bias_mm, "red", "bias");
  emit_hline(svg, f, ba.loa_low_mm, "black", "loa-low");
  emit_hline(svg, f, ba.loa_high_mm, "black", "loa-high");
  for (const auto& [mean, diff] : ba.points) {
    svg << "  <circle cx=\"" << num(f.px(mean)) << "\" cy=\"" << num(f.py(diff))
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_scatter_svg(const std::vector<PairedMeasurement>& included) {
  PlotFrame f;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : included) {
    lo = std::min({lo, *p.manual_mm, *p.automated_mm});
    hi = std::max({hi, *p.manual_mm, *p.automated_mm});
  }
  if (included.empty()) {
    lo = 0.0;
    hi = 1.0;
  }
  expand_range(lo, hi);
  f.xmin = f.ymin = lo;
  f.xmax = f.ymax = hi;

  std::ostringstream svg;
  emit_plot_header(svg, f, "manual measurement (mm)", "automated measurement (mm)");
  svg << "  <line class=\"identity\" x1=\"" << num(f.px(lo)) << "\" y1=\"" << num(f.py(lo))
      << "\" x2=\"" << num(f.px(hi)) << "\" y2=\"" << num(f.py(hi))
      << "\" stroke=\"gray\" stroke-width=\"1\"/>\n";
  for (const auto& p : included) {
    svg << "  <circle cx=\"" << num(f.px(*p.manual_mm)) << "\" cy=\"" << num(f.py(*p.automated_mm))
        << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace vsm
