#include "vsm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsm/errors.hpp"

namespace vsm::ref {

Segment2D diameter_allpairs(std::span<const Point2> points) {
  if (points.empty()) throw EmptyInputError("diameter_allpairs: empty point set");
  double best_d2 = -1.0;
  Point2 best_p = points[0], best_q = points[0];
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i; j < points.size(); ++j) {
      double dx = points[j].x - points[i].x;
      double dy = points[j].y - points[i].y;
      double d2 = dx * dx + dy * dy;
      Point2 p = points[i], q = points[j];
      if (q < p) std::swap(p, q);
      bool better = d2 > best_d2;
      if (d2 == best_d2) {
        better = p < best_p || (p == best_p && q < best_q);
      }
      if (better) {
        best_d2 = d2;
        best_p = p;
        best_q = q;
      }
    }
  }
  return Segment2D::between(best_p, best_q);
}

double projection_extent(std::span<const Point2> points, const UnitDir2D& dir) {
  double smin = std::numeric_limits<double>::infinity();
  double smax = -smin;
  for (const auto& p : points) {
    double s = p.x * dir.dx + p.y * dir.dy;
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  return smax - smin;
}

bool hull_contains(const Hull& hull, const Point2& p) {
  const auto& v = hull.vertices;
  if (v.empty()) return false;
  if (v.size() == 1) return p == v[0];
  if (v.size() == 2) {
    if (orient2d(v[0], v[1], p) != 0) return false;
    return std::min(v[0].x, v[1].x) <= p.x && p.x <= std::max(v[0].x, v[1].x) &&
           std::min(v[0].y, v[1].y) <= p.y && p.y <= std::max(v[0].y, v[1].y);
  }
  for (size_t i = 0; i < v.size(); ++i) {
    if (orient2d(v[i], v[(i + 1) % v.size()], p) < 0) return false;
  }
  return true;
}

ComponentLabelling components_floodfill(const BinaryMask3D& mask, Connectivity connectivity) {
  const std::int64_t nx = static_cast<std::int64_t>(mask.dims[0]);
  const std::int64_t ny = static_cast<std::int64_t>(mask.dims[1]);
  const std::int64_t nz = static_cast<std::int64_t>(mask.dims[2]);
  const std::size_t n = mask.voxel_count();

  // Provisional labels: own index + 1, then propagate the minimum over
  // neighbours until nothing changes.
  std::vector<std::size_t> prov(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.bits[i]) prov[i] = i + 1;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::int64_t z = 0; z < nz; ++z) {
      for (std::int64_t y = 0; y < ny; ++y) {
        for (std::int64_t x = 0; x < nx; ++x) {
          std::size_t idx = mask.index(x, y, z);
          if (!mask.bits[idx]) continue;
          for (std::int64_t dz = -1; dz <= 1; ++dz) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
              for (std::int64_t dx = -1; dx <= 1; ++dx) {
                if (!dx && !dy && !dz) continue;
                if (connectivity == Connectivity::faces6 &&
                    std::abs(dx) + std::abs(dy) + std::abs(dz) != 1) {
                  continue;
                }
                std::int64_t px = x + dx, py = y + dy, pz = z + dz;
                if (px < 0 || px >= nx || py < 0 || py >= ny || pz < 0 || pz >= nz) continue;
                std::size_t nidx = mask.index(px, py, pz);
                if (mask.bits[nidx] && prov[nidx] < prov[idx]) {
                  prov[idx] = prov[nidx];
                  changed = true;
                }
              }
            }
          }
        }
      }
    }
  }

  ComponentLabelling out;
  out.labels.assign(n, 0);
  std::vector<std::pair<std::size_t, std::int32_t>> renumber; // provisional -> id
  for (std::size_t i = 0; i < n; ++i) {
    if (!mask.bits[i]) continue;
    std::int32_t id = 0;
    for (const auto& [p, assigned] : renumber) {
      if (p == prov[i]) {
        id = assigned;
        break;
      }
    }
    if (id == 0) {
      id = ++out.count;
      renumber.emplace_back(prov[i], id);
    }
    out.labels[i] = id;
  }
  return out;
}

SlicePointSet boundary_naive(const LabelVolume& volume, LabelSet selector, int z,
                             Convention convention) {
  const std::int64_t nx = static_cast<std::int64_t>(volume.nx());
  const std::int64_t ny = static_cast<std::int64_t>(volume.ny());
  const double sx = volume.spacing_mm[0];
  const double sy = volume.spacing_mm[1];
  const auto zz = static_cast<std::size_t>(z);

  std::vector<Point2> pts;
  for (std::int64_t y = 0; y < ny; ++y) {
    for (std::int64_t x = 0; x < nx; ++x) {
      if (!selector.contains(volume.at(x, y, zz))) continue;
      int outside = 0;
      const std::int64_t nbs[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& nb : nbs) {
        if (nb[0] < 0 || nb[0] >= nx || nb[1] < 0 || nb[1] >= ny ||
            !selector.contains(volume.at(nb[0], nb[1], zz))) {
          ++outside;
        }
      }
      if (outside == 0) continue;
      if (convention == Convention::pixel_centers) {
        pts.push_back({(x + 0.5) * sx, (y + 0.5) * sy});
      } else {
        pts.push_back({static_cast<double>(x) * sx, static_cast<double>(y) * sy});
        pts.push_back({static_cast<double>(x + 1) * sx, static_cast<double>(y) * sy});
        pts.push_back({static_cast<double>(x) * sx, static_cast<double>(y + 1) * sy});
        pts.push_back({static_cast<double>(x + 1) * sx, static_cast<double>(y + 1) * sy});
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  SlicePointSet out;
  out.slice_index = z;
  out.points = std::move(pts);
  return out;
}

SlicePointSet interface_naive(const LabelVolume& volume, int z) {
  const std::int64_t nx = static_cast<std::int64_t>(volume.nx());
  const std::int64_t ny = static_cast<std::int64_t>(volume.ny());
  const double sx = volume.spacing_mm[0];
  const double sy = volume.spacing_mm[1];
  const auto zz = static_cast<std::size_t>(z);

  std::vector<Point2> pts;
  for (std::int64_t ya = 0; ya < ny; ++ya) {
    for (std::int64_t xa = 0; xa < nx; ++xa) {
      if (volume.at(xa, ya, zz) != LabelVolume::kIntrameatal) continue;
      const std::int64_t nbs[4][2] = {{xa - 1, ya}, {xa + 1, ya}, {xa, ya - 1}, {xa, ya + 1}};
      for (const auto& nb : nbs) {
        if (nb[0] < 0 || nb[0] >= nx || nb[1] < 0 || nb[1] >= ny) continue;
        if (volume.at(nb[0], nb[1], zz) != LabelVolume::kExtrameatal) continue;
        pts.push_back({0.5 * ((xa + 0.5) * sx + (nb[0] + 0.5) * sx),
                       0.5 * ((ya + 0.5) * sy + (nb[1] + 0.5) * sy)});
      }
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  SlicePointSet out;
  out.slice_index = z;
  out.points = std::move(pts);
  return out;
}

double dice_serial(const BinaryMask3D& a, const BinaryMask3D& b) {
  std::size_t ca = 0, cb = 0, inter = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    if (a.bits[i]) ++ca;
    if (b.bits[i]) ++cb;
    if (a.bits[i] && b.bits[i]) ++inter;
  }
  if (ca + cb == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(ca + cb);
}

void count_labels_serial(const LabelVolume& volume, std::size_t counts[3]) {
  counts[0] = counts[1] = counts[2] = 0;
  for (std::uint8_t v : volume.voxels) ++counts[v];
}

double region_diameter_serial(const LabelVolume& volume, LabelSet selector,
                              Convention convention) {
  double best = -1.0;
  for (std::size_t z = 0; z < volume.nz(); ++z) {
    SlicePointSet pts = boundary_naive(volume, selector, static_cast<int>(z), convention);
    if (pts.points.empty()) continue;
    best = std::max(best, diameter_allpairs(pts.points).length_mm);
  }
  if (best < 0.0) throw EmptyRegionError("selector matches no voxel");
  return best;
}

double pearson_r_rawsums(std::span<const double> x, std::span<const double> y) {
  const long double n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
  }
  long double num = n * sxy - sx * sy;
  long double den = sqrtl((n * sxx - sx * sx) * (n * syy - sy * sy));
  return static_cast<double>(num / den);
}

namespace {

double t_pdf(double x, double dof) {
  double log_c = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) -
                 0.5 * std::log(dof * 3.14159265358979323846);
  return std::exp(log_c - 0.5 * (dof + 1.0) * std::log1p(x * x / dof));
}

double simpson(double (*f)(double, double), double dof, double a, double b) {
  double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a, dof) + 4.0 * f(m, dof) + f(b, dof));
}

double adaptive_simpson(double (*f)(double, double), double dof, double a, double b,
                        double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double left = simpson(f, dof, a, m);
  double right = simpson(f, dof, m, b);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, dof, a, m, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, dof, m, b, right, tol / 2.0, depth - 1);
}

} // namespace

double t_two_sided_p_numeric(double t, double dof) {
  double at = std::fabs(t);
  if (at == 0.0) return 1.0;
  double integral = adaptive_simpson(t_pdf, dof, 0.0, at, simpson(t_pdf, dof, 0.0, at),
                                     1e-13, 48);
  double p = 1.0 - 2.0 * integral;
  return p < 0.0 ? 0.0 : p;
}

UnitDir2D tls_direction_angle(std::span<const Point2> points) {
  double mx = 0, my = 0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : points) {
    double dx = p.x - mx, dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return UnitDir2D::from_vector(std::cos(theta), std::sin(theta));
}

} // namespace vsm::ref
