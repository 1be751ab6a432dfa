#include "vsm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsm/errors.hpp"

namespace vsm {

namespace {

// ---------------------------------------------------------------------------
// Exact sign of the cross product (b-a) x (d-c); orientation is the c == a
// case. The fast path evaluates the 2x2 determinant in doubles and accepts
// the sign when it clears a forward error bound. Otherwise the determinant is
// re-evaluated exactly: each difference is expanded into an unevaluated
// double-double, the four partial products are formed with FMA-based exact
// multiplication, and the 16 resulting terms are accumulated into a
// nonoverlapping floating-point expansion whose leading component carries the
// sign of the true value.
// ---------------------------------------------------------------------------

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  double bv = x - a;
  double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_diff(double a, double b, double& x, double& y) {
  x = a - b;
  double bv = a - x;
  double av = x + bv;
  y = (a - av) - (b - bv);
}

inline void two_prod(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

// Adds b to the nonoverlapping expansion e, keeping it nonoverlapping.
inline int grow_expansion(int elen, double* e, double b, double* h) {
  double q = b;
  int hlen = 0;
  for (int i = 0; i < elen; ++i) {
    double x, y;
    two_sum(q, e[i], x, y);
    q = x;
    if (y != 0.0) h[hlen++] = y;
  }
  if (q != 0.0 || hlen == 0) h[hlen++] = q;
  return hlen;
}

// Exact sign of (bx-ax)*(dy-cy) - (by-ay)*(dx-cx), the cross product of the
// two difference vectors b-a and d-c.
int exact_cross_sign(double ax, double ay, double bx, double by, double cx, double cy,
                     double dx, double dy) {
  // Differences as exact double-doubles.
  double acx, acxe, acy, acye, bcx, bcxe, bcy, bcye;
  two_diff(bx, ax, acx, acxe);
  two_diff(dy, cy, acy, acye);
  two_diff(by, ay, bcy, bcye);
  two_diff(dx, cx, bcx, bcxe);

  // (acx+acxe)*(acy+acye) - (bcy+bcye)*(bcx+bcxe) as 16 exact terms.
  double terms[16];
  int nterms = 0;
  auto emit_products = [&](double u, double ue, double v, double ve, double sign) {
    const double us[2] = {u, ue};
    const double vs[2] = {v, ve};
    for (double uu : us) {
      for (double vv : vs) {
        double hi, lo;
        two_prod(uu, vv, hi, lo);
        terms[nterms++] = sign * hi;
        terms[nterms++] = sign * lo;
      }
    }
  };
  emit_products(acx, acxe, acy, acye, 1.0);
  emit_products(bcy, bcye, bcx, bcxe, -1.0);

  double e[32], h[32];
  int elen = 0;
  for (int i = 0; i < nterms; ++i) {
    elen = grow_expansion(elen, e, terms[i], h);
    std::copy(h, h + elen, e);
  }
  double leading = e[elen - 1];
  return (leading > 0.0) - (leading < 0.0);
}

// (3 + 16*eps)*eps with eps = 2^-53, per the standard forward error analysis
// of the two-product determinant.
constexpr double kOrientErrBound = (3.0 + 16.0 * 1.1102230246251565e-16) * 1.1102230246251565e-16;

// Filtered sign of (b-a) x (d-c); falls back to exact arithmetic whenever the
// double evaluation cannot certify its sign.
int cross_sign(Point2 a, Point2 b, Point2 c, Point2 d) {
  double detleft = (b.x - a.x) * (d.y - c.y);
  double detright = (b.y - a.y) * (d.x - c.x);
  double det = detleft - detright;
  double detsum = std::fabs(detleft) + std::fabs(detright);
  if (std::fabs(det) > kOrientErrBound * detsum) {
    return (det > 0.0) - (det < 0.0);
  }
  return exact_cross_sign(a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y);
}

bool pair_less(const Point2& p1, const Point2& q1, const Point2& p2, const Point2& q2) {
  if (p1 < p2) return true;
  if (p2 < p1) return false;
  return q1 < q2;
}

} // namespace

int orient2d(Point2 a, Point2 b, Point2 c) {
  return cross_sign(a, b, a, c);
}

Segment2D Segment2D::between(Point2 a, Point2 b) {
  Segment2D s;
  s.p = a;
  s.q = b;
  s.length_mm = std::hypot(b.x - a.x, b.y - a.y);
  return s;
}

UnitDir2D UnitDir2D::from_vector(double vx, double vy) {
  double n = std::hypot(vx, vy);
  UnitDir2D d;
  d.dx = vx / n;
  d.dy = vy / n;
  if (d.dx < 0.0 || (d.dx == 0.0 && d.dy < 0.0)) {
    d.dx = -d.dx;
    d.dy = -d.dy;
  }
  if (d.dx == 0.0) d.dx = 0.0; // normalise -0.0
  if (d.dy == 0.0) d.dy = 0.0;
  return d;
}

Hull convex_hull(std::span<const Point2> points) {
  if (points.empty()) throw EmptyInputError("convex_hull: empty point set");

  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Hull hull;
  const size_t n = pts.size();
  if (n == 1) {
    hull.vertices = {pts[0]};
    return hull;
  }

  // Lower chain L then upper chain U; non-left turns (including exact
  // collinearity) pop, so interior and collinear points are dropped.
  std::vector<Point2> chain(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && orient2d(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
    chain[k++] = pts[i];
  }
  const size_t lower_end = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower_end && orient2d(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
    chain[k++] = pts[i];
  }
  chain.resize(k - 1); // last point repeats the first
  hull.vertices = std::move(chain);
  return hull;
}

Segment2D max_diameter(const Hull& hull) {
  const auto& v = hull.vertices;
  if (v.empty()) throw EmptyInputError("max_diameter: hull has no vertices");
  if (v.size() == 1) return Segment2D::between(v[0], v[0]);
  if (v.size() == 2) {
    return v[0] < v[1] ? Segment2D::between(v[0], v[1]) : Segment2D::between(v[1], v[0]);
  }

  const size_t m = v.size();
  double best_d2 = -1.0;
  Point2 best_p, best_q;
  auto consider = [&](size_t i, size_t j) {
    double dx = v[j].x - v[i].x;
    double dy = v[j].y - v[i].y;
    double d2 = dx * dx + dy * dy;
    Point2 p = v[i], q = v[j];
    if (q < p) std::swap(p, q);
    if (d2 > best_d2 || (d2 == best_d2 && pair_less(p, q, best_p, best_q))) {
      best_d2 = d2;
      best_p = p;
      best_q = q;
    }
  };

  // Antipodal pair scan: for each edge advance the opposite vertex while it
  // moves away from the edge line; equal-area stops are parallel-edge ties,
  // covered by also considering j+1. The advance test must be exact: on
  // near-collinear hulls a mis-signed double cross would strand j behind the
  // antipodal arc for every later edge.
  size_t j = 1;
  size_t advances = 0;
  for (size_t i = 0; i < m; ++i) {
    size_t ni = (i + 1) % m;
    while (advances <= 2 * m) {
      size_t nj = (j + 1) % m;
      if (cross_sign(v[i], v[ni], v[j], v[nj]) <= 0) break;
      j = nj;
      ++advances;
    }
    consider(i, j);
    consider(ni, j);
    consider(i, (j + 1) % m);
    consider(ni, (j + 1) % m);
  }
  return Segment2D::between(best_p, best_q);
}

DirectionalExtent directional_extent(const Hull& hull, const UnitDir2D& dir) {
  const auto& v = hull.vertices;
  if (v.empty()) throw EmptyInputError("directional_extent: hull has no vertices");

  double smin = std::numeric_limits<double>::infinity();
  double smax = -std::numeric_limits<double>::infinity();
  size_t imin = 0, imax = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    double s = v[i].x * dir.dx + v[i].y * dir.dy;
    if (s < smin || (s == smin && v[i] < v[imin])) {
      smin = s;
      imin = i;
    }
    if (s > smax || (s == smax && v[i] < v[imax])) {
      smax = s;
      imax = i;
    }
  }
  DirectionalExtent out;
  out.extent_mm = smax - smin;
  Point2 a = v[imin], b = v[imax];
  if (b < a) std::swap(a, b);
  out.realising = Segment2D::between(a, b);
  return out;
}

UnitDir2D fit_line_direction(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 2) {
    throw DegenerateInterfaceError("fit_line_direction: fewer than 2 distinct points");
  }
  if (pts.size() == 2) {
    return UnitDir2D::from_vector(pts[1].x - pts[0].x, pts[1].y - pts[0].y);
  }

  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : pts) {
    double dx = p.x - mx;
    double dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  sxx /= n;
  sxy /= n;
  syy /= n;

  double mean = 0.5 * (sxx + syy);
  double half_gap = std::hypot(0.5 * (sxx - syy), sxy);
  double lambda1 = mean + half_gap;
  if (2.0 * half_gap <= 1e-9 * lambda1) {
    throw IsotropicInterfaceError("fit_line_direction: covariance eigenvalues equal");
  }

  // Eigenvector for lambda1 of [[sxx, sxy], [sxy, syy]]; pick the better
  // conditioned of the two analytic forms.
  double vx1 = lambda1 - syy, vy1 = sxy;
  double vx2 = sxy, vy2 = lambda1 - sxx;
  if (vx1 * vx1 + vy1 * vy1 >= vx2 * vx2 + vy2 * vy2) {
    return UnitDir2D::from_vector(vx1, vy1);
  }
  return UnitDir2D::from_vector(vx2, vy2);
}

UnitDir2D perpendicular(const UnitDir2D& dir) {
  return UnitDir2D::from_vector(-dir.dy, dir.dx);
}

} // namespace vsm
