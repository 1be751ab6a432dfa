#pragma once

#include <span>
#include <vector>

namespace vsm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2& a, const Point2& b) {
    return a.x == b.x && a.y == b.y;
  }
  // Lexicographic on (x, y); the tie-break order used throughout.
  friend bool operator<(const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
};

// Line segment in slice-plane millimetre coordinates.
struct Segment2D {
  Point2 p;
  Point2 q;
  double length_mm = 0.0;

  static Segment2D between(Point2 a, Point2 b);
};

// Unit direction with canonical sign: dx > 0, or dx == 0 and dy > 0.
struct UnitDir2D {
  double dx = 1.0;
  double dy = 0.0;

  // Normalises and canonicalises an arbitrary non-zero vector.
  static UnitDir2D from_vector(double vx, double vy);
};

// Convex polygon, counter-clockwise, first vertex lexicographically smallest.
// Degenerate forms: 1 vertex (point) or 2 vertices (segment).
struct Hull {
  std::vector<Point2> vertices;
};

// Sign of the cross product (b-a) x (c-a): > 0 left turn, < 0 right turn,
// 0 exactly collinear. Exact for all double inputs (adaptive precision).
int orient2d(Point2 a, Point2 b, Point2 c);

// Andrew's monotone chain over the lexicographically sorted points: lower and
// upper chains concatenated. Collinear interior points are removed, so the
// hull is strictly convex. Throws EmptyInputError on an empty point list.
Hull convex_hull(std::span<const Point2> points);

// Rotating-calipers maximum-distance antipodal pair. A 1-vertex hull yields a
// zero-length segment. Ties resolved to the lexicographically smallest (p, q)
// with p <= q.
Segment2D max_diameter(const Hull& hull);

struct DirectionalExtent {
  double extent_mm = 0.0;
  Segment2D realising; // joins an argmax-projection vertex to an argmin one
};

// Width of the hull along `dir`: max minus min of vertex projections.
// Symmetric under direction negation.
DirectionalExtent directional_extent(const Hull& hull, const UnitDir2D& dir);

// Principal direction of a 2D point cloud (largest eigenvector of the
// covariance). Exactly two distinct points give their normalised difference.
// Throws DegenerateInterfaceError for < 2 distinct points and
// IsotropicInterfaceError when the eigenvalues agree within 1e-9 relative.
UnitDir2D fit_line_direction(std::span<const Point2> points);

// 90-degree rotation, canonical sign restored.
UnitDir2D perpendicular(const UnitDir2D& dir);

} // namespace vsm
