#pragma once

// Serial reference implementations. These take the straightforward/naive
// route (all-pairs scans, flood fill, raw-sum statistics, numerical
// integration) independent of the main kernels, so tests can cross-check the
// optimised paths and the benchmark can compare against them.

#include <span>
#include <vector>

#include "vsm/geometry.hpp"
#include "vsm/morphology.hpp"
#include "vsm/volume.hpp"

namespace vsm::ref {

// Exhaustive maximum pairwise distance (same tie-break as max_diameter).
Segment2D diameter_allpairs(std::span<const Point2> points);

// max - min of projections over the raw point set.
double projection_extent(std::span<const Point2> points, const UnitDir2D& dir);

// True iff p is inside or on the hull (exact orientation tests).
bool hull_contains(const Hull& hull, const Point2& p);

// Label-propagation-to-fixpoint component labelling, renumbered by the first
// voxel of each component in scan order.
ComponentLabelling components_floodfill(const BinaryMask3D& mask, Connectivity connectivity);

// Per-pixel 4-neighbour boundary scan.
SlicePointSet boundary_naive(const LabelVolume& volume, LabelSet selector, int z,
                             Convention convention);

// Brute-force 4-adjacent label-1/label-2 pair scan.
SlicePointSet interface_naive(const LabelVolume& volume, int z);

// Plain serial voxel counting.
double dice_serial(const BinaryMask3D& a, const BinaryMask3D& b);
void count_labels_serial(const LabelVolume& volume, std::size_t counts[3]);

// Serial slice sweep computing the region diameter through the all-pairs
// oracle (no hull, no calipers).
double region_diameter_serial(const LabelVolume& volume, LabelSet selector,
                              Convention convention);

// Pearson r from raw sums in extended precision.
double pearson_r_rawsums(std::span<const double> x, std::span<const double> y);

// Two-sided Student-t p-value by adaptive Simpson integration of the density.
double t_two_sided_p_numeric(double t, double dof);

// Total-least-squares direction via the closed-form angle
// 0.5*atan2(2*Sxy, Sxx - Syy).
UnitDir2D tls_direction_angle(std::span<const Point2> points);

} // namespace vsm::ref
