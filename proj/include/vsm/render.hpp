#pragma once

#include <string>
#include <vector>

#include "vsm/agreement.hpp"
#include "vsm/measurement.hpp"

namespace vsm {

// Closed contour loops (pixel-corner polygons, mm coordinates) of the
// selected region on slice z. Loops are deterministic: edges are chained
// inside-on-the-left starting from the smallest corner.
std::vector<std::vector<Point2>> trace_region_contours(const LabelVolume& volume,
                                                       LabelSet selector, int z);

// Overlay of the chosen measurement slice: region contours (intrameatal
// green, extrameatal yellow), dashed white interface line, the chosen
// diameter (red for EM, orange for WT), auxiliary feature segments as
// toggleable layers, a 10 mm scale bar and a kind/length annotation.
std::string render_overlay(const LabelVolume& volume, const MeasurementReport& report);

// Bland-Altman plot: bias as a red dashed line, both limits of agreement as
// black dashed lines, one circle per pair.
std::string render_bland_altman_svg(const BlandAltmanResult& ba);

// Automated-vs-manual scatter with the identity line; one circle per pair.
std::string render_scatter_svg(const std::vector<PairedMeasurement>& included);

} // namespace vsm
