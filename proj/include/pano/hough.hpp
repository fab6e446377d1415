#pragma once

#include "pano/lines.hpp"
#include "pano/raster.hpp"

#include <vector>

namespace pano {

struct HoughParams {
    double edge_threshold = 0.1;      ///< Sobel magnitude (unit step edge = 1)
    int angle_bins = 180;             ///< over [0, pi)
    int accumulator_threshold = 30;   ///< minimum votes for a peak
    double min_segment_length = 20.0; ///< pixels
    double max_gap = 3.0;             ///< pixels along the line
    double orientation_tolerance_deg = 3.0;
    double nms_angle_deg = 3.0;
    double nms_offset = 5.0; ///< pixels
};

/// Standard (theta, rho) Hough over thinned gradient edges. Each edge pixel votes
/// only for angles near its gradient direction. Peaks are non-maximum suppressed
/// in (angle, offset) space, refined by a total-least-squares fit over their
/// supporting pixels and cut into the longest gap-bounded run.
/// Output order: decreasing vote count.
std::vector<LineSegment> hough_detect(const Image& img, const HoughParams& params = {});

inline std::vector<LineSegment> hough_detect(const PerspectiveFrame& f, const HoughParams& params = {})
{
    return hough_detect(f.image(), params);
}

/// Same detector restricted to pixels inside [x0, x1) x [y0, y1).
std::vector<LineSegment> hough_detect_region(const Image& img, int x0, int y0, int x1, int y1,
                                             const HoughParams& params = {});

} // namespace pano
