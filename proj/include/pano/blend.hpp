#pragma once

#include "pano/raster.hpp"

#include <vector>

namespace pano {

/// h_W(i) = 1 - 2 |i/W - 1/2|. Zero at the seam, one at the centre column.
double seam_weight(int column, int width);

struct SeamWeightProfile {
    int width = 0;
    std::vector<double> weights;
};

SeamWeightProfile seam_profile(int width);

/// Blends a frame with its 180-degree-offset counterpart. `rotated` is in its own
/// (shifted) frame and is rotated back by W/2 before weighting:
///   out = h * primary + (1 - h) * rotate_180(rotated)
/// Masks are OR-combined. OpenMP-parallel over rows.
EquirectFrame blend_pair(const EquirectFrame& primary, const EquirectFrame& rotated);

EquirectClip blend_clips(const EquirectClip& primary, const EquirectClip& rotated);

inline constexpr double kDefaultLatitudeDelta = 0.01;

/// lambda(h) = (1/2 - |1/2 - h|)^2 + delta.
double latitude_weight(double h, double delta);

struct LatitudeWeightMap {
    int height = 0;
    double delta = kDefaultLatitudeDelta;
    std::vector<double> weights; ///< one per row, h = (r + 0.5) / H
};

/// Requires height >= 2 and delta > 0.
LatitudeWeightMap latitude_weights(int height, double delta = kDefaultLatitudeDelta);

namespace reference {
EquirectFrame blend_pair(const EquirectFrame& primary, const EquirectFrame& rotated);
} // namespace reference

} // namespace pano
