#include "pano/blend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pano {

double seam_weight(int column, int width)
{
    if (width < 1 || column < 0 || column >= width) {
        throw std::invalid_argument("seam_weight column " + std::to_string(column) + " outside [0, " +
                                    std::to_string(width) + ")");
    }
    return 1.0 - 2.0 * std::abs(static_cast<double>(column) / width - 0.5);
}

SeamWeightProfile seam_profile(int width)
{
    SeamWeightProfile p;
    p.width = width;
    p.weights.resize(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) {
        p.weights[static_cast<std::size_t>(i)] = seam_weight(i, width);
    }
    return p;
}

namespace {

void check_pair(const EquirectFrame& a, const EquirectFrame& b)
{
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("blend_pair frames differ in size: " + std::to_string(a.width()) + "x" +
                                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()));
    }
}

// Written as aligned + h * (primary - aligned) so equal operands blend to themselves exactly.
inline float mix(float primary, float aligned, float h)
{
    return aligned + h * (primary - aligned);
}

} // namespace

EquirectFrame blend_pair(const EquirectFrame& primary, const EquirectFrame& rotated)
{
    check_pair(primary, rotated);
    const EquirectFrame aligned = rotate_180(rotated);
    const int w = primary.width();
    const int h = primary.height();
    std::vector<float> weight(static_cast<std::size_t>(w));
    for (int i = 0; i < w; ++i) {
        weight[static_cast<std::size_t>(i)] = static_cast<float>(seam_weight(i, w));
    }

    Image out(w, h);
    Mask mask(w, h);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < h; ++r) {
        const float* p = primary.image().row_ptr(r);
        const float* a = aligned.image().row_ptr(r);
        float* o = out.row_ptr(r);
        for (int i = 0; i < w; ++i) {
            const float hw = weight[static_cast<std::size_t>(i)];
            for (int ch = 0; ch < 3; ++ch) {
                o[i * 3 + ch] = mix(p[i * 3 + ch], a[i * 3 + ch], hw);
            }
            mask.set(i, r, primary.mask().at(i, r) || aligned.mask().at(i, r));
        }
    }
    return EquirectFrame(std::move(out), std::move(mask));
}

EquirectClip blend_clips(const EquirectClip& primary, const EquirectClip& rotated)
{
    if (primary.size() != rotated.size()) {
        throw std::invalid_argument("blend clips differ in length");
    }
    EquirectClip out;
    out.fps = primary.fps;
    for (std::size_t k = 0; k < primary.size(); ++k) {
        out.frames.push_back(blend_pair(primary.frames[k], rotated.frames[k]));
    }
    return out;
}

double latitude_weight(double h, double delta)
{
    const double d = 0.5 - std::abs(0.5 - h);
    return d * d + delta;
}

LatitudeWeightMap latitude_weights(int height, double delta)
{
    if (height < 2) {
        throw std::invalid_argument("latitude weight map needs at least 2 rows");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("latitude weight offset must be positive");
    }
    LatitudeWeightMap map;
    map.height = height;
    map.delta = delta;
    map.weights.resize(static_cast<std::size_t>(height));
    for (int r = 0; r < height; ++r) {
        // distance of the row centre to the nearer pole; exactly mirror-symmetric
        const double d = std::min(2 * r + 1, 2 * height - 2 * r - 1) / (2.0 * height);
        map.weights[static_cast<std::size_t>(r)] = d * d + delta;
    }
    return map;
}

namespace reference {

EquirectFrame blend_pair(const EquirectFrame& primary, const EquirectFrame& rotated)
{
    check_pair(primary, rotated);
    const EquirectFrame aligned = rotate_180(rotated);
    Image out(primary.width(), primary.height());
    Mask mask(primary.width(), primary.height());
    for (int r = 0; r < primary.height(); ++r) {
        for (int i = 0; i < primary.width(); ++i) {
            const float hw = static_cast<float>(seam_weight(i, primary.width()));
            const Rgb p = primary.image().at(i, r);
            const Rgb a = aligned.image().at(i, r);
            out.set(i, r, {mix(p.r, a.r, hw), mix(p.g, a.g, hw), mix(p.b, a.b, hw)});
            mask.set(i, r, primary.mask().at(i, r) || aligned.mask().at(i, r));
        }
    }
    return EquirectFrame(std::move(out), std::move(mask));
}

} // namespace reference

} // namespace pano
