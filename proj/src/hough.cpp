#include "pano/hough.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pano {

namespace {

struct EdgePoint {
    double x;
    double y;
    double angle; ///< gradient direction mod pi
};

struct Peak {
    int votes;
    int bin;
    int rho;
};

// Thinned Sobel edges inside [x0, x1) x [y0, y1); coordinates relative to (x0, y0).
std::vector<EdgePoint> detect_edges(const Image& img, int x0, int y0, int x1, int y1, double threshold)
{
    const int w = img.width();
    const int h = img.height();
    const std::vector<float> lum = luminance_plane(img);
    auto at = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return static_cast<double>(lum[static_cast<std::size_t>(y) * w + x]);
    };

    // gradients over a one-pixel apron so NMS sees the region border's neighbours
    const int gx0 = std::max(0, x0 - 1);
    const int gy0 = std::max(0, y0 - 1);
    const int gx1 = std::min(w, x1 + 1);
    const int gy1 = std::min(h, y1 + 1);
    const int gw = gx1 - gx0;
    const int gh = gy1 - gy0;
    std::vector<double> gx(static_cast<std::size_t>(gw) * gh);
    std::vector<double> gy(gx.size());
    std::vector<double> mag(gx.size());
    for (int y = gy0; y < gy1; ++y) {
        for (int x = gx0; x < gx1; ++x) {
            const double sx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                              (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
            const double sy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                              (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
            const std::size_t i = static_cast<std::size_t>(y - gy0) * gw + (x - gx0);
            gx[i] = sx / 4.0;
            gy[i] = sy / 4.0;
            mag[i] = std::hypot(gx[i], gy[i]);
        }
    }
    auto mag_at = [&](int x, int y) {
        if (x < gx0 || x >= gx1 || y < gy0 || y >= gy1) {
            return 0.0;
        }
        return mag[static_cast<std::size_t>(y - gy0) * gw + (x - gx0)];
    };

    std::vector<EdgePoint> edges;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const std::size_t i = static_cast<std::size_t>(y - gy0) * gw + (x - gx0);
            const double m = mag[i];
            if (m < threshold) {
                continue;
            }
            double angle = std::atan2(gy[i], gx[i]);
            if (angle < 0.0) {
                angle += kPi;
            }
            if (angle >= kPi) {
                angle -= kPi;
            }
            // neighbour offsets along the gradient, quantized to 45 degrees
            int dx, dy;
            const double deg = rad_to_deg(angle);
            if (deg < 22.5 || deg >= 157.5) {
                dx = 1;
                dy = 0;
            } else if (deg < 67.5) {
                dx = 1;
                dy = 1;
            } else if (deg < 112.5) {
                dx = 0;
                dy = 1;
            } else {
                dx = -1;
                dy = 1;
            }
            if (m > mag_at(x + dx, y + dy) && m >= mag_at(x - dx, y - dy)) {
                edges.push_back({static_cast<double>(x - x0), static_cast<double>(y - y0), angle});
            }
        }
    }
    return edges;
}

double angle_diff_mod_pi(double a, double b)
{
    double d = std::abs(a - b);
    d = std::fmod(d, kPi);
    return std::min(d, kPi - d);
}

struct LineFit {
    Point2 centroid;
    Point2 dir; ///< unit
};

LineFit fit_tls(const std::vector<const EdgePoint*>& pts)
{
    double mx = 0.0;
    double my = 0.0;
    for (const auto* p : pts) {
        mx += p->x;
        my += p->y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (const auto* p : pts) {
        const double dx = p->x - mx;
        const double dy = p->y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    // principal axis of the 2x2 scatter matrix
    const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    return {{mx, my}, {std::cos(phi), std::sin(phi)}};
}

} // namespace

std::vector<LineSegment> hough_detect_region(const Image& img, int x0, int y0, int x1, int y1,
                                             const HoughParams& params)
{
    if (params.angle_bins < 4) {
        throw std::invalid_argument("hough needs at least 4 angle bins");
    }
    x0 = std::clamp(x0, 0, img.width());
    x1 = std::clamp(x1, 0, img.width());
    y0 = std::clamp(y0, 0, img.height());
    y1 = std::clamp(y1, 0, img.height());
    if (x1 - x0 < 3 || y1 - y0 < 3) {
        return {};
    }
    const std::vector<EdgePoint> edges = detect_edges(img, x0, y0, x1, y1, params.edge_threshold);
    if (edges.empty()) {
        return {};
    }

    const int bins = params.angle_bins;
    const double bin_width = kPi / bins;
    const double cx = (x1 - x0 - 1) / 2.0;
    const double cy = (y1 - y0 - 1) / 2.0;
    const int max_rho = static_cast<int>(std::ceil(std::hypot(cx + 1, cy + 1))) + 1;
    const int rho_count = 2 * max_rho + 1;
    std::vector<double> cos_t(static_cast<std::size_t>(bins));
    std::vector<double> sin_t(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        cos_t[static_cast<std::size_t>(b)] = std::cos(b * bin_width);
        sin_t[static_cast<std::size_t>(b)] = std::sin(b * bin_width);
    }

    const int tol_bins = std::max(0, static_cast<int>(std::lround(deg_to_rad(params.orientation_tolerance_deg) / bin_width)));
    std::vector<int> acc(static_cast<std::size_t>(bins) * rho_count, 0);
    for (const auto& e : edges) {
        const int center = static_cast<int>(std::lround(e.angle / bin_width));
        for (int db = -tol_bins; db <= tol_bins; ++db) {
            const int b = ((center + db) % bins + bins) % bins;
            const double rho = (e.x - cx) * cos_t[static_cast<std::size_t>(b)] + (e.y - cy) * sin_t[static_cast<std::size_t>(b)];
            const int ri = static_cast<int>(std::lround(rho)) + max_rho;
            ++acc[static_cast<std::size_t>(b) * rho_count + ri];
        }
    }

    std::vector<Peak> candidates;
    for (int b = 0; b < bins; ++b) {
        for (int ri = 0; ri < rho_count; ++ri) {
            // edges straddling a pixel boundary split their votes between adjacent offsets
            const std::size_t row = static_cast<std::size_t>(b) * rho_count;
            const int left = ri > 0 ? acc[row + ri - 1] : 0;
            const int right = ri + 1 < rho_count ? acc[row + ri + 1] : 0;
            const int v = acc[row + ri];
            if (v > 0 && v + std::max(left, right) >= params.accumulator_threshold) {
                candidates.push_back({v, b, ri - max_rho});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
        if (a.votes != b.votes) {
            return a.votes > b.votes;
        }
        return a.bin != b.bin ? a.bin < b.bin : a.rho < b.rho;
    });

    const int nms_bins = std::max(1, static_cast<int>(std::lround(deg_to_rad(params.nms_angle_deg) / bin_width)));
    auto near = [&](const Peak& p, const Peak& q) {
        int db = std::abs(p.bin - q.bin);
        int qrho = q.rho;
        if (db > bins / 2) {
            // across the 0/pi wrap the offset changes sign
            db = bins - db;
            qrho = -qrho;
        }
        return db <= nms_bins && std::abs(p.rho - qrho) <= params.nms_offset;
    };

    std::vector<Peak> peaks;
    for (const auto& c : candidates) {
        if (std::none_of(peaks.begin(), peaks.end(), [&](const Peak& p) { return near(p, c); })) {
            peaks.push_back(c);
        }
    }

    std::vector<std::uint8_t> used(edges.size(), 0);
    std::vector<LineSegment> out;
    const double support_tol = deg_to_rad(params.orientation_tolerance_deg) + bin_width;
    for (const auto& peak : peaks) {
        const double theta = peak.bin * bin_width;
        const double ct = cos_t[static_cast<std::size_t>(peak.bin)];
        const double st = sin_t[static_cast<std::size_t>(peak.bin)];
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (used[i]) {
                continue;
            }
            const auto& e = edges[i];
            const double rho = (e.x - cx) * ct + (e.y - cy) * st;
            if (std::abs(rho - peak.rho) <= params.nms_offset && angle_diff_mod_pi(e.angle, theta) <= support_tol) {
                support.push_back(i);
            }
        }
        if (support.size() < 2) {
            continue;
        }
        std::vector<const EdgePoint*> pts;
        pts.reserve(support.size());
        for (auto i : support) {
            pts.push_back(&edges[i]);
        }
        const LineFit fit = fit_tls(pts);

        std::vector<std::pair<double, std::size_t>> along;
        along.reserve(support.size());
        for (auto i : support) {
            along.emplace_back((edges[i].x - fit.centroid.x) * fit.dir.x + (edges[i].y - fit.centroid.y) * fit.dir.y, i);
        }
        std::sort(along.begin(), along.end());

        std::size_t best_begin = 0;
        std::size_t best_end = 0;
        double best_len = -1.0;
        std::size_t run_begin = 0;
        for (std::size_t k = 1; k <= along.size(); ++k) {
            if (k == along.size() || along[k].first - along[k - 1].first > params.max_gap) {
                const double len = along[k - 1].first - along[run_begin].first;
                if (len > best_len) {
                    best_len = len;
                    best_begin = run_begin;
                    best_end = k;
                }
                run_begin = k;
            }
        }
        if (best_len < params.min_segment_length) {
            continue;
        }

        std::vector<const EdgePoint*> run;
        for (std::size_t k = best_begin; k < best_end; ++k) {
            run.push_back(&edges[along[k].second]);
            used[along[k].second] = 1;
        }
        const LineFit refit = fit_tls(run);
        double tmin = std::numeric_limits<double>::infinity();
        double tmax = -std::numeric_limits<double>::infinity();
        for (const auto* p : run) {
            const double t = (p->x - refit.centroid.x) * refit.dir.x + (p->y - refit.centroid.y) * refit.dir.y;
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
        }
        out.push_back({{refit.centroid.x + tmin * refit.dir.x + x0, refit.centroid.y + tmin * refit.dir.y + y0},
                       {refit.centroid.x + tmax * refit.dir.x + x0, refit.centroid.y + tmax * refit.dir.y + y0}});
    }
    return out;
}

std::vector<LineSegment> hough_detect(const Image& img, const HoughParams& params)
{
    return hough_detect_region(img, 0, 0, img.width(), img.height(), params);
}

} // namespace pano
