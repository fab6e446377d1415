#include "synthetic.hpp"

#include "pano/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace pano::testing {

Image smooth_pattern(int width, int height, std::uint64_t seed, double min_wavelength)
{
    SplitMix64 rng(seed);
    struct Wave {
        double kx, ky, phase, amp;
    };
    std::array<std::vector<Wave>, 3> waves;
    for (auto& ch : waves) {
        for (int i = 0; i < 4; ++i) {
            const double wavelength = rng.uniform(min_wavelength, 4.0 * min_wavelength);
            const double dir = rng.uniform(0.0, kTwoPi);
            ch.push_back({std::cos(dir) * kTwoPi / wavelength, std::sin(dir) * kTwoPi / wavelength,
                          rng.uniform(0.0, kTwoPi), rng.uniform(0.05, 0.1)});
        }
    }
    Image img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            float v[3];
            for (int c = 0; c < 3; ++c) {
                double s = 0.5;
                for (const auto& w : waves[static_cast<std::size_t>(c)]) {
                    s += w.amp * std::sin(w.kx * x + w.ky * y + w.phase);
                }
                v[c] = static_cast<float>(std::clamp(s, 0.1, 0.9));
            }
            img.set(x, y, {v[0], v[1], v[2]});
        }
    }
    return img;
}

Image noise_image(int width, int height, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    Image img(width, height);
    for (float& v : img.values()) {
        v = static_cast<float>(rng.uniform());
    }
    return img;
}

void draw_segments(Image& img, const std::vector<LineSegment>& segments, double line_width, Rgb color)
{
    const double half = line_width / 2.0;
    for (const auto& s : segments) {
        const double dx = s.p2.x - s.p1.x;
        const double dy = s.p2.y - s.p1.y;
        const double len2 = dx * dx + dy * dy;
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(s.p1.x, s.p2.x) - half - 1)));
        const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(std::max(s.p1.x, s.p2.x) + half + 1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(s.p1.y, s.p2.y) - half - 1)));
        const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(std::max(s.p1.y, s.p2.y) + half + 1)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                double t = ((x - s.p1.x) * dx + (y - s.p1.y) * dy) / len2;
                t = std::clamp(t, 0.0, 1.0);
                const double px = s.p1.x + t * dx - x;
                const double py = s.p1.y + t * dy - y;
                const double dist = std::hypot(px, py);
                // pixel coverage approximated by a one-pixel linear ramp
                const double cover = std::clamp(half + 0.5 - dist, 0.0, 1.0);
                if (cover <= 0.0) {
                    continue;
                }
                const Rgb old = img.at(x, y);
                const auto f = static_cast<float>(cover);
                img.set(x, y, {old.r + f * (color.r - old.r), old.g + f * (color.g - old.g), old.b + f * (color.b - old.b)});
            }
        }
    }
}

Image scene_panorama(int width, int height, const SceneStyle& style)
{
    SplitMix64 rng(style.seed);
    Image img(width, height);
    const double two_pi_w = kTwoPi / width;
    const double p1 = rng.uniform(0.0, kTwoPi);
    const double p2 = rng.uniform(0.0, kTwoPi);
    const double cloud_phase = rng.uniform(0.0, kTwoPi);
    const double ground_phase = rng.uniform(0.0, kTwoPi);

    struct Block {
        int x0, width, top;
        Rgb color;
    };
    std::vector<Block> blocks;
    for (int i = 0; i < style.blocks; ++i) {
        Block b;
        b.width = static_cast<int>(rng.uniform(0.03, 0.07) * width);
        b.x0 = static_cast<int>(rng.uniform(0.0, 1.0) * width);
        b.top = static_cast<int>(rng.uniform(0.22, 0.42) * height);
        b.color = {static_cast<float>(rng.uniform(0.3, 0.8)), static_cast<float>(rng.uniform(0.3, 0.8)),
                   static_cast<float>(rng.uniform(0.3, 0.8))};
        blocks.push_back(b);
    }

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double horizon = height * (0.5 + 0.04 * std::sin(2 * two_pi_w * x + p1) + 0.025 * std::sin(5 * two_pi_w * x + p2));
            Rgb c;
            if (y < horizon) {
                const double t = std::clamp(y / horizon, 0.0, 1.0);
                const double cloud = 0.08 * std::sin(3 * two_pi_w * x + 0.11 * y + cloud_phase) *
                                     std::sin(7 * two_pi_w * x - 0.07 * y) +
                                     0.05 * std::sin(11 * two_pi_w * x + 0.19 * y);
                c.r = static_cast<float>(style.sky_top.r + t * (style.sky_horizon.r - style.sky_top.r) + cloud);
                c.g = static_cast<float>(style.sky_top.g + t * (style.sky_horizon.g - style.sky_top.g) + cloud);
                c.b = static_cast<float>(style.sky_top.b + t * (style.sky_horizon.b - style.sky_top.b) + cloud);
            } else {
                const double tex = 0.08 * std::sin(13 * two_pi_w * x + 0.21 * y + ground_phase) +
                                   0.06 * std::sin(29 * two_pi_w * x - 0.13 * y) +
                                   0.04 * std::sin(0.37 * y);
                c.r = static_cast<float>(style.ground.r + tex);
                c.g = static_cast<float>(style.ground.g + tex);
                c.b = static_cast<float>(style.ground.b + 0.5 * tex);
            }
            for (const auto& b : blocks) {
                const int dx = ((x - b.x0) % width + width) % width;
                if (dx < b.width && y >= b.top && y < horizon + 2) {
                    // window grid inside each block
                    const bool window = (dx % 6) >= 2 && ((y - b.top) % 8) >= 3;
                    const float shade = window ? 0.6f : 1.0f;
                    c = {b.color.r * shade, b.color.g * shade, b.color.b * shade};
                }
            }
            img.set(x, y, {std::clamp(c.r, 0.0f, 1.0f), std::clamp(c.g, 0.0f, 1.0f), std::clamp(c.b, 0.0f, 1.0f)});
        }
    }
    return img;
}

double brute_force_max_assignment(const std::vector<std::vector<double>>& scores)
{
    const std::size_t rows = scores.size();
    const std::size_t cols = rows ? scores.front().size() : 0;
    const std::size_t n = std::max(rows, cols);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = 0.0;
    do {
        double total = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (perm[r] < cols) {
                total += scores[r][perm[r]];
            }
        }
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace pano::testing
