// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "pano/assignment.hpp"
#include "pano/blend.hpp"
#include "pano/camera_sim.hpp"
#include "pano/filters.hpp"
#include "pano/formats.hpp"
#include "pano/geometry.hpp"
#include "pano/lines.hpp"
#include "pano/metrics.hpp"
#include "pano/projection.hpp"
#include "pano/raster.hpp"
#include "pano/rng.hpp"
#include "synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace pano;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kRoundTripPsnr = 30.0;
constexpr double kRoundTripSeconds = 5.0;
constexpr int kRoundTripInteriorMargin = 8;
constexpr float kEquivarianceTol = 1e-3f;
constexpr double kEquivarianceMaskFraction = 0.02;
constexpr double kMatrixTol = 1e-12;
constexpr double kFormulaTol = 1e-12;
constexpr double kBlendSeamSlack = 1e-6;
constexpr double kTransferTol = 1e-6;
constexpr double kSelfConsistencyMin = 0.95;
constexpr double kNoiseConsistencyMax = 0.3;
constexpr double kPsnrTarget = 28.13;
constexpr double kPsnrTol = 0.01;
constexpr double kOracleRelTol = 1e-9;
constexpr double kPipelineSeconds = 60.0;

const fs::path kData = PANO_TEST_DATA_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Checks {
public:
    void expect(bool ok, const std::string& what)
    {
        if (!ok && failures_.empty()) {
            failures_ = what;
        }
        pass_ = pass_ && ok;
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
    Outcome outcome() const { return {pass_, pass_ ? notes_ : failures_ + (notes_.empty() ? "" : " (" + notes_ + ")")}; }

private:
    bool pass_ = true;
    std::string failures_;
    std::string notes_;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const Mat3& a, const Mat3& b)
{
    double d = 0;
    for (int i = 0; i < 9; ++i) {
        d = std::max(d, std::abs(a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)]));
    }
    return d;
}

// ---- projection ----

Outcome projection_round_trip()
{
    Checks c;
    SplitMix64 rng(2025);
    const int size = 256;
    const int he = 1024;
    Mask interior(size, size, false);
    for (int r = kRoundTripInteriorMargin; r < size - kRoundTripInteriorMargin; ++r) {
        for (int col = kRoundTripInteriorMargin; col < size - kRoundTripInteriorMargin; ++col) {
            interior.set(col, r, true);
        }
    }
    double worst = 1e9;
    double elapsed = 0;
    for (int i = 0; i < 20; ++i) {
        const PerspectiveFrame f(testing::smooth_pattern(size, size, 100 + static_cast<std::uint64_t>(i)));
        const FieldOfView fov = FieldOfView::from_degrees(rng.uniform(30, 120), rng.uniform(30, 120));
        const EulerPose pose(rng.uniform(-kPi, kPi), rng.uniform(-kPi / 2, kPi / 2), rng.uniform(-kPi, kPi));
        const auto t0 = std::chrono::steady_clock::now();
        const auto e = project_to_equirect(f, pose, fov, he);
        const auto back = unwrap_to_perspective(e, pose, fov, size, size);
        elapsed += seconds_since(t0);
        const double p = masked_psnr(f.image(), back.image(), interior);
        worst = std::min(worst, p);
        c.expect(p > kRoundTripPsnr, "pose " + std::to_string(i) + " PSNR " + fmt("%.2f dB", p));
    }
    c.expect(elapsed < kRoundTripSeconds, "runtime " + fmt("%.2f s", elapsed));
    c.note("worst " + fmt("%.2f dB", worst) + ", " + fmt("%.2f s", elapsed));
    return c.outcome();
}

bool within_neighbourhood(const EquirectFrame& a, const EquirectFrame& b, int col, int r, float tol)
{
    const Rgb v = a.image().at(col, r);
    float lo[3] = {1e9f, 1e9f, 1e9f};
    float hi[3] = {-1e9f, -1e9f, -1e9f};
    for (int dr = -1; dr <= 1; ++dr) {
        const int rr = std::clamp(r + dr, 0, b.height() - 1);
        for (int dc = -1; dc <= 1; ++dc) {
            const int cc = (col + dc + b.width()) % b.width();
            const Rgb n = b.image().at(cc, rr);
            const float ch[3] = {n.r, n.g, n.b};
            for (int k = 0; k < 3; ++k) {
                lo[k] = std::min(lo[k], ch[k]);
                hi[k] = std::max(hi[k], ch[k]);
            }
        }
    }
    const float ch[3] = {v.r, v.g, v.b};
    for (int k = 0; k < 3; ++k) {
        if (ch[k] < lo[k] - tol || ch[k] > hi[k] + tol) {
            return false;
        }
    }
    return true;
}

bool observed_neighbourhood(const EquirectFrame& f, int col, int r)
{
    for (int dr = -1; dr <= 1; ++dr) {
        const int rr = std::clamp(r + dr, 0, f.height() - 1);
        for (int dc = -1; dc <= 1; ++dc) {
            if (!f.mask().at((col + dc + f.width()) % f.width(), rr)) {
                return false;
            }
        }
    }
    return true;
}

Outcome yaw_equivariance()
{
    Checks c;
    const PerspectiveFrame f(testing::smooth_pattern(128, 128, 31));
    const FieldOfView fov = FieldOfView::from_degrees(75, 65);
    const int he = 256;
    const int we = 2 * he;
    const EulerPose base(0.05, 0.3, 0.7);
    const auto e0 = project_to_equirect(f, base, fov, he);
    SplitMix64 rng(77);
    double worst_mask = 0;
    for (int i = 0; i < 10; ++i) {
        const double delta = rng.uniform(-kPi, kPi);
        const auto shift = static_cast<long long>(std::llround(delta * we / kTwoPi));
        const auto e1 = project_to_equirect(f, EulerPose(base.roll, base.pitch, base.yaw + delta), fov, he);
        const auto shifted = circular_shift(e0, shift);
        int bad = 0;
        int mask_bad = 0;
        for (int r = 0; r < he; ++r) {
            for (int col = 0; col < we; ++col) {
                if (e1.mask().at(col, r) != shifted.mask().at(col, r)) {
                    ++mask_bad;
                } else if (e1.mask().at(col, r) && observed_neighbourhood(shifted, col, r) &&
                           !within_neighbourhood(e1, shifted, col, r, kEquivarianceTol)) {
                    ++bad;
                }
            }
        }
        const double mask_fraction = static_cast<double>(mask_bad) / static_cast<double>(shifted.mask().count());
        worst_mask = std::max(worst_mask, mask_fraction);
        c.expect(bad == 0, std::to_string(bad) + " pixels off by more than one pixel at delta " + fmt("%.4f", delta));
        c.expect(mask_fraction < kEquivarianceMaskFraction, "mask disagreement " + fmt("%.4f", mask_fraction));
    }
    c.note("10 shifts, worst mask disagreement " + fmt("%.4f", worst_mask));
    return c.outcome();
}

// ---- sphere geometry ----

Mat3 expected_roll(double r)
{
    return Mat3{{1, 0, 0, 0, std::cos(r), -std::sin(r), 0, std::sin(r), std::cos(r)}};
}

Mat3 expected_pitch(double p)
{
    return Mat3{{std::cos(p), 0, std::sin(p), 0, 1, 0, -std::sin(p), 0, std::cos(p)}};
}

Mat3 expected_yaw(double y)
{
    return Mat3{{std::cos(y), -std::sin(y), 0, std::sin(y), std::cos(y), 0, 0, 0, 1}};
}

Outcome formula_anchors()
{
    Checks c;
    for (int he : {64, 256, 512, 1024}) {
        const auto e = spherical_to_equirect({0.0, 0.0}, 2 * he, he);
        c.expect(e.u == static_cast<double>(he) && e.v == he / 2.0, "centre anchor at H=" + std::to_string(he));
    }
    SplitMix64 rng(4);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double r = rng.uniform(-kPi, kPi);
        const double p = rng.uniform(-kPi, kPi);
        const double y = rng.uniform(-kPi, kPi);
        worst = std::max(worst, max_abs_diff(roll_matrix(r), expected_roll(r)));
        worst = std::max(worst, max_abs_diff(pitch_matrix(p), expected_pitch(p)));
        worst = std::max(worst, max_abs_diff(yaw_matrix(y), expected_yaw(y)));
        const EulerPose pose(r, p, y);
        const Mat3 composed = expected_yaw(pose.yaw) * expected_pitch(pose.pitch) * expected_roll(pose.roll);
        worst = std::max(worst, max_abs_diff(rotation_from_pose(pose), composed));
    }
    c.expect(worst <= kMatrixTol, "matrix entry off by " + fmt("%.3g", worst));
    c.note("max entry error " + fmt("%.3g", worst));
    return c.outcome();
}

// ---- camera simulation ----

Outcome simulator()
{
    Checks c;
    MotionParams p;
    p.omega = 0.11;
    p.tau_roll = 0.4;
    p.tau_pitch = 2.1;
    p.tau_yaw = 5.0;
    p.amp_roll = 0.03;
    p.amp_pitch = 0.06;
    p.amp_yaw = 0.04;
    p.drift_pitch = 0.001;
    p.drift_yaw = -0.012;
    p.yaw_offset = -0.8;
    p.seed = 3;
    const auto raw = simulate_angles(p, 2000);
    bool exact = raw.size() == 2000;
    for (std::size_t k = 0; k < raw.size() && exact; ++k) {
        const double kd = static_cast<double>(k);
        exact = raw[k].roll == p.amp_roll * std::sin(p.omega * kd + p.tau_roll) &&
                raw[k].pitch == p.amp_pitch * std::sin(p.omega * kd + p.tau_pitch) + p.drift_pitch * kd &&
                raw[k].yaw == p.amp_yaw * std::sin(p.omega * kd + p.tau_yaw) + p.drift_yaw * kd + p.yaw_offset;
    }
    c.expect(exact, "zero-noise trajectory differs from the closed form");

    MotionParams n;
    n.noise_yaw = deg_to_rad(0.5);
    n.drift_yaw = deg_to_rad(0.2);
    n.seed = 17;
    const int t = 10000;
    const auto noisy = simulate_angles(n, t);
    double sk = 0, sy = 0, skk = 0, sky = 0;
    for (int k = 0; k < t; ++k) {
        const double y = noisy[static_cast<std::size_t>(k)].yaw;
        sk += k;
        sy += y;
        skk += static_cast<double>(k) * k;
        sky += k * y;
    }
    const double slope = (t * sky - sk * sy) / (t * skk - sk * sk);
    const double bound = 3 * n.noise_yaw / std::sqrt(static_cast<double>(t));
    c.expect(std::abs(slope - n.drift_yaw) < bound, "drift error " + fmt("%.3g", std::abs(slope - n.drift_yaw)));

    const ParamRanges ranges;
    double lo = 10;
    double hi = 0;
    for (std::uint64_t s = 0; s < 100000; ++s) {
        const FieldOfView fov = sample_params(ranges, s).second;
        lo = std::min({lo, fov.horizontal, fov.vertical});
        hi = std::max({hi, fov.horizontal, fov.vertical});
    }
    c.expect(lo >= deg_to_rad(30.0) && hi <= deg_to_rad(120.0), "FoV sample outside [30, 120] degrees");
    c.note("drift error " + fmt("%.2g", std::abs(slope - n.drift_yaw)) + " < " + fmt("%.2g", bound) + ", FoV in [" +
           fmt("%.3f", rad_to_deg(lo)) + ", " + fmt("%.3f", rad_to_deg(hi)) + "] deg");
    return c.outcome();
}

// ---- blending ----

EquirectFrame gradient_frame(int height)
{
    Image img(2 * height, height);
    for (int r = 0; r < height; ++r) {
        for (int col = 0; col < 2 * height; ++col) {
            const float v = static_cast<float>(col) / static_cast<float>(2 * height);
            img.set(col, r, {v, 0.5f * v + 0.1f * static_cast<float>(r) / height, 1.0f - v});
        }
    }
    return EquirectFrame(std::move(img));
}

float column_jump(const Image& img, int c0, int c1, int r)
{
    const Rgb a = img.at(c0, r);
    const Rgb b = img.at(c1, r);
    return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

Outcome blended_decoding()
{
    Checks c;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EquirectFrame f(testing::noise_image(256, 128, seed));
        SplitMix64 rng(seed + 40);
        for (int r = 0; r < 128; ++r) {
            for (int col = 0; col < 256; ++col) {
                f.mask().set(col, r, rng.uniform() < 0.8);
            }
        }
        c.expect(blend_pair(f, rotate_180(f)) == f, "consistent pair did not blend to itself");
    }

    // each frame is smooth except across its own seam
    const EquirectFrame primary = gradient_frame(128);
    const EquirectFrame rotated = gradient_frame(128);
    const EquirectFrame out = blend_pair(primary, rotated);
    const int w = out.width();
    float interior = 0;
    for (const EquirectFrame* in : {&primary, &rotated}) {
        for (int r = 0; r < in->height(); ++r) {
            for (int col = 0; col + 1 < w; ++col) {
                interior = std::max(interior, column_jump(in->image(), col, col + 1, r));
            }
        }
    }
    float seam = 0;
    for (int r = 0; r < out.height(); ++r) {
        seam = std::max(seam, column_jump(out.image(), w - 1, 0, r));
    }
    c.expect(seam <= interior + kBlendSeamSlack, "seam jump " + fmt("%.3g", seam) + " > interior " + fmt("%.3g", interior));

    SplitMix64 rng(9);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        const int width = 2 + static_cast<int>(rng.next() % 4096);
        const int col = static_cast<int>(rng.next() % static_cast<std::uint64_t>(width));
        worst = std::max(worst, std::abs(seam_weight(col, width) - (1.0 - 2.0 * std::abs(static_cast<double>(col) / width - 0.5))));
        const double h = rng.uniform();
        const double delta = rng.uniform(1e-4, 0.2);
        const double e = 0.5 - std::abs(0.5 - h);
        worst = std::max(worst, std::abs(latitude_weight(h, delta) - (e * e + delta)));
    }
    c.expect(worst <= kFormulaTol, "weight formula off by " + fmt("%.3g", worst));
    const double d = kDefaultLatitudeDelta;
    c.expect(latitude_weight(0.0, d) == d && latitude_weight(1.0, d) == d, "latitude weight at the poles is not delta");
    c.expect(std::abs(latitude_weight(0.5, d) - (0.25 + d)) <= kFormulaTol, "latitude weight at the equator is not 0.25 + delta");
    c.note("seam jump " + fmt("%.4f", seam) + " vs interior " + fmt("%.4f", interior) + ", formula error " + fmt("%.2g", worst));
    return c.outcome();
}

// ---- line metric ----

std::optional<Point2> transfer_by_rays(const Point2& p, int w, int h, const FieldOfView& fov, const EulerPose& a,
                                       const EulerPose& b)
{
    const Vec3 world = rotation_from_pose(a) * ndc_to_camera_ray(pixel_to_ndc(p.x, p.y, w, h), fov);
    const Vec3 cam = rotation_from_pose(b).transposed() * world;
    if (!(cam.x > 0)) {
        return std::nullopt;
    }
    const double xn = cam.y / (cam.x * std::tan(fov.horizontal / 2));
    const double yn = -cam.z / (cam.x * std::tan(fov.vertical / 2));
    return Point2{(xn + 1) * w / 2, (yn + 1) * h / 2};
}

bool segments_cross(const LineSegment& a, const LineSegment& b)
{
    auto side = [](const Point2& p, const Point2& q, const Point2& r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    };
    const double d1 = side(a.p1, a.p2, b.p1);
    const double d2 = side(a.p1, a.p2, b.p2);
    const double d3 = side(b.p1, b.p2, a.p1);
    const double d4 = side(b.p1, b.p2, a.p2);
    return d1 * d2 < 0 && d3 * d4 < 0;
}

double point_segment_distance(const Point2& p, const LineSegment& s)
{
    const double dx = s.p2.x - s.p1.x;
    const double dy = s.p2.y - s.p1.y;
    const double t = std::clamp(((p.x - s.p1.x) * dx + (p.y - s.p1.y) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    return std::hypot(p.x - s.p1.x - t * dx, p.y - s.p1.y - t * dy);
}

// Four separated, non-crossing segments inside a margin.
std::vector<LineSegment> random_segments(std::uint64_t seed, int w, int h)
{
    SplitMix64 rng(seed);
    std::vector<LineSegment> out;
    const double margin = 14;
    while (out.size() < 4) {
        const double len = rng.uniform(60, 130);
        const double ang = rng.uniform(0, kPi);
        const Point2 mid{rng.uniform(margin, w - margin), rng.uniform(margin, h - margin)};
        const LineSegment s{{mid.x - len / 2 * std::cos(ang), mid.y - len / 2 * std::sin(ang)},
                            {mid.x + len / 2 * std::cos(ang), mid.y + len / 2 * std::sin(ang)}};
        auto inside = [&](const Point2& p) { return p.x >= margin && p.x <= w - margin && p.y >= margin && p.y <= h - margin; };
        if (!inside(s.p1) || !inside(s.p2)) {
            continue;
        }
        const bool clear = std::none_of(out.begin(), out.end(), [&](const LineSegment& o) {
            return segments_cross(s, o) || point_segment_distance(s.p1, o) < 12 || point_segment_distance(s.p2, o) < 12 ||
                   point_segment_distance(o.p1, s) < 12 || point_segment_distance(o.p2, s) < 12;
        });
        if (clear) {
            out.push_back(s);
        }
    }
    return out;
}

Outcome line_metric()
{
    Checks c;
    SplitMix64 rng(1);
    int instances = 0;
    for (int rows = 0; rows <= 6; ++rows) {
        for (int cols = 0; cols <= 6; ++cols) {
            for (int trial = 0; trial < 10; ++trial) {
                std::vector<std::vector<double>> s(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols)));
                ScoreMatrix m(rows, cols);
                for (int r = 0; r < rows; ++r) {
                    for (int col = 0; col < cols; ++col) {
                        const double v = trial % 2 == 0 ? static_cast<double>(rng.next() % 3) : rng.uniform();
                        s[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] = v;
                        m(r, col) = v;
                    }
                }
                const auto a = max_score_assignment(m);
                double total = 0;
                for (std::size_t r = 0; r < a.size(); ++r) {
                    if (a[r] >= 0) {
                        total += s[r][static_cast<std::size_t>(a[r])];
                    }
                }
                c.expect(std::abs(total - testing::brute_force_max_assignment(s)) <= 1e-12,
                         "assignment below the brute-force optimum at " + std::to_string(rows) + "x" + std::to_string(cols));
                ++instances;
            }
        }
    }

    const LineSegment a{{10, 10}, {50, 30}};
    const LineSegment h{{20, 40}, {60, 40}};
    const LineSegment v{{40, 20}, {40, 60}};
    c.expect(ea_score(a, a, 100, 80) == 1.0, "identical lines do not score 1");
    c.expect(ea_score(h, v, 100, 80) == 0.0, "perpendicular lines through one midpoint do not score 0");

    SplitMix64 prng(21);
    double worst_point = 0;
    double worst_line = 0;
    const int w = 320;
    const int hh = 240;
    for (int i = 0; i < 500; ++i) {
        const FieldOfView fov(prng.uniform(0.6, 2.0), prng.uniform(0.6, 2.0));
        const EulerPose pa(prng.uniform(-0.5, 0.5), prng.uniform(-0.5, 0.5), prng.uniform(-kPi, kPi));
        const EulerPose pb(pa.roll + prng.uniform(-0.2, 0.2), pa.pitch + prng.uniform(-0.2, 0.2), pa.yaw + prng.uniform(-0.4, 0.4));
        const Intrinsics k = Intrinsics::from_fov(w, hh, fov);
        const Mat3 hab = rotation_homography(k, pa, k, pb);
        const Point2 p{prng.uniform(0, w), prng.uniform(0, hh)};
        const Point2 q{prng.uniform(0, w), prng.uniform(0, hh)};
        const auto by_h = apply_homography(hab, p);
        const auto by_rays = transfer_by_rays(p, w, hh, fov, pa, pb);
        if (by_rays && by_h) {
            worst_point = std::max({worst_point, std::abs(by_h->x - by_rays->x), std::abs(by_h->y - by_rays->y)});
        }
        if (p == q) {
            continue;
        }
        const auto lb = transfer_line(HomogeneousLine::through(p, q), hab);
        for (double t : {0.0, 0.5, 1.0}) {
            const auto mapped = apply_homography(hab, Point2{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
            if (mapped && std::abs(mapped->x) < 1e5 && std::abs(mapped->y) < 1e5) {
                worst_line = std::max(worst_line, std::abs(lb.signed_distance(*mapped)));
            }
        }
    }
    c.expect(worst_point < kTransferTol, "point transfer paths differ by " + fmt("%.3g px", worst_point));
    c.expect(worst_line < kTransferTol, "line transfer off the mapped points by " + fmt("%.3g px", worst_line));

    const FieldOfView fov = FieldOfView::from_degrees(90, 70);
    const int vw = 192;
    const int vh = 144;
    const Rgb bg{0.25f, 0.25f, 0.3f};
    double worst_self = 1;
    double worst_noise = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const EulerPose pose(0.0, 0.05, -2.0 + 0.2 * static_cast<double>(seed));
        LineConsistencyInput in;
        in.annotations = random_segments(seed + 500, vw, vh);
        in.width = vw;
        in.height = vh;
        in.input_pose = pose;
        in.fov = fov;
        in.neighbor_poses = {EulerPose(pose.roll, pose.pitch, pose.yaw + deg_to_rad(8.0)),
                             EulerPose(pose.roll + 0.02, pose.pitch - 0.03, pose.yaw - deg_to_rad(6.0))};
        Image img(vw, vh, bg);
        testing::draw_segments(img, in.annotations, 2.0, {0.95f, 0.9f, 0.8f});
        EquirectFrame f = project_to_equirect(PerspectiveFrame(img), pose, fov, 512);
        for (int r = 0; r < f.height(); ++r) {
            for (int col = 0; col < f.width(); ++col) {
                if (!f.mask().at(col, r)) {
                    f.image().set(col, r, bg);
                }
            }
        }
        EquirectClip self;
        self.frames.push_back(f);
        const auto good = line_consistency(in, self);
        worst_self = std::min(worst_self, good.penalized_mean);
        c.expect(good.penalized_mean >= kSelfConsistencyMin, "self-consistency " + fmt("%.3f", good.penalized_mean) +
                                                                  " at seed " + std::to_string(seed));

        EquirectClip noise;
        noise.frames.emplace_back(testing::noise_image(1024, 512, seed));
        const auto bad = line_consistency(in, noise);
        worst_noise = std::max({worst_noise, bad.mean_score, bad.penalized_mean});
        c.expect(bad.mean_score <= kNoiseConsistencyMax && bad.penalized_mean <= kNoiseConsistencyMax,
                 "noise panorama scores " + fmt("%.3f", std::max(bad.mean_score, bad.penalized_mean)) + " at seed " +
                     std::to_string(seed));
    }
    c.note(std::to_string(instances) + " assignments, transfer " + fmt("%.2g", std::max(worst_point, worst_line)) +
           " px, self >= " + fmt("%.3f", worst_self) + ", noise <= " + fmt("%.3f", worst_noise));
    return c.outcome();
}

// ---- masked PSNR ----

Outcome masked_psnr_check()
{
    Checks c;
    const float e = 10.0f / 255.0f;
    const Image a(128, 64, {0.5f, 0.5f, 0.5f});
    const Image b(128, 64, {0.5f + e, 0.5f - e, 0.5f + e});
    const double p = masked_psnr(a, b, Mask(128, 64, true));
    c.expect(std::abs(p - kPsnrTarget) <= kPsnrTol, "uniform error gives " + fmt("%.4f dB", p));

    SplitMix64 rng(5);
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Image x = testing::noise_image(48, 32, seed);
        const Image y = testing::noise_image(48, 32, seed + 50);
        Mask m(48, 32, false);
        double sum = 0;
        long n = 0;
        for (int r = 0; r < 32; ++r) {
            for (int col = 0; col < 48; ++col) {
                if (rng.uniform() >= 0.4) {
                    continue;
                }
                m.set(col, r, true);
                const Rgb u = x.at(col, r);
                const Rgb w = y.at(col, r);
                sum += std::pow(double(u.r) - w.r, 2) + std::pow(double(u.g) - w.g, 2) + std::pow(double(u.b) - w.b, 2);
                n += 3;
            }
        }
        const double oracle = 10 * std::log10(1.0 / (sum / static_cast<double>(n)));
        worst = std::max(worst, std::abs(masked_psnr(x, y, m) - oracle) / oracle);
    }
    c.expect(worst <= kOracleRelTol, "masked PSNR differs from the per-pixel oracle by " + fmt("%.3g", worst));
    c.note(fmt("%.4f dB", p) + ", oracle rel. error " + fmt("%.2g", worst));
    return c.outcome();
}

// ---- filter pipeline ----

std::string clip_key(const ClipRecord& r)
{
    return r.source + "[" + std::to_string(r.range.start) + "," + std::to_string(r.range.end) + ")";
}

Outcome filter_pipeline()
{
    Checks c;
    const fs::path corpus = kData / "data" / "corpus" / "corpus.json";
    const FilterConfig config;
    const auto t0 = std::chrono::steady_clock::now();
    const auto videos = load_corpus(corpus);
    const PipelineResult first = run_pipeline(videos, config);
    const double elapsed = seconds_since(t0);
    c.expect(elapsed < kPipelineSeconds, "pipeline took " + fmt("%.1f s", elapsed));
    c.expect(videos.size() == 6, "corpus has " + std::to_string(videos.size()) + " videos");

    int clean_clips = 0;
    std::ostringstream firsts;
    for (const auto& r : first.clips) {
        const bool clean = r.source == "clean";
        clean_clips += clean ? 1 : 0;
        c.expect(r.accepted() == clean, clip_key(r) + (clean ? " rejected by " + r.first_failure() : " accepted"));
        if (!clean && r.range.start == 0) {
            firsts << (firsts.tellp() > 0 ? " " : "") << r.source << "->" << r.first_failure();
        }
    }
    c.expect(clean_clips > 0, "no clean clips");
    c.expect(first.summary.accepted == clean_clips, "accepted count differs from the clean clip count");

    // each violation is caught by a different filter
    std::vector<std::string> reasons;
    for (const auto& r : first.clips) {
        if (!r.accepted()) {
            reasons.push_back(r.first_failure());
        }
    }
    std::sort(reasons.begin(), reasons.end());
    reasons.erase(std::unique(reasons.begin(), reasons.end()), reasons.end());
    c.expect(reasons.size() == 5, std::to_string(reasons.size()) + " distinct rejection reasons");

    const PipelineResult second = run_pipeline(load_corpus(corpus), config);
    c.expect(second.clips == first.clips && second.summary == first.summary, "second run differs");

    const auto clean_video = std::find_if(videos.begin(), videos.end(), [](const VideoInput& v) { return v.id == "clean"; });
    if (clean_video != videos.end()) {
        VideoInput v = *clean_video;
        v.likes = 50;
        const auto at50 = filter_video(v, config);
        v.likes = 51;
        const auto at51 = filter_video(v, config);
        c.expect(!at50.empty() && std::all_of(at50.begin(), at50.end(), [](const ClipRecord& r) { return r.first_failure() == "likes"; }),
                 "50 likes not rejected by the like gate");
        c.expect(!at51.empty() && std::all_of(at51.begin(), at51.end(), [](const ClipRecord& r) { return r.accepted(); }),
                 "51 likes not accepted");
    } else {
        c.expect(false, "corpus has no clean video");
    }
    c.note(std::to_string(clean_clips) + " clean clips accepted, " + firsts.str() + ", " + fmt("%.1f s", elapsed));
    return c.outcome();
}

// ---- window planning ----

Outcome window_planning()
{
    Checks c;
    const auto one = plan_windows(25, 25, 5);
    c.expect(one.windows == std::vector<FrameWindow>{{0, 25}}, "(25, 25, 5) is not one window");
    const auto two = plan_windows(45, 25, 5);
    c.expect(two.windows == std::vector<FrameWindow>{{0, 25}, {20, 45}}, "(45, 25, 5) is not [0,25) [20,45)");
    int plans = 0;
    int tails = 0;
    for (int total = 2; total <= 150; ++total) {
        for (int t = 2; t <= std::min(total, 40); ++t) {
            for (int s = 1; s < t; ++s) {
                const auto p = plan_windows(total, t, s);
                ++plans;
                c.expect(p.windows.front().start == 0 && p.windows.back().end == total, "plan does not cover the clip");
                for (std::size_t i = 1; i < p.windows.size(); ++i) {
                    const int overlap = p.windows[i - 1].end - p.windows[i].start;
                    const bool tail = p.aligned_tail && i + 1 == p.windows.size();
                    if (tail) {
                        ++tails;
                        c.expect(overlap > s, "aligned tail overlaps by " + std::to_string(overlap));
                    } else {
                        c.expect(overlap == s, "overlap " + std::to_string(overlap) + " != S=" + std::to_string(s));
                    }
                }
                c.expect(p.aligned_tail == ((total - t) % (t - s) != 0), "tail flag disagrees with the stride");
            }
        }
    }
    c.note(std::to_string(plans) + " plans, " + std::to_string(tails) + " pulled-back tails flagged");
    return c.outcome();
}

// ---- formats ----

template <typename Parse>
std::optional<FormatError> parse_failure(Parse parse, const std::string& text)
{
    try {
        parse(text);
    } catch (const FormatError& e) {
        return e;
    }
    return std::nullopt;
}

std::string replace_once(std::string s, const std::string& from, const std::string& to)
{
    const auto at = s.find(from);
    if (at != std::string::npos) {
        s.replace(at, from.size(), to);
    }
    return s;
}

Outcome format_round_trips()
{
    Checks c;
    const fs::path g = kData / "golden";
    auto round_trip = [&](const char* name, auto parse) {
        const std::string text = read_text(g / name);
        c.expect(serialize(parse(text)) == text, std::string(name) + " does not round-trip");
    };
    round_trip("clip_perspective.json", [](const std::string& t) { return parse_clip_manifest(t); });
    round_trip("clip_equirect.json", [](const std::string& t) { return parse_clip_manifest(t); });
    round_trip("trajectory.json", [](const std::string& t) { return parse_trajectory(t); });
    round_trip("annotations.json", [](const std::string& t) { return parse_annotations(t); });
    round_trip("corpus.json", [](const std::string& t) { return parse_corpus_manifest(t); });
    round_trip("filter_config.json", [](const std::string& t) { return parse_filter_config(t); });
    round_trip("verdicts.json", [](const std::string& t) { return parse_verdicts(t); });

    struct Malformed {
        std::string text;
        std::function<void(const std::string&)> parse;
        std::string location;
    };
    const std::string traj = read_text(g / "trajectory.json");
    const std::string ann = read_text(g / "annotations.json");
    const std::string eq = read_text(g / "clip_equirect.json");
    const std::string verdicts = read_text(g / "verdicts.json");
    auto t = [](const std::string& s) { parse_trajectory(s); };
    const std::vector<Malformed> cases = {
        {replace_once(traj, "\"index\": 3,", "\"index\": 4,"), t, "$.frames[3].index"},
        {replace_once(traj, "\"schema_version\": 1", "\"schema_version\": 2"), t, "$.schema_version"},
        {replace_once(traj, "\"index\": 2,", "\"index\": 2, \"speed\": 1,"), t, "$.frames[2].speed"},
        {replace_once(ann, "\"x2\": 200.0", "\"x2\": 256.0"), [](const std::string& s) { parse_annotations(s); }, "$.lines[0].x2"},
        {replace_once(eq, "\"height\": 512", "\"height\": 500"), [](const std::string& s) { parse_clip_manifest(s); }, "$.width"},
        {replace_once(verdicts, "\"accepted\": true", "\"accepted\": false"), [](const std::string& s) { parse_verdicts(s); },
         "$.clips[0].accepted"},
        {R"({"schema_version": 1, "blackness": {"threshold": 2}})", [](const std::string& s) { parse_filter_config(s); },
         "$.blackness.threshold"},
        {"{\n  \"schema_version\": 1,\n  \"fov\": {\"horizontal\": 1.0,, }\n}\n", t, "line 3"},
    };
    for (const auto& m : cases) {
        const auto e = parse_failure(m.parse, m.text);
        c.expect(e.has_value(), "malformed input accepted, expected error at " + m.location);
        if (e) {
            c.expect(e->location().rfind(m.location, 0) == 0, "error at '" + e->location() + "', expected " + m.location);
        }
    }
    c.note("7 golden files, " + std::to_string(cases.size()) + " malformed inputs located");
    return c.outcome();
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"projection-round-trip", projection_round_trip},
        {"yaw-equivariance", yaw_equivariance},
        {"formula-anchors", formula_anchors},
        {"camera-simulator", simulator},
        {"blended-decoding", blended_decoding},
        {"line-metric", line_metric},
        {"masked-psnr", masked_psnr_check},
        {"filter-pipeline", filter_pipeline},
        {"window-planning", window_planning},
        {"format-round-trips", format_round_trips},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
