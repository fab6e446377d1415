#include "pano/filters.hpp"

#include "pano/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pano {

namespace {

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok) {
        throw std::invalid_argument("filter config: " + field + " " + what);
    }
}

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

} // namespace

void FilterConfig::validate() const
{
    require(std::isfinite(clip_seconds) && clip_seconds > 0.0, "clip_seconds", "must be positive");
    require(std::isfinite(sample_fps) && sample_fps > 0.0, "sample_fps", "must be positive");
    require(coarse_downsample >= 1 && coarse_downsample <= 16, "coarse_downsample", "must be in [1, 16]");
    require(likes.min_likes >= 0, "likes.min_likes", "must be non-negative");
    require(format.band_fraction > 0.0 && format.band_fraction <= 0.5, "format.band_fraction", "must be in (0, 0.5]");
    require(format.boundary_fraction > 0.0 && format.boundary_fraction <= 0.5, "format.boundary_fraction",
            "must be in (0, 0.5]");
    require(format.min_line_fraction > 0.0 && format.min_line_fraction <= 1.0, "format.min_line_fraction",
            "must be in (0, 1]");
    require(in_unit(format.persistence), "format.persistence", "must be in [0, 1]");
    require(std::isfinite(half_similarity.threshold) && half_similarity.threshold >= 0.0 &&
                half_similarity.threshold <= 2.0,
            "half_similarity.threshold", "must be in [0, 2]");
    require(std::isfinite(static_check.threshold) && static_check.threshold >= 0.0, "static.threshold",
            "must be non-negative");
    require(static_check.samples >= 2, "static.samples", "must be at least 2");
    require(std::isfinite(motion.threshold) && motion.threshold >= 0.0, "motion.threshold", "must be non-negative");
    require(in_unit(motion.min_confidence), "motion.min_confidence", "must be in [0, 1]");
    require(in_unit(motion.min_reliable_fraction), "motion.min_reliable_fraction", "must be in [0, 1]");
    require(in_unit(cut.threshold), "cut.threshold", "must be in [0, 1]");
    require(in_unit(blackness.threshold), "blackness.threshold", "must be in [0, 1]");
    require(std::isfinite(variance.threshold) && variance.threshold >= 0.0, "variance.threshold",
            "must be non-negative");
    require(!text_enabled, "text.enabled", "is not supported");
}

namespace {

double line_angle(const LineSegment& s)
{
    double a = std::atan2(s.p2.y - s.p1.y, s.p2.x - s.p1.x);
    if (a < 0.0) {
        a += kPi;
    }
    return a >= kPi ? a - kPi : a;
}

bool near_horizontal(const LineSegment& s, double tol)
{
    const double a = line_angle(s);
    return a <= tol || a >= kPi - tol;
}

bool near_vertical(const LineSegment& s, double tol)
{
    return std::abs(line_angle(s) - kPi / 2.0) <= tol;
}

HoughParams band_hough(double required_length)
{
    HoughParams p;
    p.edge_threshold = 0.05;
    p.orientation_tolerance_deg = 8.0;
    p.max_gap = std::max(3.0, 0.15 * required_length);
    p.min_segment_length = required_length;
    p.accumulator_threshold = std::max(6, static_cast<int>(required_length * 0.5));
    return p;
}

} // namespace

FormatResult format_check(const std::vector<Image>& frames, const FormatParams& params)
{
    FormatResult result;
    if (frames.empty()) {
        return result;
    }
    const double tol = deg_to_rad(5.0);
    // line positions per frame: y of central horizontals, x of verticals in the seam image
    std::vector<std::vector<double>> center_pos(frames.size());
    std::vector<std::vector<double>> boundary_pos(frames.size());
    double center_slack = 2.0;
    double boundary_slack = 2.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Image& f = frames[i];
        const int w = f.width();
        const int h = f.height();
        center_slack = std::max(2.0, 0.02 * h);
        boundary_slack = std::max(2.0, 0.02 * w);
        const int band = std::max(3, static_cast<int>(std::lround(params.band_fraction * h)));
        const double center_len = params.min_line_fraction * w;
        for (const auto& s : hough_detect_region(f, 0, h / 2 - band, w, h / 2 + band, band_hough(center_len))) {
            if (near_horizontal(s, tol) && s.length() >= center_len) {
                center_pos[i].push_back(0.5 * (s.p1.y + s.p2.y));
            }
        }

        // the two boundary bands side by side, so the seam sits in the middle
        const int bw = std::max(4, static_cast<int>(std::lround(params.boundary_fraction * w)));
        Image seam(2 * bw, h);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < 2 * bw; ++c) {
                seam.set(c, r, f.at((c + w - bw) % w, r));
            }
        }
        const double boundary_len = params.min_line_fraction * h;
        for (const auto& s : hough_detect(seam, band_hough(boundary_len))) {
            if (near_vertical(s, tol) && s.length() >= boundary_len) {
                boundary_pos[i].push_back(0.5 * (s.p1.x + s.p2.x));
            }
        }
    }

    // a structure persists when frames keep a line at the same place; scene content moves
    auto persistence = [&](const std::vector<std::vector<double>>& pos, double slack) {
        std::size_t best = 0;
        for (const auto& frame : pos) {
            for (double p : frame) {
                const auto hits = std::count_if(pos.begin(), pos.end(), [&](const std::vector<double>& other) {
                    return std::any_of(other.begin(), other.end(), [&](double q) { return std::abs(q - p) <= slack; });
                });
                best = std::max(best, static_cast<std::size_t>(hits));
            }
        }
        return static_cast<double>(best) / static_cast<double>(pos.size());
    };
    result.center_persistence = persistence(center_pos, center_slack);
    result.boundary_persistence = persistence(boundary_pos, boundary_slack);
    result.is_equirect = result.center_persistence < params.persistence && result.boundary_persistence < params.persistence;
    return result;
}

namespace {

constexpr double kZnccEpsilon = 1e-4;
constexpr int kTile = 16;

// Mean regularized ZNCC between two equally sized planes, tile by tile.
// sample_b maps (x, y) in plane A coordinates to the value compared in plane B.
template <typename SampleA, typename SampleB>
double mean_tile_zncc(int w, int h, SampleA a, SampleB b)
{
    const int tw = std::max(1, w / kTile);
    const int th = std::max(1, h / kTile);
    const int sx = std::min(w, kTile);
    const int sy = std::min(h, kTile);
    double total = 0.0;
    for (int ty = 0; ty < th; ++ty) {
        for (int tx = 0; tx < tw; ++tx) {
            double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
            for (int y = ty * sy; y < ty * sy + sy; ++y) {
                for (int x = tx * sx; x < tx * sx + sx; ++x) {
                    const double va = a(x, y);
                    const double vb = b(x, y);
                    sa += va;
                    sb += vb;
                    saa += va * va;
                    sbb += vb * vb;
                    sab += va * vb;
                }
            }
            const double n = static_cast<double>(sx) * sy;
            const double ma = sa / n;
            const double mb = sb / n;
            const double va = std::max(0.0, saa / n - ma * ma);
            const double vb = std::max(0.0, sbb / n - mb * mb);
            const double cov = sab / n - ma * mb;
            total += (cov + kZnccEpsilon) / std::sqrt((va + kZnccEpsilon) * (vb + kZnccEpsilon));
        }
    }
    return total / (tw * th);
}

} // namespace

HalfSimilarity half_similarity(const Image& frame)
{
    const int w = frame.width() / 2;
    const int h = frame.height() / 2;
    if (w < 1 || h < 1) {
        return {};
    }
    const std::vector<float> lum = luminance_plane(frame);
    const int fw = frame.width();
    auto at = [&](int x, int y) { return static_cast<double>(lum[static_cast<std::size_t>(y) * fw + x]); };

    const int full_h = frame.height();
    const double dup = mean_tile_zncc(w, full_h, [&](int x, int y) { return at(x, y); },
                                      [&](int x, int y) { return at(x + w, y); });
    const double mirror = mean_tile_zncc(w, full_h, [&](int x, int y) { return at(x, y); },
                                         [&](int x, int y) { return at(fw - 1 - x, y); });
    const double tb = mean_tile_zncc(fw, h, [&](int x, int y) { return at(x, y); },
                                     [&](int x, int y) { return at(x, y + h); });
    HalfSimilarity out;
    out.lr_distance = std::min(1.0 - dup, 1.0 - mirror);
    out.tb_distance = 1.0 - tb;
    return out;
}

double static_score(const std::vector<Image>& frames, bool subtract_mean)
{
    if (frames.size() < 2) {
        throw std::invalid_argument("static_score needs at least 2 frames");
    }
    const std::size_t n = frames.front().values().size();
    std::vector<double> offset(frames.size(), 0.0);
    for (std::size_t k = 0; k < frames.size(); ++k) {
        if (frames[k].values().size() != n) {
            throw std::invalid_argument("static_score frames differ in size");
        }
        if (subtract_mean) {
            const auto& v = frames[k].values();
            offset[k] = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
        }
    }
    const double count = static_cast<double>(frames.size());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        double ss = 0.0;
        for (std::size_t k = 0; k < frames.size(); ++k) {
            const double v = frames[k].values()[i] - offset[k];
            s += v;
            ss += v * v;
        }
        const double mean = s / count;
        total += std::max(0.0, ss / count - mean * mean);
    }
    return total / static_cast<double>(n);
}

namespace {

struct Plane {
    int w = 0;
    int h = 0;
    std::vector<float> v;

    float at(int x, int y) const
    {
        x = ((x % w) + w) % w;
        y = std::clamp(y, 0, h - 1);
        return v[static_cast<std::size_t>(y) * w + x];
    }
};

Plane half_plane(const Plane& p)
{
    Plane out{p.w / 2, p.h / 2, {}};
    out.v.resize(static_cast<std::size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            out.v[static_cast<std::size_t>(y) * out.w + x] =
                0.25f * (p.at(2 * x, 2 * y) + p.at(2 * x + 1, 2 * y) + p.at(2 * x, 2 * y + 1) + p.at(2 * x + 1, 2 * y + 1));
        }
    }
    return out;
}

constexpr int kLevels = 3;
constexpr int kBlock = 16;
constexpr int kSearch = 8;

struct BlockMatch {
    int dx = 0;
    int dy = 0;
    double best = 0.0;
    double mean = 0.0;
};

BlockMatch match_block(const Plane& a, const Plane& b, int x0, int y0, int cx, int cy)
{
    // gather the block and the search window once so the inner loop is contiguous
    constexpr int kSpan = kBlock + 2 * kSearch;
    std::array<float, kBlock * kBlock> block;
    std::array<float, kSpan * kSpan> window;
    for (int y = 0; y < kBlock; ++y) {
        for (int x = 0; x < kBlock; ++x) {
            block[static_cast<std::size_t>(y * kBlock + x)] = a.at(x0 + x, y0 + y);
        }
    }
    for (int y = 0; y < kSpan; ++y) {
        for (int x = 0; x < kSpan; ++x) {
            window[static_cast<std::size_t>(y * kSpan + x)] = b.at(x0 + cx - kSearch + x, y0 + cy - kSearch + y);
        }
    }

    BlockMatch m;
    m.best = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int count = 0;
    for (int oy = 0; oy <= 2 * kSearch; ++oy) {
        for (int ox = 0; ox <= 2 * kSearch; ++ox) {
            float sad = 0.0f;
            for (int y = 0; y < kBlock; ++y) {
                const float* row = &window[static_cast<std::size_t>((oy + y) * kSpan + ox)];
                const float* ref = &block[static_cast<std::size_t>(y * kBlock)];
                for (int x = 0; x < kBlock; ++x) {
                    sad += std::abs(ref[x] - row[x]);
                }
            }
            const double mean_sad = static_cast<double>(sad) / (kBlock * kBlock);
            sum += mean_sad;
            ++count;
            const int dx = cx + ox - kSearch;
            const int dy = cy + oy - kSearch;
            // prefer the smallest displacement among ties
            const bool better = mean_sad < m.best || (mean_sad == m.best && std::abs(dx) + std::abs(dy) <
                                                                                 std::abs(m.dx) + std::abs(m.dy));
            if (better) {
                m.best = mean_sad;
                m.dx = dx;
                m.dy = dy;
            }
        }
    }
    m.mean = sum / count;
    return m;
}

} // namespace

MotionResult motion_score(const std::vector<Image>& frames, const MotionFilterParams& params)
{
    if (frames.size() < 2) {
        throw std::invalid_argument("motion_score needs at least 2 frames");
    }
    std::vector<std::array<Plane, kLevels>> pyramids(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
        pyramids[k][0] = Plane{frames[k].width(), frames[k].height(), luminance_plane(frames[k])};
        for (int l = 1; l < kLevels; ++l) {
            pyramids[k][static_cast<std::size_t>(l)] = half_plane(pyramids[k][static_cast<std::size_t>(l - 1)]);
        }
    }
    const int bw = frames.front().width() / kBlock;
    const int bh = frames.front().height() / kBlock;
    const int blocks = bw * bh;

    double magnitude = 0.0;
    int reliable = 0;
    int textured = 0;
    for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
        const auto& pa = pyramids[k];
        const auto& pb = pyramids[k + 1];
#pragma omp parallel for reduction(+ : magnitude, reliable, textured) schedule(static)
        for (int i = 0; i < blocks; ++i) {
            const int bx = (i % bw) * kBlock;
            const int by = (i / bw) * kBlock;

            double s = 0.0, ss = 0.0;
            for (int y = by; y < by + kBlock; ++y) {
                for (int x = bx; x < bx + kBlock; ++x) {
                    const double v = pa[0].at(x, y);
                    s += v;
                    ss += v * v;
                }
            }
            const double n = kBlock * kBlock;
            if (ss / n - (s / n) * (s / n) < 1e-4) {
                continue;
            }
            ++textured;

            int cx = 0;
            int cy = 0;
            BlockMatch m;
            for (int l = kLevels - 1; l >= 0; --l) {
                const int scale = 1 << l;
                // full-size block centred on the same scene point at every level
                const int x0 = (bx + kBlock / 2) / scale - kBlock / 2;
                const int y0 = (by + kBlock / 2) / scale - kBlock / 2;
                const Plane& la = pa[static_cast<std::size_t>(l)];
                const Plane& lb = pb[static_cast<std::size_t>(l)];
                m = match_block(la, lb, x0, y0, cx, cy);
                // also try the zero-motion window so a bad coarse guess cannot lock in
                if (std::abs(cx) > kSearch || std::abs(cy) > kSearch) {
                    const BlockMatch z = match_block(la, lb, x0, y0, 0, 0);
                    if (z.best <= m.best) {
                        m = z;
                    }
                }
                cx = l > 0 ? 2 * m.dx : m.dx;
                cy = l > 0 ? 2 * m.dy : m.dy;
            }
            const double confidence = m.mean > 0.0 ? 1.0 - m.best / m.mean : 0.0;
            if (confidence >= params.min_confidence) {
                ++reliable;
                magnitude += std::hypot(static_cast<double>(m.dx), static_cast<double>(m.dy));
            }
        }
    }
    MotionResult r;
    r.textured_blocks = textured;
    r.reliable_fraction = textured > 0 ? static_cast<double>(reliable) / textured : 0.0;
    r.score = reliable > 0 ? magnitude / reliable : 0.0;
    r.reliable = textured > 0 && r.reliable_fraction >= params.min_reliable_fraction;
    return r;
}

namespace {

constexpr int kBins = 32;

std::array<std::array<double, kBins>, 3> histograms(const Image& img)
{
    std::array<std::array<double, kBins>, 3> h{};
    const auto& v = img.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int bin = std::clamp(static_cast<int>(v[i] * kBins), 0, kBins - 1);
        h[i % 3][static_cast<std::size_t>(bin)] += 1.0;
    }
    const double n = static_cast<double>(v.size() / 3);
    for (auto& ch : h) {
        for (auto& b : ch) {
            b /= n;
        }
    }
    return h;
}

double intersection(const std::array<std::array<double, kBins>, 3>& a, const std::array<std::array<double, kBins>, 3>& b)
{
    double total = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < kBins; ++i) {
            total += std::min(a[c][i], b[c][i]);
        }
    }
    return total / 3.0;
}

} // namespace

double histogram_intersection(const Image& a, const Image& b)
{
    return intersection(histograms(a), histograms(b));
}

std::vector<int> cut_detect(const std::vector<Image>& frames, double threshold)
{
    if (frames.size() < 2) {
        throw std::invalid_argument("cut_detect needs at least 2 frames");
    }
    std::vector<std::array<std::array<double, kBins>, 3>> h;
    h.reserve(frames.size());
    for (const auto& f : frames) {
        h.push_back(histograms(f));
    }
    const int n = static_cast<int>(frames.size());
    auto sim = [&](int i, int j) { return intersection(h[static_cast<std::size_t>(i)], h[static_cast<std::size_t>(j)]); };
    std::vector<int> cuts;
    for (int k = 1; k < n; ++k) {
        if (sim(k - 1, k) >= threshold) {
            continue;
        }
        // frame k alone differs: it agrees with neither side but they agree with each other
        const bool k_is_outlier = k + 1 < n && sim(k - 1, k + 1) >= threshold;
        // frame k-1 alone differed
        const bool prev_is_outlier = k >= 2 && sim(k - 2, k) >= threshold;
        if (!k_is_outlier && !prev_is_outlier) {
            cuts.push_back(k);
        }
    }
    return cuts;
}

double blackness(const Image& frame)
{
    const std::vector<float> lum = luminance_plane(frame);
    const auto dark = std::count_if(lum.begin(), lum.end(), [](float v) { return v < 0.02f; });
    return static_cast<double>(dark) / static_cast<double>(lum.size());
}

double spatial_variance(const Image& frame)
{
    const std::vector<float> lum = luminance_plane(frame);
    double s = 0.0;
    double ss = 0.0;
    for (float v : lum) {
        s += v;
        ss += static_cast<double>(v) * v;
    }
    const double n = static_cast<double>(lum.size());
    return std::max(0.0, ss / n - (s / n) * (s / n));
}

std::vector<FrameRange> split_clips(int frame_count, double fps, double clip_seconds, const std::vector<int>& cuts)
{
    if (!(fps > 0.0) || !std::isfinite(fps)) {
        throw std::invalid_argument("split_clips needs a positive fps");
    }
    if (!(clip_seconds > 0.0)) {
        throw std::invalid_argument("split_clips needs a positive clip length");
    }
    const int length = static_cast<int>(std::lround(clip_seconds * fps));
    std::vector<FrameRange> out;
    if (length < 1) {
        return out;
    }
    std::vector<int> sorted = cuts;
    std::sort(sorted.begin(), sorted.end());
    int start = 0;
    while (start + length <= frame_count) {
        const auto inside = std::upper_bound(sorted.begin(), sorted.end(), start);
        if (inside != sorted.end() && *inside < start + length) {
            start = *inside;
            continue;
        }
        out.push_back({start, start + length});
        start += length;
    }
    return out;
}

bool ClipRecord::accepted() const
{
    return error.empty() && std::all_of(verdicts.begin(), verdicts.end(), [](const FilterVerdict& v) { return v.pass; });
}

std::string ClipRecord::first_failure() const
{
    if (!error.empty()) {
        return "read";
    }
    for (const auto& v : verdicts) {
        if (!v.pass) {
            return v.filter;
        }
    }
    return {};
}

std::vector<int> sample_indices(int frame_count, double fps, double sample_fps)
{
    if (!(fps > 0.0) || !(sample_fps > 0.0)) {
        throw std::invalid_argument("sample_indices needs positive rates");
    }
    std::vector<int> out;
    const double step = fps / sample_fps;
    for (int i = 0;; ++i) {
        const auto k = static_cast<int>(std::floor(i * step + 1e-9));
        if (k >= frame_count) {
            break;
        }
        if (out.empty() || out.back() != k) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<ClipRecord> filter_video(const VideoInput& video, const FilterConfig& config)
{
    config.validate();
    ClipRecord base;
    base.source = video.id;
    base.fps = video.fps;
    base.likes = video.likes;
    if (!video.load_error.empty() || video.frames.empty() || !(video.fps > 0.0)) {
        base.error = !video.load_error.empty() ? video.load_error
                     : video.frames.empty()    ? "video has no frames"
                                               : "video fps must be positive";
        return {base};
    }
    for (const auto& f : video.frames) {
        if (f.width() != video.frames.front().width() || f.height() != video.frames.front().height()) {
            base.error = "frames differ in size";
            return {base};
        }
    }

    auto& verdicts = base.verdicts;
    if (config.likes.enabled) {
        const bool pass = !video.likes || *video.likes > config.likes.min_likes;
        verdicts.push_back({"likes", pass, video.likes ? static_cast<double>(*video.likes) : -1.0});
    }

    const std::vector<int> sampled = sample_indices(static_cast<int>(video.frames.size()), video.fps, config.sample_fps);
    std::vector<Image> coarse;
    coarse.reserve(sampled.size());
    for (int k : sampled) {
        coarse.push_back(config.coarse_downsample > 1 ? downsample(video.frames[static_cast<std::size_t>(k)], config.coarse_downsample)
                                                      : video.frames[static_cast<std::size_t>(k)]);
    }

    if (config.format.enabled) {
        const auto f = format_check(coarse, config.format);
        verdicts.push_back({"format", f.is_equirect, std::max(f.center_persistence, f.boundary_persistence)});
    }
    if (config.half_similarity.enabled) {
        double lr = 0.0;
        double tb = 0.0;
        for (const auto& f : coarse) {
            const auto hs = half_similarity(f);
            lr += hs.lr_distance;
            tb += hs.tb_distance;
        }
        const double score = std::min(lr, tb) / static_cast<double>(coarse.size());
        verdicts.push_back({"half_similarity", score >= config.half_similarity.threshold, score});
    }
    if (config.static_check.enabled) {
        double score = 0.0;
        if (coarse.size() >= 2) {
            // random sampling intervals, reproducible per video
            SplitMix64 rng(config.seed ^ fnv1a(video.id));
            std::vector<std::size_t> order(coarse.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            for (std::size_t i = order.size() - 1; i > 0; --i) {
                std::swap(order[i], order[static_cast<std::size_t>(rng.next() % (i + 1))]);
            }
            const std::size_t take = std::min(order.size(), static_cast<std::size_t>(config.static_check.samples));
            std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
            std::vector<Image> picked;
            for (std::size_t i = 0; i < take; ++i) {
                picked.push_back(coarse[order[i]]);
            }
            score = static_score(picked, config.static_check.subtract_mean);
        }
        verdicts.push_back({"static", score >= config.static_check.threshold, score});
    }

    std::vector<int> cuts;
    if (config.cut_aware_split && video.frames.size() >= 2) {
        std::vector<Image> all;
        all.reserve(video.frames.size());
        for (const auto& f : video.frames) {
            all.push_back(config.coarse_downsample > 1 ? downsample(f, config.coarse_downsample) : f);
        }
        cuts = cut_detect(all, config.cut.threshold);
    }
    const auto ranges = split_clips(static_cast<int>(video.frames.size()), video.fps, config.clip_seconds, cuts);
    if (ranges.empty()) {
        ClipRecord r = base;
        r.range = {0, static_cast<int>(video.frames.size())};
        r.verdicts.push_back({"split", false, static_cast<double>(video.frames.size()) / video.fps});
        return {r};
    }

    std::vector<ClipRecord> out;
    for (const auto& range : ranges) {
        ClipRecord r = base;
        r.range = range;
        const std::vector<Image> clip(video.frames.begin() + range.start, video.frames.begin() + range.end);
        if (config.motion.enabled) {
            double score = 0.0;
            bool pass = false;
            if (clip.size() >= 2) {
                const auto m = motion_score(clip, config.motion);
                score = m.score;
                pass = m.reliable && m.score >= config.motion.threshold;
            }
            r.verdicts.push_back({"motion", pass, score});
        }
        if (config.cut.enabled) {
            const auto c = clip.size() >= 2 ? cut_detect(clip, config.cut.threshold) : std::vector<int>{};
            r.verdicts.push_back({"cut", c.empty(), static_cast<double>(c.size())});
        }
        if (config.blackness.enabled) {
            double s = 0.0;
            for (const auto& f : clip) {
                s += blackness(f);
            }
            s /= static_cast<double>(clip.size());
            r.verdicts.push_back({"blackness", s <= config.blackness.threshold, s});
        }
        if (config.variance.enabled) {
            double s = 0.0;
            for (const auto& f : clip) {
                s += spatial_variance(f);
            }
            s /= static_cast<double>(clip.size());
            r.verdicts.push_back({"variance", s >= config.variance.threshold, s});
        }
        out.push_back(std::move(r));
    }
    return out;
}

PipelineResult run_pipeline(const std::vector<VideoInput>& videos, const FilterConfig& config)
{
    config.validate();
    std::vector<std::vector<ClipRecord>> per_video(videos.size());
    const int n = static_cast<int>(videos.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        per_video[static_cast<std::size_t>(i)] = filter_video(videos[static_cast<std::size_t>(i)], config);
    }

    PipelineResult result;
    result.summary.videos = n;
    result.summary.rejected_by.emplace_back("read", 0);
    for (const char* name : kFilterOrder) {
        result.summary.rejected_by.emplace_back(name, 0);
    }
    for (auto& clips : per_video) {
        for (auto& c : clips) {
            ++result.summary.clips;
            const std::string failure = c.first_failure();
            if (failure.empty()) {
                ++result.summary.accepted;
            } else {
                for (auto& [name, count] : result.summary.rejected_by) {
                    if (name == failure) {
                        ++count;
                    }
                }
            }
            result.clips.push_back(std::move(c));
        }
    }
    return result;
}

} // namespace pano
