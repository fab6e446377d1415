#pragma once

// Data-curation cascade for 360 video: coarse per-video filters, clip splitting and
// fine per-clip filters. Every filter is classical and deterministic.

#include "pano/hough.hpp"
#include "pano/raster.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pano {

struct FormatParams {
    bool enabled = true;
    double band_fraction = 0.1;      ///< half-height of the central band, fraction of H
    double boundary_fraction = 0.25; ///< width of each boundary band, fraction of W
    double min_line_fraction = 0.6;  ///< detected line length over band span
    double persistence = 0.6;        ///< fraction of sampled frames needed to flag
};

struct LikesParams {
    bool enabled = true;
    int min_likes = 50; ///< passes when likes > min_likes
};

struct ThresholdParams {
    bool enabled = true;
    double threshold = 0.0;
};

struct StaticParams {
    bool enabled = true;
    double threshold = 1e-4;
    bool subtract_mean = false; ///< remove per-frame global brightness first
    int samples = 8;
};

struct MotionFilterParams {
    bool enabled = true;
    double threshold = 0.5;          ///< px/frame
    double min_confidence = 0.5;     ///< per-block match confidence
    double min_reliable_fraction = 0.5;
};

struct FilterConfig {
    double clip_seconds = 10.0;
    double sample_fps = 1.0;
    int coarse_downsample = 4;
    bool cut_aware_split = false;
    std::uint64_t seed = 0;

    LikesParams likes;
    FormatParams format;
    ThresholdParams half_similarity{true, 0.15};
    StaticParams static_check;
    MotionFilterParams motion;
    ThresholdParams cut{true, 0.6};
    ThresholdParams blackness{true, 0.4};
    ThresholdParams variance{true, 1e-3};
    bool text_enabled = false; ///< placeholder; no text detector is shipped

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Filter names in pipeline order.
inline constexpr const char* kFilterOrder[] = {"likes", "format", "half_similarity", "static", "split",
                                               "motion", "cut", "blackness", "variance"};

struct FormatResult {
    bool is_equirect = true;
    double center_persistence = 0.0;   ///< largest fraction of frames sharing a central horizontal line
    double boundary_persistence = 0.0; ///< largest fraction of frames sharing a vertical line near the seam
};

FormatResult format_check(const std::vector<Image>& frames, const FormatParams& params = {});

struct HalfSimilarity {
    double lr_distance = 1.0; ///< min over duplicated and mirrored right half
    double tb_distance = 1.0;
};

/// 1 - mean zero-normalized cross-correlation over 16x16 tiles of the two halves.
/// Expects a frame already reduced by the coarse downsampling factor.
HalfSimilarity half_similarity(const Image& frame);

/// Mean per-pixel temporal variance over all channels.
double static_score(const std::vector<Image>& frames, bool subtract_mean = false);

struct MotionResult {
    double score = 0.0;             ///< mean displacement magnitude over reliable blocks, px/frame
    double reliable_fraction = 0.0; ///< reliable blocks over textured blocks
    int textured_blocks = 0;
    bool reliable = false;
};

/// Three-level coarse-to-fine block matching with 16x16 blocks and +-8 px search per
/// level. Columns wrap (equirectangular input).
MotionResult motion_score(const std::vector<Image>& frames, const MotionFilterParams& params = {});

/// Mean of per-channel 32-bin histogram intersections, in [0, 1].
double histogram_intersection(const Image& a, const Image& b);

/// Indices k where a new shot starts at frame k. A single outlier frame is not a cut.
std::vector<int> cut_detect(const std::vector<Image>& frames, double threshold = 0.6);

/// Fraction of pixels with luminance < 0.02.
double blackness(const Image& frame);

/// Spatial variance of the luminance plane.
double spatial_variance(const Image& frame);

struct FrameRange {
    int start = 0; ///< inclusive
    int end = 0;   ///< exclusive

    friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

/// Contiguous clips of round(clip_seconds * fps) frames; the remainder is dropped.
/// With cuts given, a clip that would contain a cut restarts at the cut.
std::vector<FrameRange> split_clips(int frame_count, double fps, double clip_seconds,
                                    const std::vector<int>& cuts = {});

struct FilterVerdict {
    std::string filter;
    bool pass = true;
    double score = 0.0;

    friend bool operator==(const FilterVerdict&, const FilterVerdict&) = default;
};

struct ClipRecord {
    std::string source;
    FrameRange range;
    double fps = 0.0;
    std::optional<int> likes;
    std::vector<FilterVerdict> verdicts; ///< pipeline order
    std::string error;                   ///< nonempty when the video could not be read

    bool accepted() const;
    /// Name of the first failing filter, "read" for unreadable input, empty when accepted.
    std::string first_failure() const;

    friend bool operator==(const ClipRecord&, const ClipRecord&) = default;
};

struct VideoInput {
    std::string id;
    double fps = 0.0;
    std::optional<int> likes;
    std::vector<Image> frames;
    std::string load_error;
};

struct PipelineSummary {
    int videos = 0;
    int clips = 0;
    int accepted = 0;
    std::vector<std::pair<std::string, int>> rejected_by; ///< first failure counts, pipeline order

    friend bool operator==(const PipelineSummary&, const PipelineSummary&) = default;
};

struct PipelineResult {
    std::vector<ClipRecord> clips;
    PipelineSummary summary;
};

/// Indices sampled at `sample_fps` from a video at `fps`.
std::vector<int> sample_indices(int frame_count, double fps, double sample_fps);

/// Video-level verdicts followed by clip-level verdicts for each clip. Every enabled
/// filter is evaluated on every clip so all scores are reported. The likes verdict
/// scores -1 when the video has no like-count. A video shorter than one clip yields a
/// single record with a failing "split" verdict.
std::vector<ClipRecord> filter_video(const VideoInput& video, const FilterConfig& config);

PipelineResult run_pipeline(const std::vector<VideoInput>& videos, const FilterConfig& config);

} // namespace pano
