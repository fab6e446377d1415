#pragma once

#include "pano/hough.hpp"
#include "pano/lines.hpp"
#include "pano/projection.hpp"
#include "pano/raster.hpp"

#include <vector>

namespace pano {

inline constexpr double kPsnrCap = 100.0;

/// PSNR in dB over masked pixels, all three channels, values in [0, 1].
/// Returns kPsnrCap when the masked error is zero. Throws on empty masks or size mismatch.
double masked_psnr(const Image& gt, const Image& pred, const Mask& mask);

/// PSNR pooled over all frames of two clips, each frame restricted to the first clip's masks.
double masked_psnr(const EquirectClip& gt, const EquirectClip& pred);

struct LineMatch {
    int gt = -1;
    int detected = -1;
    double score = 0.0;
};

struct LineMatchReport {
    std::vector<LineMatch> pairs;
    int gt_count = 0;
    int detected_count = 0;
    int unmatched_gt = 0;
    int unmatched_detected = 0;
    double total_score = 0.0;
    double mean_score = 0.0;      ///< over kept pairs only; 0 when none
    double penalized_mean = 0.0;  ///< unmatched ground truth counts as 0
};

inline constexpr double kDefaultMinMatchScore = 0.3;

/// Optimal one-to-one matching by EA score. Scores below `min_score` are worth
/// nothing to the assignment and such pairs are dropped from the report.
LineMatchReport match_lines(const std::vector<LineSegment>& gt, const std::vector<LineSegment>& detected,
                            int width, int height, double min_score = kDefaultMinMatchScore);

struct LineConsistencyInput {
    std::vector<LineSegment> annotations; ///< in the input view's pixel frame
    int width = 0;                        ///< input (and neighbour) view size
    int height = 0;
    EulerPose input_pose;
    FieldOfView fov;
    std::vector<EulerPose> neighbor_poses;
    HoughParams hough;
    double min_score = kDefaultMinMatchScore;
    double min_transfer_length = 10.0; ///< transferred lines shorter than this are dropped
};

struct LineConsistencyReport {
    double mean_score = 0.0;     ///< pooled over matched pairs of every (frame, neighbour)
    double penalized_mean = 0.0; ///< pooled over every transferred ground-truth line
    int evaluations = 0;         ///< (frame, neighbour) pairs
    int transferred = 0;
    int dropped_transfers = 0;   ///< behind the input camera or outside the neighbour view
    int matched = 0;
    int detected = 0;
};

/// Ground-truth segments in view B for annotations made in view A. Transferred lines
/// are clipped to the image, to the image of the annotated segment and to the half
/// of view B that lies in front of camera A.
/// Returns one entry per annotation, nullopt when the transfer is degenerate.
std::vector<std::optional<LineSegment>> transfer_annotations(const std::vector<LineSegment>& annotations,
                                                             int width, int height, const FieldOfView& fov,
                                                             const EulerPose& from, const EulerPose& to,
                                                             double min_length);

LineConsistencyReport line_consistency(const LineConsistencyInput& input, const EquirectClip& pano);

struct SweepResult {
    PerspectiveClip views;
    Trajectory trajectory;
};

/// Frame k is unwrapped at yaw = from + (to - from) * k / (T - 1), with fixed pitch.
SweepResult yaw_sweep_unwrap(const EquirectClip& pano, double from_yaw, double to_yaw, const FieldOfView& fov,
                             int width, int height, double pitch = 0.0);

} // namespace pano
