#include "pano/metrics.hpp"

#include "pano/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pano {

namespace {

struct SquaredError {
    double sum = 0.0;
    std::size_t samples = 0;
};

SquaredError masked_squared_error(const Image& gt, const Image& pred, const Mask& mask)
{
    if (gt.width() != pred.width() || gt.height() != pred.height() || gt.width() != mask.width() ||
        gt.height() != mask.height()) {
        throw std::invalid_argument("masked_psnr: image and mask sizes differ");
    }
    SquaredError err;
    const int h = gt.height();
    const int w = gt.width();
    double sum = 0.0;
    std::size_t samples = 0;
#pragma omp parallel for reduction(+ : sum, samples) schedule(static)
    for (int r = 0; r < h; ++r) {
        const float* a = gt.row_ptr(r);
        const float* b = pred.row_ptr(r);
        for (int c = 0; c < w; ++c) {
            if (!mask.at(c, r)) {
                continue;
            }
            for (int ch = 0; ch < 3; ++ch) {
                const double d = static_cast<double>(a[c * 3 + ch]) - static_cast<double>(b[c * 3 + ch]);
                sum += d * d;
            }
            samples += 3;
        }
    }
    err.sum = sum;
    err.samples = samples;
    return err;
}

double psnr_from(const SquaredError& err)
{
    if (err.samples == 0) {
        throw std::invalid_argument("masked_psnr: mask is empty");
    }
    const double mse = err.sum / static_cast<double>(err.samples);
    if (mse <= 0.0) {
        return kPsnrCap;
    }
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

} // namespace

double masked_psnr(const Image& gt, const Image& pred, const Mask& mask)
{
    return psnr_from(masked_squared_error(gt, pred, mask));
}

double masked_psnr(const EquirectClip& gt, const EquirectClip& pred)
{
    if (gt.size() != pred.size()) {
        throw std::invalid_argument("masked_psnr: clips differ in length");
    }
    SquaredError total;
    for (std::size_t k = 0; k < gt.size(); ++k) {
        const auto e = masked_squared_error(gt.frames[k].image(), pred.frames[k].image(), gt.frames[k].mask());
        total.sum += e.sum;
        total.samples += e.samples;
    }
    return psnr_from(total);
}

LineMatchReport match_lines(const std::vector<LineSegment>& gt, const std::vector<LineSegment>& detected,
                            int width, int height, double min_score)
{
    LineMatchReport report;
    report.gt_count = static_cast<int>(gt.size());
    report.detected_count = static_cast<int>(detected.size());

    ScoreMatrix scores(report.gt_count, report.detected_count);
    for (int i = 0; i < report.gt_count; ++i) {
        for (int j = 0; j < report.detected_count; ++j) {
            const double s = ea_score(gt[static_cast<std::size_t>(i)], detected[static_cast<std::size_t>(j)], width, height);
            scores(i, j) = s >= min_score ? s : 0.0;
        }
    }
    const std::vector<int> assignment = max_score_assignment(scores);
    for (int i = 0; i < report.gt_count; ++i) {
        const int j = assignment[static_cast<std::size_t>(i)];
        if (j < 0 || scores(i, j) <= 0.0) {
            continue;
        }
        report.pairs.push_back({i, j, scores(i, j)});
        report.total_score += scores(i, j);
    }
    const int matched = static_cast<int>(report.pairs.size());
    report.unmatched_gt = report.gt_count - matched;
    report.unmatched_detected = report.detected_count - matched;
    report.mean_score = matched > 0 ? report.total_score / matched : 0.0;
    report.penalized_mean = report.gt_count > 0 ? report.total_score / report.gt_count : 0.0;
    return report;
}

std::vector<std::optional<LineSegment>> transfer_annotations(const std::vector<LineSegment>& annotations,
                                                             int width, int height, const FieldOfView& fov,
                                                             const EulerPose& from, const EulerPose& to,
                                                             double min_length)
{
    const Intrinsics k = Intrinsics::from_fov(width, height, fov);
    const Mat3 h = rotation_homography(k, from, k, to);

    // Forward component, in camera A, of the ray through pixel (x, y) of view B.
    const Mat3 optical_to_pose{{0, 0, 1, 1, 0, 0, 0, -1, 0}};
    const Mat3 b_pixel_to_a = rotation_from_pose(from).transposed() * rotation_from_pose(to) * optical_to_pose * k.inverse();
    const HalfPlane in_front_of_a{b_pixel_to_a(0, 0), b_pixel_to_a(0, 1), b_pixel_to_a(0, 2)};
    const Mat3 hinv = h.inverse();

    std::vector<std::optional<LineSegment>> out;
    out.reserve(annotations.size());
    for (const auto& seg : annotations) {
        const HomogeneousLine la = HomogeneousLine::through(seg.p1, seg.p2);
        const HomogeneousLine lb = transfer_line(la, h);
        // keep the part of the line whose preimage lies between the annotated endpoints
        const double dx = seg.p2.x - seg.p1.x;
        const double dy = seg.p2.y - seg.p1.y;
        auto between = [&](double sx, double sy, double sign) {
            HalfPlane hp;
            hp.a = sign * (dx * (hinv(0, 0) - sx * hinv(2, 0)) + dy * (hinv(1, 0) - sy * hinv(2, 0)));
            hp.b = sign * (dx * (hinv(0, 1) - sx * hinv(2, 1)) + dy * (hinv(1, 1) - sy * hinv(2, 1)));
            hp.c = sign * (dx * (hinv(0, 2) - sx * hinv(2, 2)) + dy * (hinv(1, 2) - sy * hinv(2, 2)));
            return hp;
        };
        const HalfPlane planes[] = {in_front_of_a, between(seg.p1.x, seg.p1.y, 1.0), between(seg.p2.x, seg.p2.y, -1.0)};
        auto clipped = clip_line(lb, width, height, planes);
        if (clipped && clipped->length() >= min_length) {
            out.push_back(clipped);
        } else {
            out.push_back(std::nullopt);
        }
    }
    return out;
}

LineConsistencyReport line_consistency(const LineConsistencyInput& input, const EquirectClip& pano)
{
    if (input.width < 8 || input.height < 8) {
        throw std::invalid_argument("line_consistency: view must be at least 8x8");
    }
    if (pano.frames.empty()) {
        throw std::invalid_argument("line_consistency: panorama clip is empty");
    }
    for (const auto& a : input.annotations) {
        if (a.degenerate()) {
            throw std::invalid_argument("line_consistency: degenerate annotation segment");
        }
    }

    LineConsistencyReport report;
    double total = 0.0;
    for (const auto& neighbor : input.neighbor_poses) {
        const auto transferred = transfer_annotations(input.annotations, input.width, input.height, input.fov,
                                                      input.input_pose, neighbor, input.min_transfer_length);
        std::vector<LineSegment> gt;
        int dropped = 0;
        for (const auto& t : transferred) {
            if (t) {
                gt.push_back(*t);
            } else {
                ++dropped;
            }
        }
        for (const auto& frame : pano.frames) {
            const PerspectiveFrame view = unwrap_to_perspective(frame, neighbor, input.fov, input.width, input.height);
            const auto detected = hough_detect(view, input.hough);
            const auto m = match_lines(gt, detected, input.width, input.height, input.min_score);
            ++report.evaluations;
            report.transferred += static_cast<int>(gt.size());
            report.dropped_transfers += dropped;
            report.matched += static_cast<int>(m.pairs.size());
            report.detected += static_cast<int>(detected.size());
            total += m.total_score;
        }
    }
    report.mean_score = report.matched > 0 ? total / report.matched : 0.0;
    report.penalized_mean = report.transferred > 0 ? total / report.transferred : 0.0;
    return report;
}

SweepResult yaw_sweep_unwrap(const EquirectClip& pano, double from_yaw, double to_yaw, const FieldOfView& fov,
                             int width, int height, double pitch)
{
    if (pano.frames.empty()) {
        throw std::invalid_argument("yaw sweep needs a nonempty clip");
    }
    SweepResult out;
    out.views.fps = pano.fps;
    out.trajectory.fov = fov;
    const std::size_t t = pano.size();
    for (std::size_t k = 0; k < t; ++k) {
        const double frac = t > 1 ? static_cast<double>(k) / static_cast<double>(t - 1) : 0.0;
        const EulerPose pose(0.0, pitch, from_yaw + (to_yaw - from_yaw) * frac);
        out.trajectory.poses.push_back(pose);
        out.views.frames.push_back(unwrap_to_perspective(pano.frames[k], pose, fov, width, height));
    }
    return out;
}

} // namespace pano
