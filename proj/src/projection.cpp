#include "pano/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pano {

namespace {

void check_projection_args(const PerspectiveFrame& frame, int equirect_height)
{
    if (equirect_height < 64) {
        throw std::invalid_argument("equirectangular height must be at least 64, got " +
                                    std::to_string(equirect_height));
    }
    if (frame.width() < 8 || frame.height() < 8) {
        throw std::invalid_argument("perspective frame must be at least 8x8");
    }
}

// Pinhole frustum test for a camera-frame ray; writes the continuous source pixel.
inline bool camera_ray_to_pixel(const Vec3& cam, double tan_h, double tan_v, int width, int height,
                                double& u, double& v)
{
    if (!(cam.x > 0.0)) {
        return false;
    }
    const double xn = cam.y / (cam.x * tan_h);
    const double yn = -cam.z / (cam.x * tan_v);
    if (std::abs(xn) > 1.0 || std::abs(yn) > 1.0) {
        return false;
    }
    u = (xn + 1.0) * width / 2.0;
    v = (yn + 1.0) * height / 2.0;
    return true;
}

inline void store(Image& img, Mask& mask, int col, int row, const Rgb& value)
{
    img.set(col, row, value);
    mask.set(col, row, true);
}

} // namespace

EquirectFrame project_to_equirect(const PerspectiveFrame& frame, const EulerPose& pose,
                                  const FieldOfView& fov, int equirect_height)
{
    check_projection_args(frame, equirect_height);
    const int he = equirect_height;
    const int we = 2 * he;
    Image img(we, he);
    Mask mask(we, he, false);

    const Mat3 world_to_cam = rotation_from_pose(pose).transposed();
    const double tan_h = std::tan(fov.horizontal / 2.0);
    const double tan_v = std::tan(fov.vertical / 2.0);

    std::vector<double> cos_theta(static_cast<std::size_t>(we));
    std::vector<double> sin_theta(static_cast<std::size_t>(we));
    for (int c = 0; c < we; ++c) {
        const double theta = static_cast<double>(c) * kTwoPi / we - kPi;
        cos_theta[static_cast<std::size_t>(c)] = std::cos(theta);
        sin_theta[static_cast<std::size_t>(c)] = std::sin(theta);
    }

    const Image& src = frame.image();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < he; ++r) {
        const double phi = kPi / 2.0 - static_cast<double>(r) * kPi / he;
        const double cp = std::cos(phi);
        const double sp = std::sin(phi);
        for (int c = 0; c < we; ++c) {
            const Vec3 dir{cp * cos_theta[static_cast<std::size_t>(c)], cp * sin_theta[static_cast<std::size_t>(c)], sp};
            double u, v;
            if (camera_ray_to_pixel(world_to_cam * dir, tan_h, tan_v, frame.width(), frame.height(), u, v)) {
                store(img, mask, c, r, sample_bilinear_clamped(src, u, v));
            }
        }
    }
    return EquirectFrame(std::move(img), std::move(mask));
}

PerspectiveFrame unwrap_to_perspective(const EquirectFrame& pano, const EulerPose& pose,
                                       const FieldOfView& fov, int width, int height)
{
    Image out(width, height);
    const Mat3 cam_to_world = rotation_from_pose(pose);
    const double tan_h = std::tan(fov.horizontal / 2.0);
    const double tan_v = std::tan(fov.vertical / 2.0);
    const int we = pano.width();
    const int he = pano.height();

    std::vector<double> right(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) {
        right[static_cast<std::size_t>(i)] = (2.0 * i / width - 1.0) * tan_h;
    }

#pragma omp parallel for schedule(static)
    for (int j = 0; j < height; ++j) {
        const double up = -(2.0 * j / height - 1.0) * tan_v;
        for (int i = 0; i < width; ++i) {
            const Vec3 ray = Vec3{1.0, right[static_cast<std::size_t>(i)], up}.normalized();
            const EquirectCoord e = spherical_to_equirect(dir_to_spherical(cam_to_world * ray), we, he);
            out.set(i, j, sample_bilinear_wrapped(pano.image(), e.u, e.v));
        }
    }
    return PerspectiveFrame(std::move(out));
}

namespace {

EquirectClip project_all(const PerspectiveClip& clip, const std::vector<EulerPose>& poses,
                         const FieldOfView& fov, int equirect_height)
{
    EquirectClip out;
    out.fps = clip.fps;
    out.frames.resize(clip.size());
    // frames are independent; the per-frame kernel is itself parallel
    for (std::size_t k = 0; k < clip.size(); ++k) {
        out.frames[k] = project_to_equirect(clip.frames[k], poses[k], fov, equirect_height);
    }
    return out;
}

void check_lengths(const PerspectiveClip& clip, const Trajectory& traj)
{
    clip.validate();
    if (traj.size() != clip.size()) {
        throw std::invalid_argument("trajectory has " + std::to_string(traj.size()) + " poses but clip has " +
                                    std::to_string(clip.size()) + " frames");
    }
}

} // namespace

EquirectClip align_clip(const PerspectiveClip& clip, const Trajectory& traj, int equirect_height)
{
    check_lengths(clip, traj);
    std::vector<EulerPose> relative;
    relative.reserve(traj.size());
    for (const auto& p : traj.poses) {
        relative.push_back(relative_pose(p, traj.poses.front()).pose);
    }
    return project_all(clip, relative, traj.fov, equirect_height);
}

EquirectClip project_clip(const PerspectiveClip& clip, const Trajectory& traj, int equirect_height)
{
    check_lengths(clip, traj);
    return project_all(clip, traj.poses, traj.fov, equirect_height);
}

WindowPlan plan_windows(int total_frames, int window, int context)
{
    if (!(context > 0 && context < window && window <= total_frames)) {
        throw std::invalid_argument("window plan requires 0 < S < T <= total, got total=" +
                                    std::to_string(total_frames) + " T=" + std::to_string(window) +
                                    " S=" + std::to_string(context));
    }
    WindowPlan plan;
    plan.window = window;
    plan.context = context;
    const int stride = window - context;
    int start = 0;
    plan.windows.push_back({0, window});
    while (plan.windows.back().end < total_frames) {
        start += stride;
        if (start + window > total_frames) {
            plan.windows.push_back({total_frames - window, total_frames});
            plan.aligned_tail = true;
            break;
        }
        plan.windows.push_back({start, start + window});
    }
    return plan;
}

namespace reference {

EquirectFrame project_to_equirect(const PerspectiveFrame& frame, const EulerPose& pose,
                                  const FieldOfView& fov, int equirect_height)
{
    check_projection_args(frame, equirect_height);
    const int he = equirect_height;
    const int we = 2 * he;
    Image img(we, he);
    Mask mask(we, he, false);
    const Mat3 world_to_cam = rotation_from_pose(pose).transposed();

    for (int r = 0; r < he; ++r) {
        for (int c = 0; c < we; ++c) {
            const Direction3 dir = equirect_to_dir({static_cast<double>(c), static_cast<double>(r)}, we, he);
            double u, v;
            if (camera_ray_to_pixel(world_to_cam * dir, std::tan(fov.horizontal / 2.0), std::tan(fov.vertical / 2.0),
                                    frame.width(), frame.height(), u, v)) {
                store(img, mask, c, r, sample_bilinear_clamped(frame.image(), u, v));
            }
        }
    }
    return EquirectFrame(std::move(img), std::move(mask));
}

PerspectiveFrame unwrap_to_perspective(const EquirectFrame& pano, const EulerPose& pose,
                                       const FieldOfView& fov, int width, int height)
{
    Image out(width, height);
    const Mat3 cam_to_world = rotation_from_pose(pose);
    for (int j = 0; j < height; ++j) {
        for (int i = 0; i < width; ++i) {
            const Direction3 ray = ndc_to_camera_ray(pixel_to_ndc(i, j, width, height), fov);
            const EquirectCoord e =
                spherical_to_equirect(dir_to_spherical(cam_to_world * ray), pano.width(), pano.height());
            out.set(i, j, sample_bilinear_wrapped(pano, e));
        }
    }
    return PerspectiveFrame(std::move(out));
}

} // namespace reference

} // namespace pano
