#pragma once

#include "pano/geometry.hpp"
#include "pano/raster.hpp"

#include <cstddef>
#include <vector>

namespace pano {

/// Per-frame camera poses with a clip-wide field of view.
struct Trajectory {
    std::vector<EulerPose> poses;
    FieldOfView fov;

    std::size_t size() const { return poses.size(); }
};

/// Default equirectangular height (1024x512 maps).
inline constexpr int kDefaultEquirectHeight = 512;

/// Projects a perspective frame onto a masked equirectangular map. Unobserved
/// pixels are black with mask = false. Requires H_eq >= 64. OpenMP-parallel over rows.
EquirectFrame project_to_equirect(const PerspectiveFrame& frame, const EulerPose& pose,
                                  const FieldOfView& fov, int equirect_height);

/// Renders a W x H perspective view of an equirectangular frame.
PerspectiveFrame unwrap_to_perspective(const EquirectFrame& pano, const EulerPose& pose,
                                       const FieldOfView& fov, int width, int height);

/// Projects every frame at its pose relative to frame 0, so frame 0 lands at the map centre.
EquirectClip align_clip(const PerspectiveClip& clip, const Trajectory& traj, int equirect_height);

/// Projects every frame at its absolute trajectory pose.
EquirectClip project_clip(const PerspectiveClip& clip, const Trajectory& traj, int equirect_height);

struct FrameWindow {
    int start = 0; ///< inclusive
    int end = 0;   ///< exclusive

    friend bool operator==(const FrameWindow&, const FrameWindow&) = default;
};

struct WindowPlan {
    std::vector<FrameWindow> windows;
    int window = 0;  ///< T
    int context = 0; ///< S
    /// True when the last window was pulled back to end at the clip end; it then
    /// overlaps its predecessor by more than S frames.
    bool aligned_tail = false;
};

/// Overlapping windows of length T advancing by T - S. Requires 0 < S < T <= total.
WindowPlan plan_windows(int total_frames, int window, int context);

namespace reference {

// Single-threaded versions built directly on the geometry primitives. Kept for
// testing and benchmarking; outputs are bitwise identical to the parallel kernels.

EquirectFrame project_to_equirect(const PerspectiveFrame& frame, const EulerPose& pose,
                                  const FieldOfView& fov, int equirect_height);

PerspectiveFrame unwrap_to_perspective(const EquirectFrame& pano, const EulerPose& pose,
                                       const FieldOfView& fov, int width, int height);

} // namespace reference

} // namespace pano
