#pragma once

// Synthetic camera trajectories: per-axis white noise, a shared-frequency sinusoid,
// linear drift on pitch and yaw, and a constant yaw offset.

#include "pano/geometry.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace pano {

struct MotionParams {
    double omega = 0.0; ///< rad/frame
    double tau_roll = 0.0;
    double tau_pitch = 0.0;
    double tau_yaw = 0.0;
    double amp_roll = 0.0;
    double amp_pitch = 0.0;
    double amp_yaw = 0.0;
    double noise_roll = 0.0; ///< std dev, rad
    double noise_pitch = 0.0;
    double noise_yaw = 0.0;
    double drift_pitch = 0.0; ///< rad/frame
    double drift_yaw = 0.0;
    double yaw_offset = 0.0;
    std::uint64_t seed = 0;

    /// Throws if any amplitude, noise std or omega is negative or any field is non-finite.
    void validate() const;

    friend bool operator==(const MotionParams&, const MotionParams&) = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct ParamRanges {
    Interval omega{0.02, 0.2};
    Interval tau{0.0, kTwoPi};
    Interval amplitude{0.0, deg_to_rad(5.0)};
    Interval noise{0.0, deg_to_rad(0.5)};
    Interval drift_pitch{deg_to_rad(-0.2), deg_to_rad(0.2)};
    Interval drift_yaw{deg_to_rad(-1.0), deg_to_rad(1.0)};
    Interval yaw_offset{-kPi, kPi};
    Interval fov{deg_to_rad(30.0), deg_to_rad(120.0)};

    void validate() const;
};

/// Raw per-frame angles before wrapping, k = 0..frames-1.
struct RawAngles {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
};

std::vector<RawAngles> simulate_angles(const MotionParams& params, int frames);

/// simulate_angles wrapped into EulerPose values.
std::vector<EulerPose> simulate_trajectory(const MotionParams& params, int frames);

/// Draws every field uniformly from its interval; deterministic in `seed`.
std::pair<MotionParams, FieldOfView> sample_params(const ParamRanges& ranges, std::uint64_t seed);

} // namespace pano
