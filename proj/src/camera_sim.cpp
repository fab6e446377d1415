#include "pano/camera_sim.hpp"

#include "pano/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pano {

void MotionParams::validate() const
{
    const double all[] = {omega,     tau_roll,    tau_pitch,  tau_yaw,     amp_roll,  amp_pitch, amp_yaw,
                          noise_roll, noise_pitch, noise_yaw, drift_pitch, drift_yaw, yaw_offset};
    for (double v : all) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("motion parameters must be finite");
        }
    }
    if (omega < 0.0 || amp_roll < 0.0 || amp_pitch < 0.0 || amp_yaw < 0.0 || noise_roll < 0.0 ||
        noise_pitch < 0.0 || noise_yaw < 0.0) {
        throw std::invalid_argument("omega, amplitudes and noise strengths must be non-negative");
    }
}

void ParamRanges::validate() const
{
    auto check = [](const Interval& i, const char* name, double min_lo, double max_hi) {
        if (!(i.lo <= i.hi) || i.lo < min_lo || i.hi > max_hi) {
            throw std::invalid_argument(std::string("invalid range for ") + name);
        }
    };
    const double inf = std::numeric_limits<double>::infinity();
    check(omega, "omega", 0.0, inf);
    check(tau, "tau", -inf, inf);
    check(amplitude, "amplitude", 0.0, inf);
    check(noise, "noise", 0.0, inf);
    check(drift_pitch, "drift_pitch", -inf, inf);
    check(drift_yaw, "drift_yaw", -inf, inf);
    check(yaw_offset, "yaw_offset", -inf, inf);
    check(fov, "fov", deg_to_rad(30.0), deg_to_rad(120.0));
}

std::vector<RawAngles> simulate_angles(const MotionParams& p, int frames)
{
    if (frames < 1) {
        throw std::invalid_argument("trajectory needs at least one frame");
    }
    p.validate();
    SplitMix64 rng(p.seed);
    std::vector<RawAngles> out(static_cast<std::size_t>(frames));
    for (int k = 0; k < frames; ++k) {
        const double kd = static_cast<double>(k);
        const double n_roll = p.noise_roll * rng.normal();
        const double n_pitch = p.noise_pitch * rng.normal();
        const double n_yaw = p.noise_yaw * rng.normal();
        auto& a = out[static_cast<std::size_t>(k)];
        a.roll = n_roll + p.amp_roll * std::sin(p.omega * kd + p.tau_roll);
        a.pitch = n_pitch + p.amp_pitch * std::sin(p.omega * kd + p.tau_pitch) + p.drift_pitch * kd;
        a.yaw = n_yaw + p.amp_yaw * std::sin(p.omega * kd + p.tau_yaw) + p.drift_yaw * kd + p.yaw_offset;
    }
    return out;
}

std::vector<EulerPose> simulate_trajectory(const MotionParams& params, int frames)
{
    const auto raw = simulate_angles(params, frames);
    std::vector<EulerPose> poses;
    poses.reserve(raw.size());
    for (const auto& a : raw) {
        poses.emplace_back(a.roll, a.pitch, a.yaw);
    }
    return poses;
}

std::pair<MotionParams, FieldOfView> sample_params(const ParamRanges& ranges, std::uint64_t seed)
{
    ranges.validate();
    SplitMix64 rng(seed);
    auto draw = [&rng](const Interval& i) { return rng.uniform(i.lo, i.hi); };
    MotionParams p;
    p.omega = draw(ranges.omega);
    p.tau_roll = draw(ranges.tau);
    p.tau_pitch = draw(ranges.tau);
    p.tau_yaw = draw(ranges.tau);
    p.amp_roll = draw(ranges.amplitude);
    p.amp_pitch = draw(ranges.amplitude);
    p.amp_yaw = draw(ranges.amplitude);
    p.noise_roll = draw(ranges.noise);
    p.noise_pitch = draw(ranges.noise);
    p.noise_yaw = draw(ranges.noise);
    p.drift_pitch = draw(ranges.drift_pitch);
    p.drift_yaw = draw(ranges.drift_yaw);
    p.yaw_offset = draw(ranges.yaw_offset);
    p.seed = rng.next();
    const double h = draw(ranges.fov);
    const double v = draw(ranges.fov);
    return {p, FieldOfView(h, v)};
}

} // namespace pano
