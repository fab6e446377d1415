#pragma once

// Angular and rotational math shared by every projection in the toolkit.
//
// World and camera frames use forward = +X, right = +Y, up = +Z. The identity
// pose therefore looks at the centre of the equirectangular map, increasing
// yaw turns the view towards increasing u_eq, and a positive pitch lowers the
// optical axis (phi = -pitch for a pure pitch rotation).

#include <array>
#include <cmath>
#include <numbers>

namespace pano {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Wraps an angle into [-pi, pi). Values already in range are returned unchanged.
double wrap_angle(double rad);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const;

    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Unit direction on the sphere.
using Direction3 = Vec3;

/// Row-major 3x3 matrix. Used for rotations and homographies.
struct Mat3 {
    std::array<double, 9> m{};

    static Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

    double& operator()(int r, int c) { return m[static_cast<std::size_t>(r * 3 + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 3 + c)]; }

    Mat3 transposed() const;
    double determinant() const;
    /// Throws std::domain_error when the matrix is singular.
    Mat3 inverse() const;

    friend Mat3 operator*(const Mat3& a, const Mat3& b);
    friend Vec3 operator*(const Mat3& a, const Vec3& v);
    friend bool operator==(const Mat3&, const Mat3&) = default;
};

using RotationMatrix = Mat3;

struct EulerPose {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;

    EulerPose() = default;
    /// Stores all three angles wrapped into [-pi, pi). Throws on non-finite input.
    EulerPose(double roll_rad, double pitch_rad, double yaw_rad);

    static EulerPose from_degrees(double roll_deg, double pitch_deg, double yaw_deg);

    friend bool operator==(const EulerPose&, const EulerPose&) = default;
};

struct FieldOfView {
    double horizontal = kPi / 2;
    double vertical = kPi / 2;

    FieldOfView() = default;
    /// Both components must lie in (0, pi).
    FieldOfView(double horizontal_rad, double vertical_rad);

    static FieldOfView from_degrees(double horizontal_deg, double vertical_deg);

    friend bool operator==(const FieldOfView&, const FieldOfView&) = default;
};

struct NdcCoord {
    double x = 0.0;
    double y = 0.0;
};

struct SphericalCoord {
    double theta = 0.0; ///< longitude, [-pi, pi)
    double phi = 0.0;   ///< latitude, [-pi/2, pi/2]
};

struct EquirectCoord {
    double u = 0.0; ///< continuous column, [0, W_eq)
    double v = 0.0; ///< continuous row, [0, H_eq]
};

NdcCoord pixel_to_ndc(double u, double v, int width, int height);

/// Camera-frame ray for an NDC position. Image +x goes right, image +y goes down.
Direction3 ndc_to_camera_ray(const NdcCoord& n, const FieldOfView& fov);

Mat3 roll_matrix(double roll);
Mat3 pitch_matrix(double pitch);
Mat3 yaw_matrix(double yaw);

/// R_y(yaw) * R_p(pitch) * R_r(roll); maps camera-frame rays into the world frame.
RotationMatrix rotation_from_pose(const EulerPose& pose);

/// theta = atan2(y, x), phi = asin(z / |d|). theta is 0 at the poles.
SphericalCoord dir_to_spherical(const Direction3& d);
Direction3 spherical_to_dir(const SphericalCoord& s);

/// Requires width == 2 * height.
EquirectCoord spherical_to_equirect(const SphericalCoord& s, int width, int height);
SphericalCoord equirect_to_spherical(const EquirectCoord& c, int width, int height);
Direction3 equirect_to_dir(const EquirectCoord& c, int width, int height);

struct RelativePose {
    EulerPose pose;
    bool degenerate = false; ///< gimbal lock: roll forced to 0, rotation folded into yaw
};

/// Euler factorization (same R_y R_p R_r order) of an arbitrary rotation matrix.
RelativePose euler_from_rotation(const Mat3& r);

/// Pose of `pose` expressed in the frame of `reference`: factorizes R(reference)^T R(pose).
RelativePose relative_pose(const EulerPose& pose, const EulerPose& reference);

} // namespace pano
