#include "pano/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace pano {

double wrap_angle(double rad)
{
    if (rad >= -kPi && rad < kPi) {
        return rad;
    }
    double w = std::fmod(rad + kPi, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    w -= kPi;
    // fmod can land exactly on the excluded upper bound after the shift back
    return w >= kPi ? w - kTwoPi : w;
}

Vec3 Vec3::normalized() const
{
    const double n = norm();
    if (!(n > 0.0)) {
        throw std::invalid_argument("cannot normalize a zero vector");
    }
    return {x / n, y / n, z / n};
}

Mat3 Mat3::transposed() const
{
    Mat3 t;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            t(r, c) = (*this)(c, r);
        }
    }
    return t;
}

double Mat3::determinant() const
{
    const Mat3& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Mat3 Mat3::inverse() const
{
    const Mat3& a = *this;
    const double det = determinant();
    double scale = 0.0;
    for (double v : m) {
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0 || std::abs(det) <= 1e-14 * scale * scale * scale) {
        throw std::domain_error("matrix is singular");
    }
    Mat3 inv;
    inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / det;
    inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / det;
    inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / det;
    inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / det;
    inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / det;
    inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / det;
    inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / det;
    inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / det;
    inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / det;
    return inv;
}

Mat3 operator*(const Mat3& a, const Mat3& b)
{
    Mat3 out;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c) + a(r, 2) * b(2, c);
        }
    }
    return out;
}

Vec3 operator*(const Mat3& a, const Vec3& v)
{
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

EulerPose::EulerPose(double roll_rad, double pitch_rad, double yaw_rad)
{
    if (!std::isfinite(roll_rad) || !std::isfinite(pitch_rad) || !std::isfinite(yaw_rad)) {
        throw std::invalid_argument("pose angles must be finite");
    }
    roll = wrap_angle(roll_rad);
    pitch = wrap_angle(pitch_rad);
    yaw = wrap_angle(yaw_rad);
}

EulerPose EulerPose::from_degrees(double roll_deg, double pitch_deg, double yaw_deg)
{
    return EulerPose(deg_to_rad(roll_deg), deg_to_rad(pitch_deg), deg_to_rad(yaw_deg));
}

FieldOfView::FieldOfView(double horizontal_rad, double vertical_rad)
    : horizontal(horizontal_rad), vertical(vertical_rad)
{
    auto valid = [](double a) { return std::isfinite(a) && a > 0.0 && a < kPi; };
    if (!valid(horizontal) || !valid(vertical)) {
        throw std::invalid_argument("field of view components must lie in (0, 180) degrees, got " +
                                    std::to_string(rad_to_deg(horizontal)) + " x " +
                                    std::to_string(rad_to_deg(vertical)));
    }
}

FieldOfView FieldOfView::from_degrees(double horizontal_deg, double vertical_deg)
{
    return FieldOfView(deg_to_rad(horizontal_deg), deg_to_rad(vertical_deg));
}

NdcCoord pixel_to_ndc(double u, double v, int width, int height)
{
    if (width < 1 || height < 1) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    return {2.0 * u / width - 1.0, 2.0 * v / height - 1.0};
}

Direction3 ndc_to_camera_ray(const NdcCoord& n, const FieldOfView& fov)
{
    const Vec3 ray{1.0, n.x * std::tan(fov.horizontal / 2.0), -n.y * std::tan(fov.vertical / 2.0)};
    return ray.normalized();
}

Mat3 roll_matrix(double r)
{
    const double c = std::cos(r);
    const double s = std::sin(r);
    return Mat3{{1, 0, 0, 0, c, -s, 0, s, c}};
}

Mat3 pitch_matrix(double p)
{
    const double c = std::cos(p);
    const double s = std::sin(p);
    return Mat3{{c, 0, s, 0, 1, 0, -s, 0, c}};
}

Mat3 yaw_matrix(double y)
{
    const double c = std::cos(y);
    const double s = std::sin(y);
    return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
}

RotationMatrix rotation_from_pose(const EulerPose& pose)
{
    return yaw_matrix(pose.yaw) * pitch_matrix(pose.pitch) * roll_matrix(pose.roll);
}

SphericalCoord dir_to_spherical(const Direction3& d)
{
    const double n = d.norm();
    if (!(n > 0.0)) {
        throw std::invalid_argument("direction must be non-zero");
    }
    const double theta = (d.x == 0.0 && d.y == 0.0) ? 0.0 : std::atan2(d.y, d.x);
    const double phi = std::asin(std::clamp(d.z / n, -1.0, 1.0));
    // atan2 returns +pi on the negative x axis; the map is half-open at +pi
    return {theta >= kPi ? -kPi : theta, phi};
}

Direction3 spherical_to_dir(const SphericalCoord& s)
{
    const double cp = std::cos(s.phi);
    return {cp * std::cos(s.theta), cp * std::sin(s.theta), std::sin(s.phi)};
}

namespace {
void check_equirect_dims(int width, int height)
{
    if (height < 1 || width != 2 * height) {
        throw std::invalid_argument("equirectangular maps must have width == 2 * height, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
}
} // namespace

EquirectCoord spherical_to_equirect(const SphericalCoord& s, int width, int height)
{
    check_equirect_dims(width, height);
    return {width / kTwoPi * (s.theta + kPi), height / kPi * (kPi / 2.0 - s.phi)};
}

SphericalCoord equirect_to_spherical(const EquirectCoord& c, int width, int height)
{
    check_equirect_dims(width, height);
    if (!(c.u >= 0.0 && c.u < width) || !(c.v >= 0.0 && c.v <= height)) {
        throw std::invalid_argument("equirectangular coordinate out of range");
    }
    return {c.u * kTwoPi / width - kPi, kPi / 2.0 - c.v * kPi / height};
}

Direction3 equirect_to_dir(const EquirectCoord& c, int width, int height)
{
    return spherical_to_dir(equirect_to_spherical(c, width, height));
}

RelativePose euler_from_rotation(const Mat3& r)
{
    // R = R_y R_p R_r gives r20 = -sin(p), r21 = cos(p) sin(r), r22 = cos(p) cos(r),
    // r10 = sin(y) cos(p), r00 = cos(y) cos(p).
    const double sp = std::clamp(-r(2, 0), -1.0, 1.0);
    RelativePose out;
    if (std::abs(sp) >= 1.0 - 1e-12) {
        // With roll = 0: r01 = -sin(y), r11 = cos(y) for both pitch signs.
        const double pitch = sp > 0.0 ? kPi / 2.0 : -kPi / 2.0;
        out.pose = EulerPose(0.0, pitch, std::atan2(-r(0, 1), r(1, 1)));
        out.degenerate = true;
        return out;
    }
    out.pose = EulerPose(std::atan2(r(2, 1), r(2, 2)), std::asin(sp), std::atan2(r(1, 0), r(0, 0)));
    return out;
}

RelativePose relative_pose(const EulerPose& pose, const EulerPose& reference)
{
    if (pose == reference) {
        return {};
    }
    return euler_from_rotation(rotation_from_pose(reference).transposed() * rotation_from_pose(pose));
}

} // namespace pano
