#include "pano/lines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pano {

double LineSegment::length() const
{
    return std::hypot(p2.x - p1.x, p2.y - p1.y);
}

HomogeneousLine HomogeneousLine::normalized(double a, double b, double c)
{
    const double n = std::hypot(a, b);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("line normal (a, b) must be non-zero");
    }
    return {a / n, b / n, c / n};
}

HomogeneousLine HomogeneousLine::through(const Point2& p, const Point2& q)
{
    if (p == q) {
        throw std::invalid_argument("a line needs two distinct points");
    }
    // (p.x, p.y, 1) x (q.x, q.y, 1)
    return normalized(p.y - q.y, q.x - p.x, p.x * q.y - p.y * q.x);
}

Intrinsics Intrinsics::from_fov(int width, int height, const FieldOfView& fov)
{
    return {(width / 2.0) / std::tan(fov.horizontal / 2.0), (height / 2.0) / std::tan(fov.vertical / 2.0),
            width / 2.0, height / 2.0};
}

Mat3 Intrinsics::matrix() const
{
    return Mat3{{fx, 0, cx, 0, fy, cy, 0, 0, 1}};
}

Mat3 Intrinsics::inverse() const
{
    return Mat3{{1.0 / fx, 0, -cx / fx, 0, 1.0 / fy, -cy / fy, 0, 0, 1}};
}

namespace {
// (right, down, forward) -> (forward, right, up)
const Mat3 kOpticalToPose{{0, 0, 1, 1, 0, 0, 0, -1, 0}};
} // namespace

Mat3 rotation_homography(const Intrinsics& ka, const EulerPose& pa, const Intrinsics& kb, const EulerPose& pb)
{
    const Mat3 rel = rotation_from_pose(pb).transposed() * rotation_from_pose(pa);
    return kb.matrix() * kOpticalToPose.transposed() * rel * kOpticalToPose * ka.inverse();
}

std::optional<Point2> apply_homography(const Mat3& h, const Point2& p)
{
    const Vec3 q = h * Vec3{p.x, p.y, 1.0};
    if (q.z == 0.0) {
        return std::nullopt;
    }
    return Point2{q.x / q.z, q.y / q.z};
}

HomogeneousLine transfer_line(const HomogeneousLine& l, const Mat3& h)
{
    const Mat3 hit = h.inverse().transposed();
    const Vec3 out = hit * Vec3{l.a, l.b, l.c};
    return HomogeneousLine::normalized(out.x, out.y, out.z);
}

std::optional<LineSegment> clip_line(const HomogeneousLine& l, int width, int height, std::span<const HalfPlane> extra)
{
    // p(t) = foot + t * dir
    const Point2 foot{-l.a * l.c, -l.b * l.c};
    const Point2 dir{-l.b, l.a};
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();

    auto constrain = [&](double a, double b, double c) {
        // a x + b y + c >= 0  =>  k t + m >= 0
        const double k = a * dir.x + b * dir.y;
        const double m = a * foot.x + b * foot.y + c;
        if (std::abs(k) < 1e-15) {
            if (m < 0.0) {
                t0 = 1.0;
                t1 = 0.0;
            }
            return;
        }
        const double t = -m / k;
        if (k > 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
    };
    constrain(1, 0, 0);
    constrain(-1, 0, width - 1.0);
    constrain(0, 1, 0);
    constrain(0, -1, height - 1.0);
    for (const auto& hp : extra) {
        constrain(hp.a, hp.b, hp.c);
    }
    if (!(t1 > t0)) {
        return std::nullopt;
    }
    return LineSegment{{foot.x + t0 * dir.x, foot.y + t0 * dir.y}, {foot.x + t1 * dir.x, foot.y + t1 * dir.y}};
}

double ea_score(const LineSegment& l1, const LineSegment& l2, int width, int height)
{
    if (l1.degenerate() || l2.degenerate()) {
        throw std::invalid_argument("ea_score needs non-degenerate segments");
    }
    if (width < 1 || height < 1) {
        throw std::invalid_argument("ea_score needs positive image dimensions");
    }
    const double dx1 = l1.p2.x - l1.p1.x;
    const double dy1 = l1.p2.y - l1.p1.y;
    const double dx2 = l2.p2.x - l2.p1.x;
    const double dy2 = l2.p2.y - l2.p1.y;
    // acute angle between the two undirected directions, in [0, pi/2]
    const double angle = std::atan2(std::abs(dx1 * dy2 - dy1 * dx2), std::abs(dx1 * dx2 + dy1 * dy2));
    const double s_angle = 1.0 - std::min(angle, kPi / 2.0) / (kPi / 2.0);

    const Point2 m1 = l1.midpoint();
    const Point2 m2 = l2.midpoint();
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    const double s_dist = std::max(0.0, 1.0 - std::hypot(m1.x - m2.x, m1.y - m2.y) / diag);

    const double s = s_angle * s_dist;
    return s * s;
}

} // namespace pano
