#pragma once

// Line geometry for the line-consistency metric: segments, homogeneous lines,
// pinhole intrinsics derived from a field of view, and rotation homographies.

#include "pano/geometry.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pano {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct LineSegment {
    Point2 p1;
    Point2 p2;

    double length() const;
    Point2 midpoint() const { return {(p1.x + p2.x) / 2.0, (p1.y + p2.y) / 2.0}; }
    bool degenerate() const { return p1 == p2; }

    friend bool operator==(const LineSegment&, const LineSegment&) = default;
};

/// a x + b y + c = 0 with a^2 + b^2 = 1.
struct HomogeneousLine {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;

    /// Scales so that a^2 + b^2 = 1; throws if (a, b) = (0, 0).
    static HomogeneousLine normalized(double a, double b, double c);
    static HomogeneousLine through(const Point2& p, const Point2& q);

    double signed_distance(const Point2& p) const { return a * p.x + b * p.y + c; }
};

/// Pinhole intrinsics in the usual (right, down, forward) camera convention.
struct Intrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;

    /// fx = (W/2) / tan(hfov/2), principal point at (W/2, H/2).
    static Intrinsics from_fov(int width, int height, const FieldOfView& fov);

    Mat3 matrix() const;
    Mat3 inverse() const;
};

/// Pixel map from view A to view B for cameras sharing a centre.
Mat3 rotation_homography(const Intrinsics& ka, const EulerPose& pa, const Intrinsics& kb, const EulerPose& pb);

/// Applies a homography to a pixel; nullopt when the point maps to infinity.
std::optional<Point2> apply_homography(const Mat3& h, const Point2& p);

/// l' ~ H^-T l, re-normalized. Throws std::domain_error for singular H.
HomogeneousLine transfer_line(const HomogeneousLine& l, const Mat3& h);

/// A half-plane a x + b y + c >= 0.
struct HalfPlane {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Clips an infinite line to [0, W-1] x [0, H-1] intersected with extra half-planes.
std::optional<LineSegment> clip_line(const HomogeneousLine& l, int width, int height,
                                     std::span<const HalfPlane> extra = {});

/// Bounded similarity (S_angle * S_distance)^2 of two segments in a W x H image.
/// S_angle = 1 - angle / (pi/2) over the acute angle between directions and
/// S_distance = max(0, 1 - |m1 - m2| / diagonal) over segment midpoints.
double ea_score(const LineSegment& l1, const LineSegment& l2, int width, int height);

} // namespace pano
