#pragma once

#include "lcdft/so3.hpp"

#include <array>
#include <vector>

namespace lcdft {

/// Squared distance between segments [p1,q1] and [p2,q2].
double segment_segment_distance2(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2);

/// Squared distance from point p to triangle (a, b, c).
double point_triangle_distance2(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Proper crossing of segment [p,q] through triangle (a,b,c). Parallel
/// segments are reported as non-crossing; grazing contacts are covered by
/// the distance terms.
bool segment_triangle_intersects(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b,
                                 const Vec3& c);

using Triangle = std::array<Vec3, 3>;

/// Euclidean distance between two triangles (0 when they intersect).
double triangle_triangle_distance(const Triangle& t1, const Triangle& t2);

struct Hull2D {
    double area = 0.0;
    double perimeter = 0.0;   // degenerate (collinear) hulls: 2 * span
    std::vector<Eigen::Vector2d> vertices;
};

/// Monotone-chain convex hull. Handles degenerate (collinear) input.
Hull2D convex_hull_2d(std::vector<Eigen::Vector2d> pts);

}  // namespace lcdft
