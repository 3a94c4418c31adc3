#include "lcdft/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace lcdft {

double segment_segment_distance2(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
    // Ericson, Real-Time Collision Detection, 5.1.9.
    const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    double s, t;
    if (a <= 1e-30 && e <= 1e-30) return r.squaredNorm();
    if (a <= 1e-30) {
        s = 0.0;
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= 1e-30) {
            t = 0.0;
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            s = denom > 1e-30 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return (p1 + s * d1 - (p2 + t * d2)).squaredNorm();
}

double point_triangle_distance2(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson 5.1.5 (closest point via Voronoi regions).
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return ap.squaredNorm();
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return bp.squaredNorm();
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double v = d1 / (d1 - d3);
        return (p - (a + v * ab)).squaredNorm();
    }
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return cp.squaredNorm();
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double w = d2 / (d2 - d6);
        return (p - (a + w * ac)).squaredNorm();
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + w * (c - b))).squaredNorm();
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return (p - (a + ab * v + ac * w)).squaredNorm();
}

bool segment_triangle_intersects(const Vec3& p, const Vec3& q, const Vec3& a, const Vec3& b,
                                 const Vec3& c) {
    const Vec3 n = (b - a).cross(c - a);
    const Vec3 d = q - p;
    const double nd = n.dot(d);
    if (std::abs(nd) < 1e-14) return false;
    const double t = n.dot(a - p) / nd;
    if (t < 0.0 || t > 1.0) return false;
    const Vec3 x = p + t * d;
    const Vec3 v0 = b - a, v1 = c - a, v2 = x - a;
    const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
    const double d20 = v2.dot(v0), d21 = v2.dot(v1);
    const double denom = d00 * d11 - d01 * d01;
    if (std::abs(denom) < 1e-30) return false;
    const double v = (d11 * d20 - d01 * d21) / denom;
    const double w = (d00 * d21 - d01 * d20) / denom;
    return v >= 0.0 && w >= 0.0 && v + w <= 1.0;
}

double triangle_triangle_distance(const Triangle& t1, const Triangle& t2) {
    for (int i = 0; i < 3; ++i) {
        if (segment_triangle_intersects(t1[i], t1[(i + 1) % 3], t2[0], t2[1], t2[2])) return 0.0;
        if (segment_triangle_intersects(t2[i], t2[(i + 1) % 3], t1[0], t1[1], t1[2])) return 0.0;
    }
    double d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            d2 = std::min(d2, segment_segment_distance2(t1[i], t1[(i + 1) % 3], t2[j],
                                                        t2[(j + 1) % 3]));
        }
        d2 = std::min(d2, point_triangle_distance2(t1[i], t2[0], t2[1], t2[2]));
        d2 = std::min(d2, point_triangle_distance2(t2[i], t1[0], t1[1], t1[2]));
    }
    return std::sqrt(d2);
}

Hull2D convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
    Hull2D h;
    if (pts.empty()) return h;
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return (a - b).norm() < 1e-14; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n == 1) {
        h.vertices = pts;
        return h;
    }
    auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Eigen::Vector2d> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    h.vertices = hull;
    if (hull.size() < 3) {
        // collinear: span counted on both sides
        h.area = 0.0;
        h.perimeter = hull.size() == 2 ? 2.0 * (hull[1] - hull[0]).norm() : 0.0;
        return h;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& p = hull[i];
        const auto& q = hull[(i + 1) % hull.size()];
        h.area += p.x() * q.y() - q.x() * p.y();
        h.perimeter += (q - p).norm();
    }
    h.area = 0.5 * std::abs(h.area);
    return h;
}

}  // namespace lcdft
