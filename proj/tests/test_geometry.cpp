#include "doctest.h"

#include "lcdft/geometry.hpp"
#include "lcdft/so3.hpp"

#include <cmath>

using namespace lcdft;

namespace {

// two-stage dense-sampling oracle for triangle-triangle distance
double dense_tri_tri(const Triangle& t1, const Triangle& t2) {
    auto sample = [](const Triangle& t, double u0, double u1, double v0, double v1, int n,
                     std::vector<Vec3>& out) {
        out.clear();
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const double u = u0 + (u1 - u0) * i / n;
                const double v = v0 + (v1 - v0) * j / n;
                if (u + v > 1.0 + 1e-12) continue;
                out.push_back(t[0] + u * (t[1] - t[0]) + v * (t[2] - t[0]));
            }
    };
    double bu1 = 0, bv1 = 0, bu2 = 0, bv2 = 0, w = 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (int stage = 0; stage < 3; ++stage) {
        const int n = 64;
        std::vector<Vec3> p1, p2;
        sample(t1, std::max(0.0, bu1 - w), std::min(1.0, bu1 + w), std::max(0.0, bv1 - w),
               std::min(1.0, bv1 + w), n, p1);
        sample(t2, std::max(0.0, bu2 - w), std::min(1.0, bu2 + w), std::max(0.0, bv2 - w),
               std::min(1.0, bv2 + w), n, p2);
        std::size_t bi = 0, bj = 0;
        best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < p1.size(); ++i)
            for (std::size_t j = 0; j < p2.size(); ++j) {
                const double d2 = (p1[i] - p2[j]).squaredNorm();
                if (d2 < best) {
                    best = d2;
                    bi = i;
                    bj = j;
                }
            }
        // recover (u, v) of the best pair for the next, finer window
        auto locate = [&](const Triangle& t, const Vec3& p, double& u, double& v) {
            const Vec3 e1 = t[1] - t[0], e2 = t[2] - t[0], d = p - t[0];
            const double a = e1.dot(e1), b = e1.dot(e2), c = e2.dot(e2);
            const double det = a * c - b * b;
            u = (c * e1.dot(d) - b * e2.dot(d)) / det;
            v = (a * e2.dot(d) - b * e1.dot(d)) / det;
        };
        locate(t1, p1[bi], bu1, bv1);
        locate(t2, p2[bj], bu2, bv2);
        w *= 2.5 / n;
    }
    return std::sqrt(best);
}

}  // namespace

TEST_CASE("segment-segment distance basics") {
    const Vec3 a0(0, 0, 0), a1(1, 0, 0);
    CHECK(std::sqrt(segment_segment_distance2(a0, a1, Vec3(0, 0.3, 0), Vec3(1, 0.3, 0))) ==
          doctest::Approx(0.3).epsilon(1e-14));
    CHECK(segment_segment_distance2(a0, a1, a0, a1) == doctest::Approx(0.0));
    CHECK(std::sqrt(segment_segment_distance2(a0, a1, Vec3(2, 0, 0), Vec3(3, 0, 0))) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // crossing perpendicular segments
    CHECK(std::sqrt(segment_segment_distance2(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, -1, 0.2),
                                              Vec3(0, 1, 0.2))) ==
          doctest::Approx(0.2).epsilon(1e-12));
    // degenerate point-segment
    CHECK(std::sqrt(segment_segment_distance2(a0, a0, Vec3(0, 0.5, 0), Vec3(1, 0.5, 0))) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("point-triangle distance regions") {
    const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
    CHECK(std::sqrt(point_triangle_distance2(Vec3(0.2, 0.2, 0.7), a, b, c)) ==
          doctest::Approx(0.7).epsilon(1e-14));
    CHECK(std::sqrt(point_triangle_distance2(Vec3(-1, -1, 0), a, b, c)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::sqrt(point_triangle_distance2(Vec3(0.5, -0.3, 0), a, b, c)) ==
          doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("triangle-triangle distance: intersection and frozen oracle value") {
    const Triangle t1{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    const Triangle pierce{Vec3(0.2, 0.2, -0.5), Vec3(0.25, 0.2, 0.5), Vec3(0.2, 0.3, 0.6)};
    CHECK(triangle_triangle_distance(t1, pierce) == 0.0);

    // frozen configuration cross-checked against a dense-sampling oracle
    const Mat3 P = euler_to_matrix({1.1, 2.3, 0.7}).matrix();
    const Vec3 x(0.8, -0.5, 0.6);
    const double t2half = std::cos(std::numbers::pi / 4.0) / 2.0;
    const Triangle s1{Vec3(0, 0, 0), Vec3(-t2half, -t2half, 0), Vec3(-t2half, t2half, 0)};
    Triangle s2;
    for (int i = 0; i < 3; ++i) s2[i] = P * s1[i] + x;
    const double exact = triangle_triangle_distance(s1, s2);
    CHECK(exact == doctest::Approx(0.7313857427906229).epsilon(5e-5));
    CHECK(std::abs(exact - dense_tri_tri(s1, s2)) < 1e-6);
}

TEST_CASE("triangle-triangle distance matches dense oracle on random pairs") {
    Rng rng(1234);
    const double h = std::cos(std::numbers::pi / 4.0) / 2.0;
    const Triangle base{Vec3(0, 0, 0), Vec3(-h, -h, 0), Vec3(-h, h, 0)};
    for (int k = 0; k < 5; ++k) {
        const Mat3 P = rng.haar_rotation();
        const Vec3 x(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
        Triangle t2;
        for (int i = 0; i < 3; ++i) t2[i] = P * base[i] + x;
        const double exact = triangle_triangle_distance(base, t2);
        if (exact == 0.0) continue;  // oracle meshes cannot certify contact
        CHECK(std::abs(exact - dense_tri_tri(base, t2)) < 1e-6);
    }
}

TEST_CASE("2d hull area, perimeter, and degenerate input") {
    std::vector<Eigen::Vector2d> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    const Hull2D h = convex_hull_2d(square);
    CHECK(h.area == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h.perimeter == doctest::Approx(4.0).epsilon(1e-14));

    std::vector<Eigen::Vector2d> line{{0, 0}, {0.5, 0}, {2, 0}};
    const Hull2D l = convex_hull_2d(line);
    CHECK(l.area == 0.0);
    CHECK(l.perimeter == doctest::Approx(4.0).epsilon(1e-14));  // both sides of the span
}
