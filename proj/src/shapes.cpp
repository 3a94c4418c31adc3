#include "lcdft/shapes.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lcdft {

namespace {
constexpr double kPi = std::numbers::pi;

Mat3 diag(double a, double b, double c) {
    Mat3 m = Mat3::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}
}  // namespace

std::string to_string(ShapeKind k) {
    switch (k) {
        case ShapeKind::Rod: return "rod";
        case ShapeKind::BentCore: return "bent_core";
        case ShapeKind::SpheroTriangle: return "spherotriangle";
    }
    return "?";
}

ShapeKind shape_kind_from_string(const std::string& s) {
    if (s == "rod") return ShapeKind::Rod;
    if (s == "bent_core" || s == "bentcore") return ShapeKind::BentCore;
    if (s == "spherotriangle" || s == "sphero_triangle") return ShapeKind::SpheroTriangle;
    throw std::invalid_argument("unknown shape kind: " + s);
}

MoleculeShape MoleculeShape::rod(double L, double D, int N) {
    MoleculeShape s{ShapeKind::Rod, L, D, 0.0, N};
    s.validate();
    return s;
}

MoleculeShape MoleculeShape::bent_core(double L, double D, double theta, int N) {
    MoleculeShape s{ShapeKind::BentCore, L, D, theta, N};
    s.validate();
    return s;
}

MoleculeShape MoleculeShape::spherotriangle(double L, double D, double theta) {
    MoleculeShape s{ShapeKind::SpheroTriangle, L, D, theta, 0};
    s.validate();
    return s;
}

void MoleculeShape::validate() const {
    if (!(L > 0.0)) throw std::invalid_argument("shape: L must be positive");
    if (!(D > 0.0)) throw std::invalid_argument("shape: D must be positive");
    if (kind != ShapeKind::Rod) {
        if (!(theta > 0.0 && theta <= kPi))
            throw std::invalid_argument("shape: theta must lie in (0, pi]");
    }
    if (kind == ShapeKind::Rod && N < 1)
        throw std::invalid_argument("shape: rod needs N >= 1");
    if (kind == ShapeKind::BentCore) {
        if (N < 2 || N % 2 != 0)
            throw std::invalid_argument("shape: bent-core needs even N >= 2");
    }
}

BeadSet beads(const MoleculeShape& shape) {
    shape.validate();
    if (shape.kind == ShapeKind::SpheroTriangle)
        throw std::invalid_argument("beads: spherotriangle has a surface distribution");
    BeadSet out;
    out.positions.reserve(shape.N + 1);
    const double t2 = shape.theta / 2.0;
    for (int j = 0; j <= shape.N; ++j) {
        const double s = static_cast<double>(j) / shape.N - 0.5;
        if (shape.kind == ShapeKind::Rod) {
            out.positions.push_back(Vec3(shape.L * s, 0.0, 0.0));
        } else {
            out.positions.push_back(Vec3(shape.L * (0.5 - std::abs(s)) * std::cos(t2),
                                         shape.L * s * std::sin(t2), 0.0));
        }
    }
    return out;
}

TriangleVertices triangle_vertices(const MoleculeShape& shape) {
    if (shape.kind != ShapeKind::SpheroTriangle)
        throw std::invalid_argument("triangle_vertices: shape is not a spherotriangle");
    shape.validate();
    const double t2 = shape.theta / 2.0;
    const Vec3 ea(std::cos(t2), std::sin(t2), 0.0);
    const Vec3 eb(-std::cos(t2), std::sin(t2), 0.0);
    return {Vec3::Zero(), -(shape.L / 2.0) * ea, (shape.L / 2.0) * eb};
}

BentCoreArms bent_core_arms(const MoleculeShape& shape) {
    if (shape.kind != ShapeKind::BentCore)
        throw std::invalid_argument("bent_core_arms: shape is not a bent-core molecule");
    const double t2 = shape.theta / 2.0;
    const Vec3 apex(0.5 * shape.L * std::cos(t2), 0.0, 0.0);
    const Vec3 end1(0.0, 0.5 * shape.L * std::sin(t2), 0.0);
    const Vec3 end2(0.0, -0.5 * shape.L * std::sin(t2), 0.0);
    return {apex, end1 - apex, end2 - apex};
}

PairPotential PairPotential::hard_core(double D) { return {PotentialKind::HardCore, D, 0.0, 0.0}; }

PairPotential PairPotential::lennard_jones(double D, double epsilon) {
    return {PotentialKind::LennardJones, D, epsilon, D * std::pow(2.0, -1.0 / 6.0)};
}

double PairPotential::operator()(double r) const {
    if (kind == PotentialKind::HardCore)
        return r <= D ? std::numeric_limits<double>::infinity() : 0.0;
    const double s6 = std::pow(sigma / r, 6);
    return 4.0 * epsilon * (s6 * s6 - s6);
}

double pair_energy(const MoleculeShape& shape, const PairPotential& pot, const Vec3& x_rel,
                   const Mat3& p_bar) {
    const BeadSet b = beads(shape);
    double u = 0.0;
    for (const Vec3& bi : b.positions) {
        for (const Vec3& bj : b.positions) {
            const double r = (bi - (p_bar * bj + x_rel)).norm();
            const double v = pot(r);
            if (std::isinf(v)) return std::numeric_limits<double>::infinity();
            u += v;
        }
    }
    return u;
}

SymmetryGroup symmetry_group(const MoleculeShape& shape) {
    SymmetryGroup g;
    const Mat3 c2_m1 = diag(1, -1, -1);     // pi about m1
    const Mat3 j_m3 = diag(-1, -1, 1);      // pi about m3
    const Mat3 j_m2 = diag(-1, 1, -1);      // pi about m2
    if (shape.kind == ShapeKind::Rod) {
        g.name = "Dinf_h";
        g.continuous_axial = true;
        g.generators = {c2_m1, j_m3};       // j_m3 is proper and in Dinf_h
        g.mirror_js = {j_m3};
    } else {
        g.name = "C2v";
        g.continuous_axial = false;
        g.generators = {c2_m1};
        g.mirror_js = {j_m3, j_m2};         // molecular plane (normal m3) and m1-m3 plane
    }
    return g;
}

}  // namespace lcdft
