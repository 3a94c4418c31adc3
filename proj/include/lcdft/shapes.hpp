#pragma once

#include "lcdft/so3.hpp"

#include <string>
#include <vector>

namespace lcdft {

enum class ShapeKind { Rod, BentCore, SpheroTriangle };

std::string to_string(ShapeKind k);
ShapeKind shape_kind_from_string(const std::string& s);

/// Rigid molecule description. L is the contour length (lateral sides of a
/// spherotriangle are L/2), D the bead/sweep diameter, theta the apex or
/// opening angle, N the bead-count parameter of the discrete models
/// (beads are indexed j = 0..N inclusive, so N+1 beads span s in [-1/2, 1/2]).
struct MoleculeShape {
    ShapeKind kind = ShapeKind::Rod;
    double L = 1.0;
    double D = 0.1;
    double theta = 0.0;  // BentCore / SpheroTriangle only
    int N = 10;

    static MoleculeShape rod(double L, double D, int N = 10);
    static MoleculeShape bent_core(double L, double D, double theta, int N = 10);
    static MoleculeShape spherotriangle(double L, double D, double theta);

    /// Throws std::invalid_argument on violated invariants. theta may equal
    /// pi (degenerate rod limit).
    void validate() const;
};

/// Bead centers in the body frame.
struct BeadSet {
    std::vector<Vec3> positions;
};

/// Discrete bead model (rod or bent-core). SpheroTriangle is a surface
/// distribution and is rejected.
BeadSet beads(const MoleculeShape& shape);

/// Isosceles triangle with apex at the origin in the m1-m2 plane: lateral
/// edges of length L/2 along e_a = m1 cos(t/2) + m2 sin(t/2) and
/// e_b = -m1 cos(t/2) + m2 sin(t/2); base along e_c = -m2.
struct TriangleVertices {
    Vec3 O, A, B;
};

TriangleVertices triangle_vertices(const MoleculeShape& shape);

/// Bent-core center set: two arms of length L/2 meeting at the apex
/// (L/2) cos(theta/2) m1, ends at +-(L/2) sin(theta/2) m2.
struct BentCoreArms {
    Vec3 apex;
    Vec3 arm1, arm2;  // vectors from the apex
};

BentCoreArms bent_core_arms(const MoleculeShape& shape);

enum class PotentialKind { HardCore, LennardJones };

struct PairPotential {
    PotentialKind kind = PotentialKind::HardCore;
    double D = 0.1;
    double epsilon = 1.0;
    double sigma = 0.0;

    static PairPotential hard_core(double D);
    // sigma = D * 2^(-1/6), so the LJ minimum sits at r = D.
    static PairPotential lennard_jones(double D, double epsilon);

    /// Sphere-pair potential V0(r). HardCore overlap returns +infinity
    /// (exp(-V0) is then an exact 0).
    double operator()(double r) const;
};

/// Bead-sum interaction energy of molecule 1 at the origin with identity
/// orientation and molecule 2 at x_rel with relative rotation p_bar.
double pair_energy(const MoleculeShape& shape, const PairPotential& pot, const Vec3& x_rel,
                   const Mat3& p_bar);

/// Finite generator data for the molecular point group.
struct SymmetryGroup {
    std::string name;                // "Dinf_h" or "C2v"
    bool continuous_axial = false;   // arbitrary rotation about m1
    std::vector<Mat3> generators;    // proper rotations in H
    std::vector<Mat3> mirror_js;     // pi-rotations J with G(J P J) = G(P)
};

SymmetryGroup symmetry_group(const MoleculeShape& shape);

}  // namespace lcdft
