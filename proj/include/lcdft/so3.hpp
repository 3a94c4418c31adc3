#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace lcdft {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Euler angles with alpha in [0, pi] and beta, gamma in [0, 2*pi).
struct EulerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    bool in_range() const;
};

/// Proper rotation. Columns of the matrix are the body axes m1, m2, m3
/// expressed in the lab frame.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    /// Validates orthonormality and det = +1 to 1e-12; throws std::invalid_argument.
    static Rotation from_matrix(const Mat3& m);
    /// No validation. For quadrature nodes and internal products.
    static Rotation from_matrix_unchecked(const Mat3& m) { return Rotation(m); }
    static Rotation identity() { return Rotation(); }
    static Rotation about_axis(const Vec3& axis, double angle);

    const Mat3& matrix() const { return m_; }
    Vec3 body_axis(int i) const { return m_.col(i); }  // i = 0,1,2 for m1,m2,m3
    double p(int i, int j) const { return m_(i, j); }

    Rotation inverse() const { return Rotation(m_.transpose()); }
    Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_); }

private:
    explicit Rotation(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

Rotation euler_to_matrix(const EulerAngles& angles);

/// Inverse of euler_to_matrix. At the gimbal set sin(alpha) = 0 the
/// decomposition is not unique; the gamma = 0 representative is returned.
EulerAngles matrix_to_euler(const Rotation& r);

/// P^T P', whose entries are p_ij = m_i . m'_j.
Rotation relative_rotation(const Rotation& p, const Rotation& p_prime);

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Probability quadrature against dnu = sin(a) da db dg / (8 pi^2):
/// Gauss-Legendre in cos(alpha), uniform periodic grids in beta and gamma.
struct SO3Quadrature {
    std::vector<Mat3> nodes;
    std::vector<double> weights;  // sum to 1
    int n_alpha = 0, n_beta = 0, n_gamma = 0;

    std::size_t size() const { return nodes.size(); }
};

SO3Quadrature haar_quadrature(int n_alpha, int n_beta, int n_gamma);

/// Quadrature on the unit sphere against dnu_H = sin(a) da db / (4 pi),
/// nodes n(a,b) = (cos a, sin a cos b, sin a sin b).
struct S2Quadrature {
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

S2Quadrature s2_quadrature(int n_alpha, int n_beta);

/// Fixed-order compensated (Kahan) summation of sum_k w_k f(node_k).
double integrate(const std::function<double(const Mat3&)>& f, const SO3Quadrature& q);

class Rng;

/// Haar-distributed rotation from a deterministic generator state.
Rotation sample_haar(Rng& rng);

/// Deterministic splitmix64-based generator. Identical streams on every
/// platform for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();  // [0, 1)
    double uniform(double a, double b);

    /// Haar-distributed rotation: cos(alpha) uniform on [-1,1], beta and
    /// gamma uniform on [0, 2*pi).
    Mat3 haar_rotation();

    /// Derive an independent stream (for per-chunk Monte Carlo seeding).
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

private:
    std::uint64_t state_;
};

}  // namespace lcdft
