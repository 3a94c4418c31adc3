#pragma once

#include "lcdft/kernel.hpp"
#include "lcdft/so3.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lcdft {

using Tensor3 = std::array<double, 27>;  // T[i][j][k] at 9i + 3j + k

/// Orientational moments of the distribution: <m1>, <m1 m1>, <m2 m2>, and
/// for the cubic closure <m1 m1 m1> and <m1 m2 m2>.
struct MomentSet {
    Vec3 m1 = Vec3::Zero();
    Mat3 M11 = Mat3::Identity() / 3.0;
    Mat3 M22 = Mat3::Identity() / 3.0;
    bool has_third = false;
    Tensor3 T111{};
    Tensor3 T122{};

    static MomentSet isotropic(bool cubic = false);

    /// trace-1 of M11/M22, positive semidefiniteness, covariance PSD, |m1|<=1.
    bool invariants_ok(double tol = 1e-10, std::string* why = nullptr) const;
};

/// max-abs componentwise difference over the active moments.
double moment_distance(const MomentSet& a, const MomentSet& b);

enum class SeedPreset { Isotropic, UniaxialSeed, BiaxialSeed, PolarSeed };

std::string to_string(SeedPreset s);
SeedPreset seed_preset_from_string(const std::string& s);

MomentSet seed_moments(SeedPreset preset, bool cubic);

struct SCFConfig {
    double damping = 0.5;
    double tol = 1e-10;
    int max_iter = 5000;
    std::variant<SeedPreset, MomentSet> init = SeedPreset::Isotropic;
};

struct OrderParameters {
    std::array<double, 3> m11_eigs{};  // descending
    std::array<double, 3> m22_eigs{};
    double m1_norm = 0.0;
    double align_cos = 1.0;  // |cos| of the angle between m1 and the top M11 eigenvector
};

OrderParameters order_parameters(const MomentSet& m);

struct SolutionBranch {
    MomentSet moments;
    double free_energy = 0.0;  // additive constants dropped
    double log_z = 0.0;
    double mean_w = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
    OrderParameters order_params;
};

/// Mean field W(P) assembled from the kernel coefficients and the moments by
/// the tensor-contraction identity (one contraction per kernel monomial; no
/// doubled diagonal terms).
class MeanField {
public:
    MeanField(const KernelPolynomial& kp, const MomentSet& m);

    double operator()(const Mat3& P) const;
    double eval_axes(const Vec3& m1, const Vec3& m2) const;

private:
    double w0_ = 0.0;
    Vec3 v_ = Vec3::Zero();
    Mat3 A_ = Mat3::Zero();  // m1' A m1
    Mat3 B_ = Mat3::Zero();  // m2' B m2
    bool cubic_ = false;
    double c5_ = 0.0, c6_ = 0.0, c7_ = 0.0, c8_ = 0.0;
    Tensor3 T111_{}, T122_{};
};

/// Boltzmann closure: f = exp(-W)/Z on the quadrature; returns the moments of
/// f and log Z (W shifted by its minimum before exponentiating).
std::pair<MomentSet, double> boltzmann_moments(const std::function<double(const Mat3&)>& W,
                                               const SO3Quadrature& quad, bool cubic);

/// Damped fixed-point iteration m <- (1-l) m + l Phi(m) with
/// Phi = boltzmann_moments(mean_field(kp, .)). Returns the best iterate.
SolutionBranch scf_solve(const KernelPolynomial& kp, const SCFConfig& config,
                         const SO3Quadrature& quad);

/// (1/2) sum_i c_i <q_i contraction> recomputed from the moments alone.
double interaction_energy_from_moments(const KernelPolynomial& kp, const MomentSet& m);

/// -log Z - <W> + (1/2)(moment contraction); equals int f log f + (1/2)
/// int int f G f at a fixed point, with F0/c + kBT log c dropped.
double free_energy(const KernelPolynomial& kp, const SolutionBranch& branch,
                   const SO3Quadrature& quad);

// ---- reduced solver on S^2 --------------------------------------------------

struct S2Branch {
    Vec3 n1 = Vec3::Zero();
    Mat3 Qnn = Mat3::Identity() / 3.0;
    double residual = 0.0;
    bool converged = false;
};

/// Fixed-point solver on the sphere for kernels that depend on p11 only
/// (Dinf_h / Cinf). Throws for other symmetry classes.
S2Branch s2_scf_solve(const KernelPolynomial& kp, const S2Quadrature& quad, double damping,
                      double tol, int max_iter, SeedPreset seed = SeedPreset::UniaxialSeed);

// ---- theorem validation ------------------------------------------------------

struct TheoremChecks {
    // (a) Maier-Saupe solutions are uniaxial
    bool a_applicable = false, a_pass = false;
    double a_eig_gap = 0.0;
    // (b) -c1 <= 1 implies <m1> = 0
    bool b_applicable = false, b_pass = false;
    double b_m1_norm = 0.0;
    // (c) commuting M11, M22 implies m1 along an eigenvector
    bool c_applicable = false, c_pass = false;
    double c_misalign = 0.0;
    // (d) c4^2 = c2 c3 and c1 >= -1 imply commuting second moments
    bool d_applicable = false, d_pass = false;
    double d_commutator = 0.0;
    // (e) f(P) = f(P T) for generators of the shape group
    bool e_pass = false;
    double e_max_dev = 0.0;
};

TheoremChecks validate_theorems(const KernelPolynomial& kp, const SolutionBranch& branch,
                                const SO3Quadrature& quad);

// ---- branch sweeps -----------------------------------------------------------

struct SweepBranch {
    double param = 0.0;
    SeedPreset seed = SeedPreset::Isotropic;
    SolutionBranch branch;
};

/// Solves from every preset plus continuation from the previous parameter
/// value; deduplicates by canonicalized moment distance < 1e-4.
std::vector<SweepBranch> branch_sweep(const std::function<KernelPolynomial(double)>& family,
                                      const std::vector<double>& grid, const SCFConfig& config,
                                      const SO3Quadrature& quad);

/// Rotates the moments into the eigenframe of M11 (ties broken by M22) with
/// deterministic sign conventions; used for branch identity.
MomentSet canonicalize_moments(const MomentSet& m);

}  // namespace lcdft
