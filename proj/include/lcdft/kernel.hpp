#pragma once

#include "lcdft/shapes.hpp"
#include "lcdft/so3.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lcdft {

enum class SymmetryClass { Dinf_h, Cinf, C2v_quadratic, C2v_cubic };

std::string to_string(SymmetryClass c);
SymmetryClass symmetry_class_from_string(const std::string& s);

/// One monomial coeff * prod p_{ij}^e in the entries of the relative rotation.
struct Monomial {
    struct Factor {
        int i, j, e;
    };
    double coeff = 1.0;
    std::vector<Factor> factors;

    double eval(const Mat3& p_bar) const;
};

/// A basis term is a (short) sum of monomials, e.g. p12^2 + p21^2.
struct BasisFunction {
    std::string name;
    std::vector<Monomial> monomials;

    double eval(const Mat3& p_bar) const;
};

struct MonomialBasis {
    SymmetryClass symmetry_class = SymmetryClass::Dinf_h;
    std::vector<BasisFunction> terms;

    std::size_t size() const { return terms.size(); }
};

MonomialBasis build_basis(SymmetryClass c);

enum class Provenance { Projected, Analytic, Manual };

struct KernelParams {
    double c = 1.0;   // concentration (coefficients store c-multiplied values)
    double L = 0.0;
    double D = 0.0;
    double theta = 0.0;
    double T = 0.0;
};

struct KernelPolynomial {
    MonomialBasis basis;
    std::vector<double> coeffs;
    Provenance provenance = Provenance::Manual;
    KernelParams params;

    double eval(const Mat3& p_bar) const;

    static KernelPolynomial manual(SymmetryClass c, std::vector<double> coeffs);
};

/// Coefficient of term `name` or 0 when absent.
double coeff_of(const KernelPolynomial& kp, const std::string& name);

struct ProjectionReport {
    std::vector<std::vector<double>> gram;
    std::vector<double> rhs;
    std::vector<double> coeffs;
    double residual_l2 = 0.0;  // L2(dnu) error of the fitted polynomial
};

/// Least-squares projection of G onto the basis under the Haar measure.
/// Throws std::runtime_error on a singular Gram system.
ProjectionReport project_kernel(const std::function<double(const Mat3&)>& G,
                                const MonomialBasis& basis, const SO3Quadrature& quad);

KernelPolynomial projected_kernel(const std::function<double(const Mat3&)>& G, SymmetryClass c,
                                  const SO3Quadrature& quad, const KernelParams& params);

/// Closed forms for the quadratic spherotriangle coefficients; c1 comes from
/// the Monte Carlo K(theta) (empirically ~0 at all apex angles).
///
/// The classic closed forms correspond to a kernel whose pure-volume term
/// enters with twice the convex volume (the six-term mixed-product sum taken
/// with a 1/2 instead of the correct 1/4 prism factor). c2..c4 reproduce
/// exactly the projection of that kernel; c2_exact..c4_exact halve the L^3
/// share and match the projection of the hull-exact excluded volume.
struct SpheroTriCoeffs {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    double c2_exact = 0.0, c3_exact = 0.0, c4_exact = 0.0;
    double c1_stderr = 0.0;
    double k_theta = 0.0;
};

SpheroTriCoeffs analytic_spherotriangle_coeffs(double theta, double L, double D, double c,
                                               long ktheta_samples = 2'000'000,
                                               std::uint64_t ktheta_seed = 1);

/// The classic k0..k3 moment expressions, evaluated bit-for-bit. They feed
/// the combination identities c2 = 5(4k1+4k2+k3-3k0), c3, c4; see
/// SpheroTriCoeffs for the volume-normalization caveat.
std::array<double, 4> k_moments(double theta, double L, double D, double c);

// ---- Table of projection integrals int dnu p_ij^2 * f(P) -------------------

inline constexpr int kTable1Rows = 14;

enum class Table1Moment { p11 = 0, p22 = 1, p12 = 2, p21 = 3 };

struct Table1RowInfo {
    std::string label;        // as printed
    bool labeled_as_dot;      // '.' in the printed label
    bool resolved_cross;      // integrand kind that matches the printed values
};

Table1RowInfo table1_row_info(int term_id);

/// Tabulated closed-form value of the (term, moment) entry at apex angle theta.
double table1_entry(int term_id, Table1Moment moment, double theta);

/// Independent quadrature oracle: reduces the integrand to q11 by a pair of
/// fixed rotations, then integrates |cos a| (split at the kink) or sin a
/// exactly in alpha with Gauss-Legendre and periodic grids in beta, gamma.
double table1_oracle(int term_id, Table1Moment moment, double theta, bool cross_kind,
                     int n_alpha = 64, int n_bg = 32);

/// Monte Carlo confirmation of the same integral.
double table1_mc(int term_id, Table1Moment moment, double theta, bool cross_kind, long n_samples,
                 std::uint64_t seed, double* stderr_out = nullptr);

// ---- K(theta) ---------------------------------------------------------------

struct KThetaResult {
    double value = 0.0;
    double stderr_ = 0.0;
    long n_samples = 0;
};

/// Monte Carlo estimate of the 18-branch indicator sum weighted by p11.
/// Samples with an exactly vanishing gating product are redrawn.
KThetaResult k_theta(double theta, long n_samples, std::uint64_t seed);

// ---- symmetry checks --------------------------------------------------------

struct SymmetryReport {
    double max_right = 0.0;  // max |G(P T) - G(P)|
    double max_left = 0.0;   // max |G(T P) - G(P)|
    double max_conj = 0.0;   // max |G(J P J) - G(P)|
    bool pass = false;
};

SymmetryReport verify_kernel_symmetry(const std::function<double(const Mat3&)>& G,
                                      const SymmetryGroup& group, const SO3Quadrature& quad,
                                      double tol, int max_samples = 200);

}  // namespace lcdft
