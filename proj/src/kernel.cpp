#include "lcdft/kernel.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lcdft {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

std::string to_string(SymmetryClass c) {
    switch (c) {
        case SymmetryClass::Dinf_h: return "Dinf_h";
        case SymmetryClass::Cinf: return "Cinf";
        case SymmetryClass::C2v_quadratic: return "C2v_quadratic";
        case SymmetryClass::C2v_cubic: return "C2v_cubic";
    }
    return "?";
}

SymmetryClass symmetry_class_from_string(const std::string& s) {
    if (s == "Dinf_h") return SymmetryClass::Dinf_h;
    if (s == "Cinf") return SymmetryClass::Cinf;
    if (s == "C2v_quadratic") return SymmetryClass::C2v_quadratic;
    if (s == "C2v_cubic") return SymmetryClass::C2v_cubic;
    throw std::invalid_argument("unknown symmetry class: " + s);
}

double Monomial::eval(const Mat3& p) const {
    double v = coeff;
    for (const Factor& f : factors) {
        double b = p(f.i, f.j);
        for (int k = 0; k < f.e; ++k) v *= b;
    }
    return v;
}

double BasisFunction::eval(const Mat3& p) const {
    double v = 0.0;
    for (const Monomial& m : monomials) v += m.eval(p);
    return v;
}

namespace {
BasisFunction one() { return {"1", {Monomial{1.0, {}}}}; }
BasisFunction p11() { return {"p11", {Monomial{1.0, {{0, 0, 1}}}}}; }
BasisFunction p11sq() { return {"p11^2", {Monomial{1.0, {{0, 0, 2}}}}}; }
BasisFunction p22sq() { return {"p22^2", {Monomial{1.0, {{1, 1, 2}}}}}; }
BasisFunction p12p21sq() {
    return {"p12^2+p21^2", {Monomial{1.0, {{0, 1, 2}}}, Monomial{1.0, {{1, 0, 2}}}}};
}
BasisFunction p11cu() { return {"p11^3", {Monomial{1.0, {{0, 0, 3}}}}}; }
BasisFunction p11p22sq() { return {"p11*p22^2", {Monomial{1.0, {{0, 0, 1}, {1, 1, 2}}}}}; }
BasisFunction p11p12p21sq() {
    return {"p11*(p12^2+p21^2)",
            {Monomial{1.0, {{0, 0, 1}, {0, 1, 2}}}, Monomial{1.0, {{0, 0, 1}, {1, 0, 2}}}}};
}
BasisFunction p12p21p22() {
    return {"p12*p21*p22", {Monomial{1.0, {{0, 1, 1}, {1, 0, 1}, {1, 1, 1}}}}};
}
}  // namespace

MonomialBasis build_basis(SymmetryClass c) {
    MonomialBasis b;
    b.symmetry_class = c;
    switch (c) {
        case SymmetryClass::Dinf_h:
            b.terms = {one(), p11sq()};
            break;
        case SymmetryClass::Cinf:
            b.terms = {one(), p11(), p11sq()};
            break;
        case SymmetryClass::C2v_quadratic:
            b.terms = {one(), p11(), p11sq(), p22sq(), p12p21sq()};
            break;
        case SymmetryClass::C2v_cubic:
            b.terms = {one(),   p11(),      p11sq(),       p22sq(),      p12p21sq(),
                       p11cu(), p11p22sq(), p11p12p21sq(), p12p21p22()};
            break;
    }
    return b;
}

double KernelPolynomial::eval(const Mat3& p_bar) const {
    double v = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * basis.terms[i].eval(p_bar);
    return v;
}

KernelPolynomial KernelPolynomial::manual(SymmetryClass c, std::vector<double> coeffs) {
    KernelPolynomial kp;
    kp.basis = build_basis(c);
    if (coeffs.size() != kp.basis.size())
        throw std::invalid_argument("KernelPolynomial: coefficient count mismatch");
    kp.coeffs = std::move(coeffs);
    kp.provenance = Provenance::Manual;
    return kp;
}

double coeff_of(const KernelPolynomial& kp, const std::string& name) {
    for (std::size_t i = 0; i < kp.basis.size(); ++i)
        if (kp.basis.terms[i].name == name) return kp.coeffs[i];
    return 0.0;
}

ProjectionReport project_kernel(const std::function<double(const Mat3&)>& G,
                                const MonomialBasis& basis, const SO3Quadrature& quad) {
    const int n = static_cast<int>(basis.size());
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd q(n);
    double g2 = 0.0;
    for (std::size_t k = 0; k < quad.size(); ++k) {
        const Mat3& P = quad.nodes[k];
        const double w = quad.weights[k];
        for (int i = 0; i < n; ++i) q[i] = basis.terms[i].eval(P);
        const double g = G(P);
        gram.noalias() += w * q * q.transpose();
        rhs.noalias() += (w * g) * q;
        g2 += w * g * g;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    lu.setThreshold(1e-10);
    if (lu.rank() < n)
        throw std::runtime_error("project_kernel: singular Gram matrix (duplicate basis terms?)");
    Eigen::VectorXd coef = lu.solve(rhs);
    ProjectionReport rep;
    rep.gram.assign(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rep.gram[i][j] = gram(i, j);
    rep.rhs.assign(rhs.data(), rhs.data() + n);
    rep.coeffs.assign(coef.data(), coef.data() + n);
    // ||G - proj||^2 = <G,G> - 2 c.rhs + c.Gram.c
    const double r2 = g2 - 2.0 * coef.dot(rhs) + coef.dot(gram * coef);
    rep.residual_l2 = std::sqrt(std::max(0.0, r2));
    return rep;
}

KernelPolynomial projected_kernel(const std::function<double(const Mat3&)>& G, SymmetryClass c,
                                  const SO3Quadrature& quad, const KernelParams& params) {
    KernelPolynomial kp;
    kp.basis = build_basis(c);
    kp.coeffs = project_kernel(G, kp.basis, quad).coeffs;
    kp.provenance = Provenance::Projected;
    kp.params = params;
    return kp;
}

std::array<double, 4> k_moments(double theta, double L, double D, double c) {
    const double s = std::sin(theta / 2.0), co = std::cos(theta / 2.0), st = std::sin(theta);
    const double s2 = s * s, co2 = co * co, s4 = s2 * s2, co4 = co2 * co2;
    const double L3 = L * L * L, L2D = L * L * D;
    const double threeC = 0.25 * L2D * st + D * D * L * (1.0 + s) + 4.0 / 3.0 * kPi * D * D * D;
    const double C = threeC / 3.0;
    const double k0 = 0.5 * (0.25 * c * L3 * st * (1.0 + s) +
                             kPi / 4.0 * c * L2D * (1.0 + s) * (1.0 + s) + threeC);
    const double k1 =
        0.5 * (c * L3 * st * (2.0 * co2 + 3.0 * s2 + 3.0 * s) / 32.0 +
               kPi / 64.0 * c * L2D *
                   (4.0 * co4 + 5.0 * s4 + 12.0 * s2 * co2 + 2.0 * s * (6.0 * co2 + 5.0 * s2) +
                    5.0 * s2) +
               C);
    const double k2 =
        0.5 * (c * L3 * st * (5.0 + 5.0 * s) / 64.0 +
               kPi / 64.0 * c * L2D *
                   (6.0 * co4 + 6.0 * s4 + 9.0 * s2 * co2 + s * (9.0 * co2 + 12.0 * s2) +
                    6.0 * s2) +
               C);
    const double k3 =
        0.5 * (c * L3 * st * (3.0 * co2 + 2.0 * s2 + 2.0 * s) / 32.0 +
               kPi / 64.0 * c * L2D *
                   (5.0 * co4 + 4.0 * s4 + 12.0 * s2 * co2 + 2.0 * s * (6.0 * co2 + 4.0 * s2) +
                    4.0 * s2) +
               C);
    return {k0, k1, k2, k3};
}

SpheroTriCoeffs analytic_spherotriangle_coeffs(double theta, double L, double D, double c,
                                               long ktheta_samples, std::uint64_t ktheta_seed) {
    if (!(theta > 0.0 && theta < kPi))
        throw std::invalid_argument("analytic_spherotriangle_coeffs: theta must be in (0, pi)");
    const double s = std::sin(theta / 2.0), co = std::cos(theta / 2.0), st = std::sin(theta);
    SpheroTriCoeffs r;
    const double v2 = -15.0 / 64.0 * c * L * L * L * st * co * co;  // L^3 (volume) shares
    const double v3 = -15.0 / 64.0 * c * L * L * L * st * s * (1.0 + s);
    const double v4 = -15.0 / 128.0 * c * L * L * L * st * (1.0 + s);
    const double a2 = -15.0 * kPi / 128.0 * c * L * L * D * co * co * co * co;  // L^2 D shares
    const double a3 = -15.0 * kPi / 128.0 * c * L * L * D * s * s * (1.0 + s) * (1.0 + s);
    const double a4 = -15.0 * kPi / 128.0 * c * L * L * D * co * co * s * (1.0 + s);
    r.c2 = v2 + a2;
    r.c3 = v3 + a3;
    r.c4 = v4 + a4;
    r.c2_exact = 0.5 * v2 + a2;
    r.c3_exact = 0.5 * v3 + a3;
    r.c4_exact = 0.5 * v4 + a4;
    const KThetaResult k = k_theta(theta, ktheta_samples, ktheta_seed);
    r.k_theta = k.value;
    r.c1 = 3.0 / 8.0 * c * L * L * D * k.value;
    r.c1_stderr = 3.0 / 8.0 * c * L * L * D * k.stderr_;
    return r;
}

// ---- Table 1 ---------------------------------------------------------------

namespace {

struct RowSpec {
    const char* label;
    // integrand |e . P e'| or |e x P e'|; e in the frame of molecule 1,
    // ep in the body frame of molecule 2
    int e_id;    // 0: e_a, 1: e_b, 2: e_c, 3: m3
    int ep_id;
    bool labeled_dot;
    bool resolved_cross;
};

constexpr RowSpec kRows[kTable1Rows] = {
    {"|m'3.e_a|", 0, 3, true, false},  {"|m'3.e_b|", 1, 3, true, false},
    {"|m'3.e_c|", 2, 3, true, false},  {"|m3.e'_a|", 3, 0, true, false},
    {"|m3.e'_b|", 3, 1, true, false},  {"|m3.e'_c|", 3, 2, true, false},
    {"|e_a x e'_a|", 0, 0, false, true}, {"|e_a x e'_b|", 0, 1, false, true},
    {"|e_a . e'_c|", 0, 2, true, true},  {"|e_b x e'_a|", 1, 0, false, true},
    {"|e_b x e'_b|", 1, 1, false, true}, {"|e_b . e'_c|", 1, 2, true, true},
    {"|e_c . e'_a|", 2, 0, true, true},  {"|e_c . e'_c|", 2, 2, true, true},
};

Vec3 row_vector(int id, double theta) {
    const double t2 = theta / 2.0;
    switch (id) {
        case 0: return Vec3(std::cos(t2), std::sin(t2), 0.0);   // e_a
        case 1: return Vec3(-std::cos(t2), std::sin(t2), 0.0);  // e_b
        case 2: return Vec3(0.0, -1.0, 0.0);                    // e_c
        default: return Vec3(0.0, 0.0, 1.0);                    // m3
    }
}

std::pair<int, int> moment_index(Table1Moment m) {
    switch (m) {
        case Table1Moment::p11: return {0, 0};
        case Table1Moment::p22: return {1, 1};
        case Table1Moment::p12: return {0, 1};
        default: return {1, 0};
    }
}

Mat3 rotation_taking_x_to(const Vec3& e) {
    const Vec3 x = Vec3::UnitX();
    const Vec3 w = x.cross(e);
    const double c = x.dot(e);
    if (w.norm() < 1e-14) {
        if (c > 0.0) return Mat3::Identity();
        Mat3 m = Mat3::Identity();
        m(0, 0) = -1.0;
        m(1, 1) = -1.0;  // pi about z
        return m;
    }
    const Mat3 K = (Mat3() << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0).finished();
    return Mat3::Identity() + K + K * K * ((1.0 - c) / w.squaredNorm());
}

}  // namespace

Table1RowInfo table1_row_info(int term_id) {
    if (term_id < 0 || term_id >= kTable1Rows)
        throw std::invalid_argument("table1_row_info: bad term id");
    const RowSpec& r = kRows[term_id];
    return {r.label, r.labeled_dot, r.resolved_cross};
}

double table1_entry(int term_id, Table1Moment moment, double theta) {
    if (term_id < 0 || term_id >= kTable1Rows)
        throw std::invalid_argument("table1_entry: bad term id");
    const double co2 = std::pow(std::cos(theta / 2.0), 2);
    const double s2 = std::pow(std::sin(theta / 2.0), 2);
    const double co4 = co2 * co2, s4 = s2 * s2;
    const int m = static_cast<int>(moment);
    auto pick = [&](double v11, double v22, double v12, double v21) {
        const double vals[4] = {v11, v22, v12, v21};
        return vals[m];
    };
    const double cross_ab = kPi * (co4 / 16.0 + 5.0 * s4 / 64.0 + 3.0 * s2 * co2 / 16.0);
    switch (term_id) {
        case 0:
        case 1:
            return pick(co2 / 8 + 3 * s2 / 16, 3 * co2 / 16 + s2 / 8, co2 / 8 + 3 * s2 / 16,
                        3 * co2 / 16 + s2 / 8);
        case 2: return pick(3.0 / 16, 1.0 / 8, 3.0 / 16, 1.0 / 8);
        case 3:
        case 4:
            return pick(co2 / 8 + 3 * s2 / 16, 3 * co2 / 16 + s2 / 8, 3 * co2 / 16 + s2 / 8,
                        co2 / 8 + 3 * s2 / 16);
        case 5: return pick(3.0 / 16, 1.0 / 8, 1.0 / 8, 3.0 / 16);
        case 6:
        case 7:
        case 9:
        case 10: return cross_ab;
        case 8:
        case 11:
            return pick(kPi * (3 * co2 / 32 + 5 * s2 / 64), kPi * (3 * co2 / 32 + s2 / 16),
                        kPi * (co2 / 16 + 3 * s2 / 32), kPi * (5 * co2 / 64 + 3 * s2 / 32));
        case 12:
            return pick(kPi * (3 * co2 / 32 + 5 * s2 / 64), kPi * (3 * co2 / 32 + s2 / 16),
                        kPi * (5 * co2 / 64 + 3 * s2 / 32), kPi * (co2 / 16 + 3 * s2 / 32));
        default:
            return pick(5 * kPi / 64, kPi / 16, 3 * kPi / 32, 3 * kPi / 32);
    }
}

double table1_oracle(int term_id, Table1Moment moment, double theta, bool cross_kind, int n_alpha,
                     int n_bg) {
    const RowSpec& row = kRows[term_id];
    const Mat3 S1 = rotation_taking_x_to(row_vector(row.e_id, theta));
    const Mat3 S2 = rotation_taking_x_to(row_vector(row.ep_id, theta));
    const auto [mi, mj] = moment_index(moment);

    std::vector<double> x, w;
    gauss_legendre(n_alpha, x, w);
    auto segment = [&](double a, double b) {
        double total = 0.0;
        for (int i = 0; i < n_alpha; ++i) {
            const double alpha = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
            const double wa = 0.5 * (b - a) * w[i];
            const double h = cross_kind ? std::sin(alpha) : std::abs(std::cos(alpha));
            double avg = 0.0;
            for (int j = 0; j < n_bg; ++j) {
                const double beta = kTwoPi * j / n_bg;
                for (int k = 0; k < n_bg; ++k) {
                    const double gamma = kTwoPi * k / n_bg;
                    const Mat3 Q = euler_to_matrix({alpha, beta, gamma}).matrix();
                    const Mat3 P = S1 * Q * S2.transpose();
                    avg += P(mi, mj) * P(mi, mj);
                }
            }
            avg /= static_cast<double>(n_bg) * n_bg;
            total += wa * std::sin(alpha) * h * avg;
        }
        return total / 2.0;  // sin(a) da db dg / (8 pi^2) with uniform b,g grids
    };
    if (cross_kind) return segment(0.0, kPi);
    return segment(0.0, kPi / 2.0) + segment(kPi / 2.0, kPi);  // kink of |cos a| at pi/2
}

double table1_mc(int term_id, Table1Moment moment, double theta, bool cross_kind, long n_samples,
                 std::uint64_t seed, double* stderr_out) {
    const RowSpec& row = kRows[term_id];
    const Vec3 e = row_vector(row.e_id, theta);
    const Vec3 ep = row_vector(row.ep_id, theta);
    const auto [mi, mj] = moment_index(moment);
    Rng rng(seed);
    double sum = 0.0, sum2 = 0.0;
    for (long k = 0; k < n_samples; ++k) {
        const Mat3 P = rng.haar_rotation();
        const Vec3 epl = P * ep;
        const double f = cross_kind ? e.cross(epl).norm() : std::abs(e.dot(epl));
        const double v = P(mi, mj) * P(mi, mj) * f;
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n_samples;
    if (stderr_out) {
        const double var = std::max(0.0, sum2 / n_samples - mean * mean);
        *stderr_out = std::sqrt(var / n_samples);
    }
    return mean;
}

// ---- K(theta) ---------------------------------------------------------------

namespace {

// 18 gating branches: (primed pair, primed third, unprimed pair, unprimed
// third, intersecting-case I-keys, disjoint-case I-keys). Key digits index
// {a, b, c}. Transcribed from the printed bracket; with edge unit vectors
// taken along T2 (not -T2), the intersecting sums are gated on pred > 0.
struct KBranch {
    int pp0, pp1, zp;
    int up0, up1, zu;
    std::array<int, 5> inter;  // pairs packed as 3*x + y; -1 padding
    std::array<int, 5> disj;
};

constexpr int pk(int x, int y) { return 3 * x + y; }

const KBranch kBranches[9] = {
    {0, 1, 2, 0, 1, 2, {pk(0,0), pk(0,1), pk(1,0), pk(1,1), pk(2,2)}, {pk(0,2), pk(1,2), pk(2,0), pk(2,1), -1}},
    {1, 2, 0, 0, 1, 2, {pk(0,1), pk(0,2), pk(1,1), pk(1,2), pk(2,0)}, {pk(0,0), pk(1,0), pk(2,1), pk(2,2), -1}},
    {2, 0, 1, 0, 1, 2, {pk(0,2), pk(0,0), pk(1,2), pk(1,0), pk(2,1)}, {pk(0,1), pk(1,1), pk(2,2), pk(2,0), -1}},
    {0, 1, 2, 1, 2, 0, {pk(1,0), pk(1,1), pk(2,0), pk(2,1), pk(0,2)}, {pk(1,2), pk(2,2), pk(0,0), pk(0,1), -1}},
    {1, 2, 0, 1, 2, 0, {pk(1,1), pk(1,2), pk(2,1), pk(2,2), pk(0,0)}, {pk(1,0), pk(2,0), pk(0,1), pk(0,2), -1}},
    {2, 0, 1, 1, 2, 0, {pk(1,2), pk(1,0), pk(2,2), pk(2,0), pk(0,1)}, {pk(1,1), pk(2,1), pk(0,2), pk(0,0), -1}},
    {0, 1, 2, 2, 0, 1, {pk(2,0), pk(2,1), pk(0,0), pk(0,1), pk(1,2)}, {pk(2,2), pk(0,2), pk(1,0), pk(1,1), -1}},
    {1, 2, 0, 2, 0, 1, {pk(2,1), pk(2,2), pk(0,1), pk(0,2), pk(1,0)}, {pk(2,0), pk(0,0), pk(1,1), pk(1,2), -1}},
    {2, 0, 1, 2, 0, 1, {pk(2,2), pk(2,0), pk(0,2), pk(0,0), pk(1,1)}, {pk(2,1), pk(0,1), pk(1,2), pk(1,0), -1}},
};

}  // namespace

KThetaResult k_theta(double theta, long n_samples, std::uint64_t seed) {
    if (n_samples < 1'000'000) throw std::invalid_argument("k_theta: need at least 1e6 samples");
    const double t2 = theta / 2.0;
    const double s = std::sin(t2);
    const std::array<Vec3, 3> e{Vec3(std::cos(t2), std::sin(t2), 0.0),
                                Vec3(-std::cos(t2), std::sin(t2), 0.0), Vec3(0.0, -1.0, 0.0)};
    const std::array<double, 3> sc{1.0, 1.0, 2.0 * s};
    Rng rng(seed);
    double sum = 0.0, sum2 = 0.0;
    long done = 0;
    while (done < n_samples) {
        const Mat3 P = rng.haar_rotation();
        std::array<Vec3, 3> epl;
        for (int i = 0; i < 3; ++i) epl[i] = P * e[i];
        const Vec3 m3p = P.col(2);
        std::array<double, 3> de;   // m3p . e_x
        std::array<double, 3> dep;  // m3 . (P e'_x)
        bool tie = false;
        for (int i = 0; i < 3; ++i) {
            de[i] = m3p.dot(e[i]);
            dep[i] = epl[i].z();
            if (de[i] == 0.0 || dep[i] == 0.0) tie = true;
        }
        if (tie) continue;  // measure-zero gating tie: redraw
        std::array<double, 9> Ix;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) Ix[pk(x, y)] = sc[x] * sc[y] * e[x].cross(epl[y]).norm();
        double out = 0.0;
        for (const KBranch& br : kBranches) {
            const double g1 = dep[br.pp0] * dep[br.pp1];
            const double g2 = de[br.up0] * de[br.up1];
            if (g1 <= 0.0 || g2 <= 0.0) continue;
            const double pred = dep[br.zp] * de[br.zu];
            const auto& keys = pred > 0.0 ? br.inter : br.disj;
            for (int kk : keys)
                if (kk >= 0) out += Ix[kk];
        }
        const double v = P(0, 0) * out;
        sum += v;
        sum2 += v * v;
        ++done;
    }
    KThetaResult r;
    r.value = sum / n_samples;
    const double var = std::max(0.0, sum2 / n_samples - r.value * r.value);
    r.stderr_ = std::sqrt(var / n_samples);
    r.n_samples = n_samples;
    return r;
}

SymmetryReport verify_kernel_symmetry(const std::function<double(const Mat3&)>& G,
                                      const SymmetryGroup& group, const SO3Quadrature& quad,
                                      double tol, int max_samples) {
    SymmetryReport rep;
    std::vector<Mat3> gens = group.generators;
    if (group.continuous_axial) {
        for (const double ang : {0.37, 1.13, 2.71})
            gens.push_back(Rotation::about_axis(Vec3::UnitX(), ang).matrix());
    }
    const std::size_t stride = std::max<std::size_t>(1, quad.size() / max_samples);
    for (std::size_t k = 0; k < quad.size(); k += stride) {
        const Mat3& P = quad.nodes[k];
        const double g0 = G(P);
        for (const Mat3& T : gens) {
            rep.max_right = std::max(rep.max_right, std::abs(G(P * T) - g0));
            rep.max_left = std::max(rep.max_left, std::abs(G(T * P) - g0));
        }
        for (const Mat3& J : group.mirror_js)
            rep.max_conj = std::max(rep.max_conj, std::abs(G(J * P * J) - g0));
    }
    rep.pass = rep.max_right <= tol && rep.max_left <= tol && rep.max_conj <= tol;
    return rep;
}

}  // namespace lcdft
