#include "lcdft/scf.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcdft {

namespace {

inline int tix(int i, int j, int k) { return 9 * i + 3 * j + k; }

double contract3(const Tensor3& T, const Vec3& u, const Vec3& v, const Vec3& w) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) s += T[tix(i, j, k)] * u[i] * v[j] * w[k];
    return s;
}

double dot27(const Tensor3& a, const Tensor3& b) {
    double s = 0.0;
    for (int i = 0; i < 27; ++i) s += a[i] * b[i];
    return s;
}

bool needs_third(const KernelPolynomial& kp) {
    return kp.basis.symmetry_class == SymmetryClass::C2v_cubic;
}

Eigen::SelfAdjointEigenSolver<Mat3> eig_sym(const Mat3& M) {
    return Eigen::SelfAdjointEigenSolver<Mat3>(0.5 * (M + M.transpose()));
}

}  // namespace

MomentSet MomentSet::isotropic(bool cubic) {
    MomentSet m;
    m.has_third = cubic;
    return m;  // tensors are zero under the Haar measure
}

bool MomentSet::invariants_ok(double tol, std::string* why) const {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (std::abs(M11.trace() - 1.0) > tol) return fail("trace(M11) != 1");
    if (std::abs(M22.trace() - 1.0) > tol) return fail("trace(M22) != 1");
    if (m1.norm() > 1.0 + tol) return fail("|m1| > 1");
    if (eig_sym(M11).eigenvalues().minCoeff() < -tol) return fail("M11 not PSD");
    if (eig_sym(M22).eigenvalues().minCoeff() < -tol) return fail("M22 not PSD");
    if (eig_sym(M11 - m1 * m1.transpose()).eigenvalues().minCoeff() < -tol)
        return fail("M11 - m1 m1' not PSD");
    return true;
}

double moment_distance(const MomentSet& a, const MomentSet& b) {
    double d = (a.m1 - b.m1).cwiseAbs().maxCoeff();
    d = std::max(d, (a.M11 - b.M11).cwiseAbs().maxCoeff());
    d = std::max(d, (a.M22 - b.M22).cwiseAbs().maxCoeff());
    if (a.has_third && b.has_third) {
        for (int i = 0; i < 27; ++i) {
            d = std::max(d, std::abs(a.T111[i] - b.T111[i]));
            d = std::max(d, std::abs(a.T122[i] - b.T122[i]));
        }
    }
    return d;
}

std::string to_string(SeedPreset s) {
    switch (s) {
        case SeedPreset::Isotropic: return "isotropic";
        case SeedPreset::UniaxialSeed: return "uniaxial";
        case SeedPreset::BiaxialSeed: return "biaxial";
        case SeedPreset::PolarSeed: return "polar";
    }
    return "?";
}

SeedPreset seed_preset_from_string(const std::string& s) {
    if (s == "isotropic") return SeedPreset::Isotropic;
    if (s == "uniaxial") return SeedPreset::UniaxialSeed;
    if (s == "biaxial") return SeedPreset::BiaxialSeed;
    if (s == "polar") return SeedPreset::PolarSeed;
    throw std::invalid_argument("unknown seed preset: " + s);
}

MomentSet seed_moments(SeedPreset preset, bool cubic) {
    // Ordered seeds point along e1, the axis the cos(alpha) Gauss rule
    // resolves spectrally; physics is rotation covariant.
    MomentSet m = MomentSet::isotropic(cubic);
    const double third = 1.0 / 3.0;
    switch (preset) {
        case SeedPreset::Isotropic: break;
        case SeedPreset::UniaxialSeed:
            m.M11 = Vec3(third + 0.2, third - 0.1, third - 0.1).asDiagonal();
            m.M22 = Vec3(third - 0.1, third + 0.05, third + 0.05).asDiagonal();
            break;
        case SeedPreset::BiaxialSeed:
            m.M11 = Vec3(0.55, 0.25, 0.20).asDiagonal();
            m.M22 = Vec3(0.20, 0.45, 0.35).asDiagonal();
            break;
        case SeedPreset::PolarSeed:
            m.M11 = Vec3(third + 0.2, third - 0.1, third - 0.1).asDiagonal();
            m.M22 = Vec3(third - 0.1, third + 0.05, third + 0.05).asDiagonal();
            m.m1 = Vec3(0.3, 0.0, 0.0);
            break;
    }
    return m;
}

OrderParameters order_parameters(const MomentSet& m) {
    OrderParameters op;
    const auto e1 = eig_sym(m.M11);
    const auto e2 = eig_sym(m.M22);
    for (int i = 0; i < 3; ++i) {
        op.m11_eigs[i] = e1.eigenvalues()[2 - i];  // descending
        op.m22_eigs[i] = e2.eigenvalues()[2 - i];
    }
    op.m1_norm = m.m1.norm();
    const Vec3 top = e1.eigenvectors().col(2);
    op.align_cos = op.m1_norm > 1e-12 ? std::abs(top.dot(m.m1)) / op.m1_norm : 1.0;
    return op;
}

MeanField::MeanField(const KernelPolynomial& kp, const MomentSet& m) {
    const SymmetryClass sc = kp.basis.symmetry_class;
    auto c = [&](const char* name) { return coeff_of(kp, name); };
    w0_ = c("1");
    switch (sc) {
        case SymmetryClass::Dinf_h:
            A_ = c("p11^2") * m.M11;
            break;
        case SymmetryClass::Cinf:
            v_ = c("p11") * m.m1;
            A_ = c("p11^2") * m.M11;
            break;
        case SymmetryClass::C2v_cubic:
            cubic_ = true;
            c5_ = c("p11^3");
            c6_ = c("p11*p22^2");
            c7_ = c("p11*(p12^2+p21^2)");
            c8_ = c("p12*p21*p22");
            T111_ = m.T111;
            T122_ = m.T122;
            [[fallthrough]];
        case SymmetryClass::C2v_quadratic:
            v_ = c("p11") * m.m1;
            A_ = c("p11^2") * m.M11 + c("p12^2+p21^2") * m.M22;
            B_ = c("p22^2") * m.M22 + c("p12^2+p21^2") * m.M11;
            break;
    }
}

double MeanField::eval_axes(const Vec3& m1, const Vec3& m2) const {
    double w = w0_ + v_.dot(m1) + m1.dot(A_ * m1) + m2.dot(B_ * m2);
    if (cubic_) {
        // p11^3 -> <m1m1m1> : m1m1m1 ; p11 p22^2 -> <m1m2m2> : m1m2m2
        // p11(p12^2+p21^2) -> <m1m2m2> : m1m1m1 + <m1m1m1> : m1m2m2
        // p12 p21 p22 -> sum T122[j,i,k] m1_i m2_j m2_k
        w += c5_ * contract3(T111_, m1, m1, m1);
        w += c6_ * contract3(T122_, m1, m2, m2);
        w += c7_ * (contract3(T122_, m1, m1, m1) + contract3(T111_, m1, m2, m2));
        double s8 = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) s8 += T122_[tix(j, i, k)] * m1[i] * m2[j] * m2[k];
        w += c8_ * s8;
    }
    return w;
}

double MeanField::operator()(const Mat3& P) const { return eval_axes(P.col(0), P.col(1)); }

std::pair<MomentSet, double> boltzmann_moments(const std::function<double(const Mat3&)>& W,
                                               const SO3Quadrature& quad, bool cubic) {
    const std::size_t n = quad.size();
    std::vector<double> w(n);
    double wmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = W(quad.nodes[k]);
        wmin = std::min(wmin, w[k]);
    }
    if (!std::isfinite(wmin)) throw std::runtime_error("boltzmann_moments: unbounded mean field");
    double z = 0.0;
    MomentSet m;
    m.has_third = cubic;
    m.M11.setZero();
    m.M22.setZero();
    for (std::size_t k = 0; k < n; ++k) {
        const double f = quad.weights[k] * std::exp(-(w[k] - wmin));
        z += f;
        const Vec3 m1 = quad.nodes[k].col(0);
        const Vec3 m2 = quad.nodes[k].col(1);
        m.m1 += f * m1;
        m.M11 += f * m1 * m1.transpose();
        m.M22 += f * m2 * m2.transpose();
        if (cubic) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l) {
                        m.T111[tix(i, j, l)] += f * m1[i] * m1[j] * m1[l];
                        m.T122[tix(i, j, l)] += f * m1[i] * m2[j] * m2[l];
                    }
        }
    }
    m.m1 /= z;
    m.M11 /= z;
    m.M22 /= z;
    if (cubic)
        for (int i = 0; i < 27; ++i) {
            m.T111[i] /= z;
            m.T122[i] /= z;
        }
    const double log_z = std::log(z) - wmin;
    return {m, log_z};
}

SolutionBranch scf_solve(const KernelPolynomial& kp, const SCFConfig& config,
                         const SO3Quadrature& quad) {
    const bool cubic = needs_third(kp);
    MomentSet m = std::holds_alternative<SeedPreset>(config.init)
                      ? seed_moments(std::get<SeedPreset>(config.init), cubic)
                      : std::get<MomentSet>(config.init);
    m.has_third = cubic;

    SolutionBranch best;
    best.residual = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < config.max_iter; ++it) {
        const MeanField W(kp, m);
        MomentSet next;
        double log_z = 0.0;
        try {
            std::tie(next, log_z) = boltzmann_moments(W, quad, cubic);
        } catch (const std::runtime_error&) {
            best.diverged = true;
            break;
        }
        const double res = moment_distance(next, m);
        if (!std::isfinite(res)) {
            best.diverged = true;
            break;
        }
        if (res < best.residual) {
            best.residual = res;
            best.moments = m;
            best.log_z = log_z;
        }
        if (res <= config.tol) {
            best.residual = res;
            best.moments = next;  // certified iterate
            best.log_z = log_z;
            best.converged = true;
            ++it;
            break;
        }
        const double l = config.damping;
        m.m1 = (1 - l) * m.m1 + l * next.m1;
        m.M11 = (1 - l) * m.M11 + l * next.M11;
        m.M22 = (1 - l) * m.M22 + l * next.M22;
        if (cubic)
            for (int i = 0; i < 27; ++i) {
                m.T111[i] = (1 - l) * m.T111[i] + l * next.T111[i];
                m.T122[i] = (1 - l) * m.T122[i] + l * next.T122[i];
            }
    }
    best.iterations = it;
    best.order_params = order_parameters(best.moments);
    if (!best.diverged) best.free_energy = free_energy(kp, best, quad);
    return best;
}

double interaction_energy_from_moments(const KernelPolynomial& kp, const MomentSet& m) {
    auto c = [&](const char* name) { return coeff_of(kp, name); };
    double e = c("1");
    e += c("p11") * m.m1.squaredNorm();
    e += c("p11^2") * (m.M11.array() * m.M11.array()).sum();
    e += c("p22^2") * (m.M22.array() * m.M22.array()).sum();
    e += 2.0 * c("p12^2+p21^2") * (m.M11.array() * m.M22.array()).sum();
    if (kp.basis.symmetry_class == SymmetryClass::C2v_cubic) {
        e += c("p11^3") * dot27(m.T111, m.T111);
        e += c("p11*p22^2") * dot27(m.T122, m.T122);
        e += 2.0 * c("p11*(p12^2+p21^2)") * dot27(m.T111, m.T122);
        double s8 = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k)
                    s8 += m.T122[tix(i, j, k)] * m.T122[tix(j, i, k)];
        e += c("p12*p21*p22") * s8;
    }
    return 0.5 * e;
}

double free_energy(const KernelPolynomial& kp, const SolutionBranch& branch,
                   const SO3Quadrature& quad) {
    const MeanField W(kp, branch.moments);
    const bool cubic = needs_third(kp);
    auto [m, log_z] = boltzmann_moments(W, quad, cubic);
    // <W> over f built from the branch moments
    double mean_w = 0.0, z = 0.0;
    double wmin = std::numeric_limits<double>::infinity();
    std::vector<double> wv(quad.size());
    for (std::size_t k = 0; k < quad.size(); ++k) {
        wv[k] = W(quad.nodes[k]);
        wmin = std::min(wmin, wv[k]);
    }
    for (std::size_t k = 0; k < quad.size(); ++k) {
        const double f = quad.weights[k] * std::exp(-(wv[k] - wmin));
        z += f;
        mean_w += f * wv[k];
    }
    mean_w /= z;
    return -log_z - mean_w + interaction_energy_from_moments(kp, branch.moments);
}

S2Branch s2_scf_solve(const KernelPolynomial& kp, const S2Quadrature& quad, double damping,
                      double tol, int max_iter, SeedPreset seed) {
    const SymmetryClass sc = kp.basis.symmetry_class;
    if (sc != SymmetryClass::Dinf_h && sc != SymmetryClass::Cinf)
        throw std::invalid_argument("s2_scf_solve: kernel is not axially reducible");
    const double c1 = coeff_of(kp, "p11");
    const double c2 = coeff_of(kp, "p11^2");
    S2Branch br;
    const MomentSet m0 = seed_moments(seed, false);
    Vec3 n1 = m0.m1;
    Mat3 Q = m0.M11;
    for (int it = 0; it < max_iter; ++it) {
        Vec3 nn1 = Vec3::Zero();
        Mat3 nQ = Mat3::Zero();
        double z = 0.0;
        double wmin = std::numeric_limits<double>::infinity();
        std::vector<double> wv(quad.size());
        for (std::size_t k = 0; k < quad.size(); ++k) {
            const Vec3& n = quad.nodes[k];
            wv[k] = c1 * n1.dot(n) + c2 * n.dot(Q * n);
            wmin = std::min(wmin, wv[k]);
        }
        for (std::size_t k = 0; k < quad.size(); ++k) {
            const double f = quad.weights[k] * std::exp(-(wv[k] - wmin));
            z += f;
            nn1 += f * quad.nodes[k];
            nQ += f * quad.nodes[k] * quad.nodes[k].transpose();
        }
        nn1 /= z;
        nQ /= z;
        const double res =
            std::max((nn1 - n1).cwiseAbs().maxCoeff(), (nQ - Q).cwiseAbs().maxCoeff());
        br.residual = res;
        if (res <= tol) {
            br.n1 = nn1;
            br.Qnn = nQ;
            br.converged = true;
            return br;
        }
        n1 = (1 - damping) * n1 + damping * nn1;
        Q = (1 - damping) * Q + damping * nQ;
    }
    br.n1 = n1;
    br.Qnn = Q;
    return br;
}

TheoremChecks validate_theorems(const KernelPolynomial& kp, const SolutionBranch& branch,
                                const SO3Quadrature& quad) {
    TheoremChecks t;
    const MomentSet& m = branch.moments;
    const OrderParameters op = order_parameters(m);
    const SymmetryClass sc = kp.basis.symmetry_class;
    const double c1 = coeff_of(kp, "p11");
    const double c2 = coeff_of(kp, "p11^2");
    const double c3 = coeff_of(kp, "p22^2");
    const double c4 = coeff_of(kp, "p12^2+p21^2");

    // (a) Maier-Saupe uniaxiality
    if (sc == SymmetryClass::Dinf_h) {
        t.a_applicable = true;
        t.a_eig_gap = std::min(std::abs(op.m11_eigs[0] - op.m11_eigs[1]),
                               std::abs(op.m11_eigs[1] - op.m11_eigs[2]));
        t.a_pass = t.a_eig_gap < 1e-6;
    }
    // (b) -c1 <= 1 -> <m1> = 0
    if (-c1 <= 1.0 && sc != SymmetryClass::Dinf_h) {
        t.b_applicable = true;
        t.b_m1_norm = op.m1_norm;
        t.b_pass = op.m1_norm < 1e-6;
    }
    // (c) commuting second moments -> m1 along an eigenvector
    const Mat3 comm = m.M11 * m.M22 - m.M22 * m.M11;
    const double comm_norm = comm.cwiseAbs().maxCoeff();
    if (comm_norm < 1e-8) {
        t.c_applicable = true;
        if (op.m1_norm < 1e-10) {
            t.c_misalign = 0.0;
        } else {
            const auto es = Eigen::SelfAdjointEigenSolver<Mat3>(m.M11);
            double best = 1.0;
            for (int i = 0; i < 3; ++i) {
                const double cosang =
                    std::abs(es.eigenvectors().col(i).dot(m.m1)) / op.m1_norm;
                best = std::min(best, std::sqrt(std::max(0.0, 1.0 - cosang * cosang)));
            }
            t.c_misalign = best;
        }
        t.c_pass = t.c_misalign < 1e-6;
    }
    // (d) c4^2 = c2 c3 and c1 >= -1 -> commuting second moments
    const double scale = std::max({std::abs(c2), std::abs(c3), std::abs(c4), 1.0});
    if (std::abs(c4 * c4 - c2 * c3) < 1e-10 * scale * scale && c1 >= -1.0 &&
        (sc == SymmetryClass::C2v_quadratic || sc == SymmetryClass::C2v_cubic)) {
        t.d_applicable = true;
        t.d_commutator = comm_norm;
        t.d_pass = comm_norm < 1e-6;
    }
    // (e) f(P) = f(P T): W(P T) = W(P) for generators of the kernel's group
    {
        const MeanField W(kp, m);
        std::vector<Mat3> gens;
        const Mat3 c2_m1 = Vec3(1, -1, -1).asDiagonal();
        gens.push_back(c2_m1);
        if (sc == SymmetryClass::Dinf_h) {
            gens.push_back(Vec3(-1, -1, 1).asDiagonal());
            gens.push_back(Rotation::about_axis(Vec3::UnitX(), 0.91).matrix());
        }
        double scale_w = 1.0;
        const std::size_t stride = std::max<std::size_t>(1, quad.size() / 128);
        for (std::size_t k = 0; k < quad.size(); k += stride)
            scale_w = std::max(scale_w, std::abs(W(quad.nodes[k])));
        for (std::size_t k = 0; k < quad.size(); k += stride) {
            const double w0 = W(quad.nodes[k]);
            for (const Mat3& T : gens)
                t.e_max_dev = std::max(t.e_max_dev, std::abs(W(quad.nodes[k] * T) - w0));
        }
        t.e_max_dev /= scale_w;
        t.e_pass = t.e_max_dev < 1e-8;
    }
    return t;
}

MomentSet canonicalize_moments(const MomentSet& m) {
    // Eigenframe of M11; degenerate pairs refined with M22.
    Eigen::SelfAdjointEigenSolver<Mat3> es(m.M11);
    Mat3 V = es.eigenvectors();
    Vec3 ev = es.eigenvalues();
    // descending order
    std::array<int, 3> idx{2, 1, 0};
    Mat3 R;
    for (int i = 0; i < 3; ++i) R.col(i) = V.col(idx[i]);
    // resolve near-degenerate top pair with M22
    if (std::abs(ev[2] - ev[1]) < 1e-8) {
        const Mat3 M22r = R.transpose() * m.M22 * R;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> sub(M22r.topLeftCorner<2, 2>());
        Eigen::Matrix2d U = sub.eigenvectors();
        Mat3 Rot = Mat3::Identity();
        Rot.topLeftCorner<2, 2>() = U;
        R = R * Rot;
    }
    if (R.determinant() < 0) R.col(2) *= -1.0;
    // deterministic signs: m1 components when present, else M22 off-diagonals
    Vec3 m1r = R.transpose() * m.m1;
    if (m1r.norm() > 1e-10) {
        for (int i = 0; i < 2; ++i) {
            if (m1r[i] < -1e-10) {
                R.col(i) *= -1.0;
                R.col(2) *= -1.0;  // keep det +1
                m1r = R.transpose() * m.m1;
            }
        }
    } else {
        // choose the proper column-sign pattern giving the lexicographically
        // largest (M22_01, M22_02, M22_12)
        const std::array<std::pair<int, int>, 3> flips{{{0, 1}, {0, 2}, {1, 2}}};
        Mat3 bestR = R;
        auto key = [&](const Mat3& Rc) {
            const Mat3 M = Rc.transpose() * m.M22 * Rc;
            return std::array<double, 3>{M(0, 1), M(0, 2), M(1, 2)};
        };
        std::array<double, 3> bestKey = key(R);
        for (const auto& [i, j] : flips) {
            Mat3 Rf = R;
            Rf.col(i) *= -1.0;
            Rf.col(j) *= -1.0;
            const auto k = key(Rf);
            if (k > bestKey) {
                bestKey = k;
                bestR = Rf;
            }
        }
        R = bestR;
    }
    MomentSet out = m;
    out.m1 = R.transpose() * m.m1;
    out.M11 = R.transpose() * m.M11 * R;
    out.M22 = R.transpose() * m.M22 * R;
    if (m.has_third) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double s1 = 0.0, s2 = 0.0;
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            for (int c = 0; c < 3; ++c) {
                                const double r = R(a, i) * R(b, j) * R(c, k);
                                s1 += r * m.T111[tix(a, b, c)];
                                s2 += r * m.T122[tix(a, b, c)];
                            }
                    out.T111[tix(i, j, k)] = s1;
                    out.T122[tix(i, j, k)] = s2;
                }
    }
    return out;
}

std::vector<SweepBranch> branch_sweep(const std::function<KernelPolynomial(double)>& family,
                                      const std::vector<double>& grid, const SCFConfig& config,
                                      const SO3Quadrature& quad) {
    std::vector<SweepBranch> out;
    std::vector<MomentSet> carried;
    const std::array<SeedPreset, 4> presets{SeedPreset::Isotropic, SeedPreset::UniaxialSeed,
                                            SeedPreset::BiaxialSeed, SeedPreset::PolarSeed};
    for (const double p : grid) {
        const KernelPolynomial kp = family(p);
        std::vector<SweepBranch> here;
        auto consider = [&](SeedPreset tag, const SCFConfig& cfg) {
            const SolutionBranch b = scf_solve(kp, cfg, quad);
            if (b.diverged) return;
            const MomentSet canon = canonicalize_moments(b.moments);
            for (const SweepBranch& h : here)
                if (moment_distance(canonicalize_moments(h.branch.moments), canon) < 1e-4) return;
            here.push_back({p, tag, b});
        };
        for (const SeedPreset s : presets) {
            SCFConfig cfg = config;
            cfg.init = s;
            consider(s, cfg);
        }
        for (const MomentSet& prev : carried) {
            SCFConfig cfg = config;
            cfg.init = prev;
            consider(SeedPreset::Isotropic, cfg);  // continuation; tag is informational
        }
        carried.clear();
        for (const SweepBranch& h : here) carried.push_back(h.branch.moments);
        out.insert(out.end(), here.begin(), here.end());
    }
    return out;
}

}  // namespace lcdft
