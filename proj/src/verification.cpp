#include "lcdft/verification.hpp"

#include "lcdft/excluded_volume.hpp"
#include "lcdft/kernel.hpp"
#include "lcdft/scf.hpp"
#include "lcdft/shapes.hpp"
#include "lcdft/so3.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace lcdft {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---- criterion 1: Onsager projection ---------------------------------------

CriterionResult crit_onsager() {
    CriterionResult r;
    r.name = "onsager_projection";
    const SO3Quadrature quad = haar_quadrature(32, 32, 32);
    // c L^2 D = 1 scale
    auto G = [](const Mat3& P) {
        return 2.0 * std::sqrt(std::max(0.0, 1.0 - P(0, 0) * P(0, 0)));
    };
    const auto rep = project_kernel(G, build_basis(SymmetryClass::Dinf_h), quad);
    const double target = -15.0 * kPi / 32.0;
    const double rel = std::abs(rep.coeffs[1] - target) / std::abs(target);
    r.pass = rel < 1e-3;
    r.detail = fmt("c2 = %.8f, target -15*pi/32 = %.8f, rel err %.2e (tol 1e-3)", rep.coeffs[1],
                   target, rel);
    return r;
}

// ---- criterion 2: Table 1 reproduction --------------------------------------

CriterionResult crit_table1(const AcceptanceOptions& opt) {
    CriterionResult r;
    r.name = "table1_reproduction";
    const std::array<double, 3> thetas{kPi / 6.0, kPi / 2.0, 5.0 * kPi / 6.0};
    const char* mom_names[4] = {"p11", "p22", "p12", "p21"};
    double max_quad_err = 0.0;
    int n_entries = 0, n_match = 0, n_defect = 0, n_unconfirmed = 0;
    double max_consensus_gap = 0.0;  // quadrature vs MC on mismatched entries
    int label_mismatches = 0;
    std::ostringstream label_diag, defect_diag;
    for (int t = 0; t < 14; ++t) {
        const Table1RowInfo info = table1_row_info(t);
        if (info.labeled_as_dot && info.resolved_cross) {
            ++label_mismatches;
            label_diag << (label_diag.tellp() > 0 ? ", " : "") << info.label;
        }
        for (const double theta : thetas) {
            for (int m = 0; m < 4; ++m) {
                const auto mom = static_cast<Table1Moment>(m);
                const double printed = table1_entry(t, mom, theta);
                const double oracle = table1_oracle(t, mom, theta, info.resolved_cross);
                ++n_entries;
                max_quad_err = std::max(max_quad_err, std::abs(printed - oracle));
                if (std::abs(printed - oracle) < 1e-4) {
                    ++n_match;
                    continue;
                }
                // mismatch: require oracle consensus (quadrature vs MC)
                double se = 0.0;
                const double mc =
                    table1_mc(t, mom, theta, info.resolved_cross, opt.table_mc_samples,
                              Rng::derive_seed(opt.seed, 900 + 12 * t + m), &se);
                max_consensus_gap = std::max(max_consensus_gap, std::abs(mc - oracle));
                if (std::abs(mc - oracle) <= 4.0 * se + 1e-4) {
                    ++n_defect;
                    if (n_defect <= 3)
                        defect_diag << fmt(" [%s %s th=%.3f: printed %.5f vs oracles %.5f]",
                                           info.label.c_str(), mom_names[m], theta, printed,
                                           oracle);
                } else {
                    ++n_unconfirmed;
                }
            }
        }
    }
    r.pass = n_match == n_entries;
    r.detail = fmt(
        "%d/%d entries match <= 1e-4; %d mismatches where quadrature and MC agree with each "
        "other (max gap %.1e) but not with the printed value, all in the p22/p12/p21 columns of "
        "the e x e' rows away from theta = pi/2 (the table repeats the p11 column there); "
        "%d unconfirmed; e.g.%s; %d rows printed with '.' but cross-valued: %s",
        n_match, n_entries, n_defect, max_consensus_gap, n_unconfirmed, defect_diag.str().c_str(),
        label_mismatches, label_diag.str().c_str());
    return r;
}

// ---- criterion 3: analytic vs numeric coefficients ---------------------------

CriterionResult crit_coeffs() {
    CriterionResult r;
    r.name = "analytic_vs_numeric_coeffs";
    // symbolic identity of the cc-route and the closed forms
    double max_id = 0.0;
    for (int i = 0; i < 25; ++i) {
        const double theta = 0.1 + (kPi - 0.11) * i / 24.0;
        const auto k = k_moments(theta, 1.0, 0.1, 2.0);
        const double cc2 = 5.0 * (4 * k[1] + 4 * k[2] + k[3] - 3 * k[0]);
        const double cc3 = 5.0 * (k[1] + 4 * k[2] + 4 * k[3] - 3 * k[0]);
        const double cc4 = 5.0 * (2 * k[1] + 5 * k[2] + 2 * k[3] - 3 * k[0]);
        const auto a = analytic_spherotriangle_coeffs(theta, 1.0, 0.1, 2.0, 1'000'000, 7);
        max_id = std::max({max_id, std::abs(cc2 - a.c2), std::abs(cc3 - a.c3),
                           std::abs(cc4 - a.c4)});
    }
    // The classic closed forms are the projection of the Steiner kernel whose
    // volume term carries the six-term half-sum (twice the convex volume);
    // the *_exact forms halve the L^3 share and match the projection of the
    // hull-exact kernel. Both comparisons are run at theta = pi/2, L = 1,
    // D = 0.1.
    const MoleculeShape st = MoleculeShape::spherotriangle(1.0, 0.1, kPi / 2.0);
    const TriangleVertices tri = triangle_vertices(st);
    const SO3Quadrature quad = haar_quadrature(32, 32, 32);
    auto G_exact = [&](const Mat3& P) { return spherotriangle_excluded_volume(st, P).value; };
    auto G_halfsum = [&](const Mat3& P) {
        // add the volume term once more: V3 then enters as the half-sum
        return spherotriangle_excluded_volume(st, P).value +
               steiner_v3(EdgeSet::from_triangles(tri, P));
    };
    const auto rep_h = project_kernel(G_halfsum, build_basis(SymmetryClass::C2v_quadratic), quad);
    const auto rep_e = project_kernel(G_exact, build_basis(SymmetryClass::C2v_quadratic), quad);
    const auto a = analytic_spherotriangle_coeffs(kPi / 2.0, 1.0, 0.1, 1.0, 1'000'000, 7);
    const double r2 = std::abs(rep_h.coeffs[2] - a.c2) / std::abs(a.c2);
    const double r3 = std::abs(rep_h.coeffs[3] - a.c3) / std::abs(a.c3);
    const double r4 = std::abs(rep_h.coeffs[4] - a.c4) / std::abs(a.c4);
    const double e2 = std::abs(rep_e.coeffs[2] - a.c2_exact) / std::abs(a.c2_exact);
    const double e3 = std::abs(rep_e.coeffs[3] - a.c3_exact) / std::abs(a.c3_exact);
    const double e4 = std::abs(rep_e.coeffs[4] - a.c4_exact) / std::abs(a.c4_exact);
    r.pass = max_id < 1e-12 && r2 < 1e-2 && r3 < 1e-2 && r4 < 1e-2 && e2 < 1e-2 && e3 < 1e-2 &&
             e4 < 1e-2;
    r.detail = fmt(
        "cc-route vs closed forms: max |diff| = %.2e (tol 1e-12); projection rel err (half-sum "
        "volume normalization) c2 %.2e c3 %.2e c4 %.2e; (exact volume) c2 %.2e c3 %.2e c4 %.2e "
        "(tol 1e-2)",
        max_id, r2, r3, r4, e2, e3, e4);
    return r;
}

// ---- criterion 4: rod closed form -------------------------------------------

CriterionResult crit_rod_limit(const AcceptanceOptions& opt) {
    CriterionResult r;
    r.name = "rod_closed_form";
    const MoleculeShape st = MoleculeShape::spherotriangle(1.0, 0.1, kPi);
    Rng rng(Rng::derive_seed(opt.seed, 4));
    double max_err = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Mat3 P = rng.haar_rotation();
        const double v = spherotriangle_excluded_volume(st, P).value;
        const Vec3 m2 = Vec3::UnitY();
        const double s = m2.cross(Vec3(P * m2)).norm();
        const double vrod = rod_excluded_volume(st.L, st.D, s);
        max_err = std::max(max_err, std::abs(v - vrod));
    }
    r.pass = max_err < 1e-9;
    r.detail = fmt("apex angle -> pi vs rod formula: max |diff| = %.2e over 20 orientations "
                   "(tol 1e-9)",
                   max_err);
    return r;
}

// ---- criterion 5: MC oracle equivalence --------------------------------------

CriterionResult crit_mc_equivalence(const AcceptanceOptions& opt) {
    CriterionResult r;
    r.name = "mc_oracle_equivalence";
    Rng rng(Rng::derive_seed(opt.seed, 5));
    double max_z_st = 0.0, max_z_bc = 0.0;
    const MoleculeShape st = MoleculeShape::spherotriangle(1.0, 0.1, kPi / 2.0);
    for (int i = 0; i < opt.n_orientations; ++i) {
        const Mat3 P = rng.haar_rotation();
        const double v = spherotriangle_excluded_volume(st, P).value;
        const auto mc = mc_excluded_volume(st, P, st.D, opt.mc_samples, rng.next_u64());
        max_z_st = std::max(max_z_st, std::abs(v - mc.value) / mc.stderr_);
    }
    const MoleculeShape bc = MoleculeShape::bent_core(1.0, 0.1, 2.0 * kPi / 3.0, 10);
    for (int i = 0; i < opt.n_orientations; ++i) {
        const Mat3 P = rng.haar_rotation();
        const auto slab = bentcore_excluded_volume(bc, P);
        const auto mc = mc_excluded_volume(bc, P, bc.D, opt.mc_samples, rng.next_u64());
        const double se = std::hypot(mc.stderr_, slab.stderr_);
        max_z_bc = std::max(max_z_bc, std::abs(slab.value - mc.value) / se);
    }
    r.pass = max_z_st <= 3.0 && max_z_bc <= 3.0;
    r.detail = fmt(
        "steiner vs MC (%d orientations, %ld samples): max |z| = %.2f; bent-core slab vs MC: max "
        "|z| = %.2f (tol 3 sigma)",
        opt.n_orientations, opt.mc_samples, max_z_st, max_z_bc);
    return r;
}

// ---- criterion 6: PntRef identity --------------------------------------------

CriterionResult crit_pntref(const AcceptanceOptions& opt) {
    CriterionResult r;
    r.name = "pntref_identity";
    Rng rng(Rng::derive_seed(opt.seed, 6));
    double max_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double theta = rng.uniform(0.3, kPi - 0.3);
        const MoleculeShape st = MoleculeShape::spherotriangle(1.0, 0.1, theta);
        const TriangleVertices tri = triangle_vertices(st);
        const Mat3 P = rng.haar_rotation();
        const EdgeSet em = EdgeSet::from_triangles(tri, P);
        const EdgeSet ep = EdgeSet::from_triangles_sum(tri, P);
        const double v2m = steiner_v2(em).first;
        const double v2p = steiner_v2(ep).first;
        double rhs = 2.0 * (em.a.cross(em.b).norm() + em.a2.cross(em.b2).norm());
        for (const Vec3* e : {&em.a, &em.b, &em.c})
            for (const Vec3* e2 : {&em.a2, &em.b2, &em.c2}) rhs += e->cross(*e2).norm();
        max_err = std::max(max_err, std::abs(v2m + v2p - rhs));
    }
    r.pass = max_err < 1e-10;
    r.detail = fmt("V2(T1-T2)+V2(T1+T2) vs edge-cross sum: max |diff| = %.2e over 100 pairs "
                   "(tol 1e-10)",
                   max_err);
    return r;
}

// ---- criterion 7: Maier-Saupe onset ------------------------------------------

// Independent 1D oracle: b = <t^2> under f ~ exp(-eta t^2) on t in [0,1],
// eta = c2 (3b - 1)/2, iterated from b = 1/3 + 0.2 with damping 1/2.
double oracle_converged_b(double c2) {
    static std::vector<double> x, w;
    if (x.empty()) gauss_legendre(64, x, w);
    auto g = [&](double eta) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double t = 0.5 * (x[i] + 1.0);
            const double f = 0.5 * w[i] * std::exp(-eta * t * t);
            num += f * t * t;
            den += f;
        }
        return num / den;
    };
    double b = 1.0 / 3.0 + 0.2;
    for (int it = 0; it < 60000; ++it) {
        const double nb = g(c2 * (3.0 * b - 1.0) / 2.0);
        if (std::abs(nb - b) < 1e-13) return nb;
        b = 0.5 * b + 0.5 * nb;
    }
    return b;
}

CriterionResult crit_ms_onset() {
    CriterionResult r;
    r.name = "maier_saupe_onset";
    const double thresh = 1.0 / 3.0 + 0.05;
    double lo = 1.0, hi = 15.0;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        (oracle_converged_b(-mid) > thresh ? hi : lo) = mid;
    }
    const double kappa_oracle = 0.5 * (lo + hi);

    const SO3Quadrature quad = haar_quadrature(16, 16, 16);
    auto solver_nematic = [&](double kappa) {
        const KernelPolynomial kp = KernelPolynomial::manual(SymmetryClass::Dinf_h, {0.0, -kappa});
        SCFConfig cfg;
        cfg.init = SeedPreset::UniaxialSeed;
        cfg.tol = 1e-11;
        cfg.max_iter = 40000;
        const SolutionBranch b = scf_solve(kp, cfg, quad);
        return std::pair(b.order_params.m11_eigs[0] > thresh, b);
    };
    lo = 1.0;
    hi = 15.0;
    for (int i = 0; i < 11; ++i) {
        const double mid = 0.5 * (lo + hi);
        (solver_nematic(mid).first ? hi : lo) = mid;
    }
    const double kappa_solver = 0.5 * (lo + hi);

    const auto [isnem, nem] = solver_nematic(kappa_solver + 1.0);
    const double gap = std::abs(nem.order_params.m11_eigs[1] - nem.order_params.m11_eigs[2]);
    r.pass = std::abs(kappa_solver - kappa_oracle) <= 0.01 && isnem && gap < 1e-6 &&
             nem.converged;
    r.detail = fmt(
        "onset -c2: solver %.4f vs 1D oracle %.4f (tol 0.01); nematic eigenvalue gap %.2e "
        "(tol 1e-6)",
        kappa_solver, kappa_oracle, gap);
    return r;
}

// ---- criterion 8: polar suppression and commuting second moments -------------

CriterionResult crit_theorem53(const AcceptanceOptions& opt) {
    CriterionResult r;
    r.name = "theorem53_numerics";
    const SO3Quadrature quad = haar_quadrature(12, 12, 12);
    Rng rng(Rng::derive_seed(opt.seed, 8));
    double max_m1 = 0.0;
    int conv1 = 0;
    for (int i = 0; i < 10; ++i) {
        const double c1 = rng.uniform(-1.0, 0.5);  // -c1 <= 1
        const double c2 = rng.uniform(-8.0, 1.0);
        const double c3 = rng.uniform(-8.0, 1.0);
        const double c4 = rng.uniform(-3.0, 3.0);
        const KernelPolynomial kp =
            KernelPolynomial::manual(SymmetryClass::C2v_quadratic, {0.0, c1, c2, c3, c4});
        SCFConfig cfg;
        cfg.init = SeedPreset::PolarSeed;
        cfg.tol = 1e-12;
        cfg.max_iter = 60000;
        const SolutionBranch b = scf_solve(kp, cfg, quad);
        if (b.converged) ++conv1;
        max_m1 = std::max(max_m1, b.order_params.m1_norm);
    }
    double max_comm = 0.0;
    int conv2 = 0;
    for (int i = 0; i < 5; ++i) {
        const double d1 = rng.uniform(1.8, 3.2);
        const double d2 = rng.uniform(1.2, 2.8);
        const double c1 = rng.uniform(-1.0, 0.3);  // c1 >= -1
        const KernelPolynomial kp = KernelPolynomial::manual(
            SymmetryClass::C2v_quadratic, {0.0, c1, -d1 * d1, -d2 * d2, -d1 * d2});
        SCFConfig cfg;
        cfg.init = SeedPreset::BiaxialSeed;
        // rotate the seed off-axis so commutation is not built in
        MomentSet seed = seed_moments(SeedPreset::BiaxialSeed, false);
        const Mat3 R = euler_to_matrix({0.7, 1.9, 0.4}).matrix();
        seed.M11 = R * seed.M11 * R.transpose();
        seed.M22 = R * seed.M22 * R.transpose();
        cfg.init = seed;
        cfg.tol = 1e-13;
        cfg.max_iter = 200000;
        const SolutionBranch b = scf_solve(kp, cfg, quad);
        if (b.converged) ++conv2;
        const Mat3 comm = b.moments.M11 * b.moments.M22 - b.moments.M22 * b.moments.M11;
        max_comm = std::max(max_comm, comm.cwiseAbs().maxCoeff());
    }
    r.pass = conv1 == 10 && conv2 == 5 && max_m1 < 1e-6 && max_comm < 1e-6;
    r.detail = fmt(
        "-c1<=1: max |<m1>| = %.2e over 10 kernels (%d converged, tol 1e-6); c4^2=c2c3: max "
        "commutator = %.2e over 5 kernels (%d converged, tol 1e-6)",
        max_m1, conv1, max_comm, conv2);
    return r;
}

// ---- criterion 9: Haar identities ---------------------------------------------

CriterionResult crit_haar() {
    CriterionResult r;
    r.name = "haar_identities";
    const SO3Quadrature quad = haar_quadrature(16, 16, 16);
    double wsum = 0.0;
    for (double w : quad.weights) wsum += w;
    double max_first = 0.0, max_second = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            max_first = std::max(
                max_first, std::abs(integrate([&](const Mat3& P) { return P(i, j); }, quad)));
            max_second = std::max(
                max_second,
                std::abs(integrate([&](const Mat3& P) { return P(i, j) * P(i, j); }, quad) -
                         1.0 / 3.0));
        }
    // orthogonal family of Appendix functions
    const std::array<std::function<double(const Mat3&)>, 6> fam{
        [](const Mat3&) { return 1.0; },
        [](const Mat3& P) { return P(0, 0); },
        [](const Mat3& P) { return 0.5 * (3.0 * P(0, 0) * P(0, 0) - 1.0); },
        [](const Mat3& P) {
            return std::sqrt(3.0) * (P(0, 1) * P(0, 1) + 0.5 * (P(0, 0) * P(0, 0) - 1.0));
        },
        [](const Mat3& P) {
            return std::sqrt(3.0) * (P(1, 0) * P(1, 0) + 0.5 * (P(0, 0) * P(0, 0) - 1.0));
        },
        [](const Mat3& P) {
            return 2.0 * P(1, 1) * P(1, 1) + P(0, 1) * P(0, 1) + P(1, 0) * P(1, 0) +
                   0.5 * P(0, 0) * P(0, 0) - 1.5;
        }};
    double max_orth = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            max_orth = std::max(
                max_orth,
                std::abs(integrate([&](const Mat3& P) { return fam[i](P) * fam[j](P); }, quad)));
    r.pass = std::abs(wsum - 1.0) < 1e-12 && max_first < 1e-10 && max_second < 1e-10 &&
             max_orth < 1e-10;
    r.detail = fmt(
        "sum w - 1 = %.1e; max |int p_ij| = %.1e; max |int p_ij^2 - 1/3| = %.1e; orthogonal "
        "family max = %.1e (tol 1e-10)",
        wsum - 1.0, max_first, max_second, max_orth);
    return r;
}

// ---- criterion 10: soft-kernel consistency ------------------------------------

CriterionResult crit_soft_kernel() {
    CriterionResult r;
    r.name = "soft_kernel_consistency";
    const MoleculeShape rod = MoleculeShape::rod(1.0, 0.2, 2);
    // tilted pair: no excluded-volume face aligns with the grid planes
    const Mat3 P = euler_to_matrix({1.1, 0.6, 0.4}).matrix();
    const double gamma = Vec3::UnitX().cross(Vec3(P * Vec3::UnitX())).norm();
    const double target = rod_excluded_volume(rod.L, rod.D, gamma);
    const PairPotential pot = PairPotential::hard_core(rod.D);
    double last_rel = 1.0;
    std::ostringstream seq;
    for (const int n : {48, 96, 192, 256}) {
        const double v = soft_kernel(rod, pot, 1.0, P, {n, 0.0});
        last_rel = std::abs(v - target) / target;
        seq << (n == 48 ? "" : " -> ") << fmt("%.4f", v);
    }
    r.pass = last_rel < 0.01;
    r.detail = fmt("hardcore rod grid refinement %s vs closed form %.4f: final rel err %.2e "
                   "(tol 1e-2)",
                   seq.str().c_str(), target, last_rel);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    using Clock = std::chrono::steady_clock;
    std::vector<std::pair<std::string, std::function<CriterionResult()>>> crits;
    crits.emplace_back("onsager_projection", [&] { return crit_onsager(); });
    crits.emplace_back("table1_reproduction", [&] { return crit_table1(opt); });
    crits.emplace_back("analytic_vs_numeric_coeffs", [&] { return crit_coeffs(); });
    crits.emplace_back("rod_closed_form", [&] { return crit_rod_limit(opt); });
    crits.emplace_back("mc_oracle_equivalence", [&] { return crit_mc_equivalence(opt); });
    crits.emplace_back("pntref_identity", [&] { return crit_pntref(opt); });
    crits.emplace_back("maier_saupe_onset", [&] { return crit_ms_onset(); });
    crits.emplace_back("theorem53_numerics", [&] { return crit_theorem53(opt); });
    crits.emplace_back("haar_identities", [&] { return crit_haar(); });
    crits.emplace_back("soft_kernel_consistency", [&] { return crit_soft_kernel(); });

    // stated runtime limits, seconds
    const std::map<std::string, double> limits{{"onsager_projection", 10.0},
                                               {"table1_reproduction", 300.0},
                                               {"mc_oracle_equivalence", 600.0},
                                               {"soft_kernel_consistency", 300.0}};
    std::vector<CriterionResult> out;
    for (auto& [name, fn] : crits) {
        if (!opt.only.empty() && name.find(opt.only) == std::string::npos) continue;
        const auto t0 = Clock::now();
        CriterionResult res;
        try {
            res = fn();
        } catch (const std::exception& e) {
            res.name = name;
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (const auto it = limits.find(name); it != limits.end() && res.seconds > it->second) {
            res.pass = false;
            res.detail += fmt(" [runtime %.0fs exceeded the %.0fs limit]", res.seconds,
                              it->second);
        }
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace lcdft
