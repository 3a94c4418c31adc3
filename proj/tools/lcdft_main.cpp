// Batch front end: excluded volumes, kernel projection, SCF solves, sweeps,
// and the verification suite. One JSON config per invocation, CSV/JSON out.

#include "lcdft/excluded_volume.hpp"
#include "lcdft/io.hpp"
#include "lcdft/kernel.hpp"
#include "lcdft/scf.hpp"
#include "lcdft/shapes.hpp"
#include "lcdft/so3.hpp"
#include "lcdft/verification.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

namespace {

using namespace lcdft;
constexpr double kPi = std::numbers::pi;

constexpr int kExitBadConfig = 2;

Json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    Json j;
    in >> j;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

SO3Quadrature quad_from_config(const Json& cfg) {
    int na = 16, nb = 16, ng = 16;
    if (cfg.contains("quadrature")) {
        const Json& q = cfg.at("quadrature");
        na = q.value("n_alpha", 16);
        nb = q.value("n_beta", 16);
        ng = q.value("n_gamma", 16);
    }
    return haar_quadrature(na, nb, ng);
}

Mat3 orientation_from_config(const Json& cfg) {
    if (!cfg.contains("orientation")) return Mat3::Identity();
    const Json& o = cfg.at("orientation");
    if (o.contains("euler")) {
        const auto v = o.at("euler").get<std::vector<double>>();
        if (v.size() != 3) throw std::invalid_argument("orientation.euler needs 3 angles");
        return euler_to_matrix({v[0], v[1], v[2]}).matrix();
    }
    if (o.contains("matrix")) {
        const auto v = o.at("matrix").get<std::vector<double>>();
        if (v.size() != 9) throw std::invalid_argument("orientation.matrix needs 9 entries");
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = v[3 * i + j];
        return Rotation::from_matrix(m).matrix();  // validates
    }
    throw std::invalid_argument("orientation: needs euler or matrix");
}

ExcludedVolumeResult eval_exvol(const MoleculeShape& shape, const Mat3& P, const Json& cfg) {
    const std::string method = cfg.value("method", "auto");
    if (method == "monte_carlo") {
        const long n = cfg.value("mc_samples", 1'000'000L);
        const std::uint64_t seed = cfg.value("seed", 1ULL);
        return mc_excluded_volume(shape, P, shape.D, n, seed);
    }
    switch (shape.kind) {
        case ShapeKind::SpheroTriangle: return spherotriangle_excluded_volume(shape, P);
        case ShapeKind::BentCore: return bentcore_excluded_volume(shape, P);
        case ShapeKind::Rod: {
            const Vec3 m1 = Vec3::UnitX();
            ExcludedVolumeResult r;
            r.value = rod_excluded_volume(shape.L, shape.D, m1.cross(Vec3(P * m1)).norm());
            return r;
        }
    }
    throw std::logic_error("unreachable");
}

int cmd_exvol(const Json& cfg, const std::string& out_path) {
    const MoleculeShape shape = shape_from_json(cfg.at("shape"));
    Json result;
    result["version"] = kVersion;
    result["config"] = cfg;
    if (cfg.contains("grid")) {
        const Json& g = cfg.at("grid");
        const double from = g.value("from", 0.0), to = g.value("to", kPi);
        const int steps = g.value("steps", 32);
        if (steps < 1) throw std::invalid_argument("grid.steps must be positive");
        CsvWriter csv({"angle", "value", "stderr", "method"});
        csv.add_comment(std::string("lcdft ") + kVersion);
        csv.add_comment("config " + cfg.dump());
        for (int i = 0; i <= steps; ++i) {
            const double ang = from + (to - from) * i / steps;
            const Mat3 P = euler_to_matrix({ang, 0.0, 0.0}).matrix();
            const auto r = eval_exvol(shape, P, cfg);
            csv.add_row({format_double(ang), format_double(r.value), format_double(r.stderr_),
                         to_string(r.method)});
        }
        write_text(out_path, csv.str());
        return 0;
    }
    const Mat3 P = orientation_from_config(cfg);
    result["result"] = to_json(eval_exvol(shape, P, cfg));
    write_json(out_path, result);
    return 0;
}

int cmd_project(const Json& cfg, const std::string& out_path) {
    const MoleculeShape shape = shape_from_json(cfg.at("shape"));
    const SymmetryClass sc = symmetry_class_from_string(
        cfg.value("symmetry_class", shape.kind == ShapeKind::Rod ? "Dinf_h" : "C2v_quadratic"));
    const double conc = cfg.value("concentration", 1.0);

    if (cfg.contains("sweep") && cfg.at("sweep").value("param", "") == "theta") {
        if (shape.kind != ShapeKind::SpheroTriangle)
            throw std::invalid_argument("theta sweep requires a spherotriangle");
        const Json& s = cfg.at("sweep");
        const double from = s.value("from", 0.2), to = s.value("to", kPi - 0.2);
        const int steps = s.value("steps", 20);
        CsvWriter csv({"theta", "c1", "c1_stderr", "c2", "c3", "c4"});
        csv.add_comment(std::string("lcdft ") + kVersion);
        csv.add_comment("config " + cfg.dump());
        for (int i = 0; i <= steps; ++i) {
            const double theta = from + (to - from) * i / steps;
            const auto a = analytic_spherotriangle_coeffs(theta, shape.L, shape.D, conc,
                                                          1'000'000, cfg.value("seed", 1ULL));
            csv.add_row({format_double(theta), format_double(a.c1), format_double(a.c1_stderr),
                         format_double(a.c2), format_double(a.c3), format_double(a.c4)});
        }
        write_text(out_path, csv.str());
        return 0;
    }

    const SO3Quadrature quad = quad_from_config(cfg);
    std::function<double(const Mat3&)> G;
    if (shape.kind == ShapeKind::SpheroTriangle) {
        G = [&](const Mat3& P) { return conc * spherotriangle_excluded_volume(shape, P).value; };
    } else if (shape.kind == ShapeKind::Rod) {
        G = [&](const Mat3& P) {
            const Vec3 m1 = Vec3::UnitX();
            return conc * rod_excluded_volume(shape.L, shape.D, m1.cross(Vec3(P * m1)).norm());
        };
    } else {
        G = [&](const Mat3& P) { return conc * bentcore_excluded_volume(shape, P).value; };
    }
    const MonomialBasis basis = build_basis(sc);
    const ProjectionReport rep = project_kernel(G, basis, quad);

    KernelPolynomial kp;
    kp.basis = basis;
    kp.coeffs = rep.coeffs;
    kp.provenance = Provenance::Projected;
    kp.params = {conc, shape.L, shape.D, shape.theta, 0.0};

    Json out;
    out["version"] = kVersion;
    out["config"] = cfg;
    out["kernel"] = to_json(kp);
    out["report"] = {{"gram", rep.gram}, {"rhs", rep.rhs}, {"residual_l2", rep.residual_l2}};
    if (shape.kind == ShapeKind::SpheroTriangle) {
        const auto a = analytic_spherotriangle_coeffs(shape.theta, shape.L, shape.D, conc,
                                                      1'000'000, cfg.value("seed", 1ULL));
        out["analytic"] = {{"c1", a.c1},
                           {"c1_stderr", a.c1_stderr},
                           {"c2", a.c2},
                           {"c3", a.c3},
                           {"c4", a.c4},
                           {"c2_exact", a.c2_exact},
                           {"c3_exact", a.c3_exact},
                           {"c4_exact", a.c4_exact},
                           {"k_theta", a.k_theta}};
    }
    write_json(out_path, out);
    return 0;
}

KernelPolynomial kernel_from_config(const Json& cfg) {
    if (cfg.contains("kernel_file")) return kernel_from_json(load_config(cfg.at("kernel_file")));
    if (cfg.contains("kernel")) return kernel_from_json(cfg.at("kernel"));
    throw std::invalid_argument("solve: needs kernel or kernel_file");
}

SCFConfig scf_from_config(const Json& cfg) {
    SCFConfig s;
    if (cfg.contains("scf")) {
        const Json& j = cfg.at("scf");
        s.damping = j.value("damping", 0.5);
        s.tol = j.value("tol", 1e-10);
        s.max_iter = j.value("max_iter", 5000);
        if (s.damping <= 0.0 || s.damping > 1.0)
            throw std::invalid_argument("scf.damping must lie in (0, 1]");
        if (s.tol <= 0.0) throw std::invalid_argument("scf.tol must be positive");
    }
    return s;
}

std::vector<SeedPreset> seeds_from_config(const Json& cfg) {
    std::vector<SeedPreset> seeds;
    if (cfg.contains("scf") && cfg.at("scf").contains("seeds")) {
        for (const auto& s : cfg.at("scf").at("seeds"))
            seeds.push_back(seed_preset_from_string(s.get<std::string>()));
    } else {
        seeds = {SeedPreset::Isotropic, SeedPreset::UniaxialSeed, SeedPreset::BiaxialSeed,
                 SeedPreset::PolarSeed};
    }
    return seeds;
}

std::vector<std::string> branch_csv_columns() {
    return {"param",    "seed",      "converged", "diverged",  "residual",  "iterations",
            "m11_eig1", "m11_eig2",  "m11_eig3",  "m22_eig1",  "m22_eig2",  "m22_eig3",
            "m1_norm",  "align_cos", "free_energy"};
}

std::vector<std::string> branch_csv_row(double param, const std::string& seed,
                                        const SolutionBranch& b) {
    const auto& op = b.order_params;
    return {format_double(param),
            seed,
            b.converged ? "1" : "0",
            b.diverged ? "1" : "0",
            format_double(b.residual),
            std::to_string(b.iterations),
            format_double(op.m11_eigs[0]),
            format_double(op.m11_eigs[1]),
            format_double(op.m11_eigs[2]),
            format_double(op.m22_eigs[0]),
            format_double(op.m22_eigs[1]),
            format_double(op.m22_eigs[2]),
            format_double(op.m1_norm),
            format_double(op.align_cos),
            format_double(b.free_energy)};
}

int cmd_solve(const Json& cfg, const std::string& out_path) {
    const KernelPolynomial kp = kernel_from_config(cfg);
    const SO3Quadrature quad = quad_from_config(cfg);
    const SCFConfig base = scf_from_config(cfg);
    Json out;
    out["version"] = kVersion;
    out["config"] = cfg;
    Json branches = Json::array();
    CsvWriter csv(branch_csv_columns());
    csv.add_comment(std::string("lcdft ") + kVersion);
    csv.add_comment("config " + cfg.dump());
    int n_ok = 0;
    for (const SeedPreset seed : seeds_from_config(cfg)) {
        SCFConfig c = base;
        c.init = seed;
        const SolutionBranch b = scf_solve(kp, c, quad);
        if (!b.diverged) ++n_ok;
        Json jb = to_json(b);
        jb["seed"] = to_string(seed);
        branches.push_back(jb);
        csv.add_row(branch_csv_row(0.0, to_string(seed), b));
    }
    out["branches"] = branches;
    if (out_path.ends_with(".csv")) {
        write_text(out_path, csv.str());
    } else {
        write_json(out_path, out);
    }
    return n_ok == 0 ? 1 : 0;
}

int cmd_sweep(const Json& cfg, const std::string& out_path) {
    if (!cfg.contains("sweep")) throw std::invalid_argument("sweep: needs sweep{param,from,to,steps}");
    const Json& sw = cfg.at("sweep");
    const std::string param = sw.value("param", "coupling_scale");
    const double from = sw.at("from").get<double>();
    const double to = sw.at("to").get<double>();
    const int steps = sw.at("steps").get<int>();
    if (steps < 1) throw std::invalid_argument("sweep.steps must be positive");

    std::function<KernelPolynomial(double)> family;
    if (param == "concentration") {
        const MoleculeShape shape = shape_from_json(cfg.at("shape"));
        if (shape.kind != ShapeKind::SpheroTriangle)
            throw std::invalid_argument("concentration sweep requires a spherotriangle");
        family = [shape, &cfg](double c) {
            const auto a = analytic_spherotriangle_coeffs(shape.theta, shape.L, shape.D, c,
                                                          1'000'000, cfg.value("seed", 1ULL));
            // exact-volume normalization: the kernel the MC oracle validates
            KernelPolynomial kp = KernelPolynomial::manual(
                SymmetryClass::C2v_quadratic, {0.0, a.c1, a.c2_exact, a.c3_exact, a.c4_exact});
            kp.provenance = Provenance::Analytic;
            kp.params = {c, shape.L, shape.D, shape.theta, 0.0};
            return kp;
        };
    } else if (param == "coupling_scale") {
        const KernelPolynomial base = kernel_from_config(cfg);
        family = [base](double s) {
            KernelPolynomial kp = base;
            for (double& c : kp.coeffs) c *= s;
            return kp;
        };
    } else {
        throw std::invalid_argument("sweep.param must be concentration or coupling_scale");
    }

    std::vector<double> grid;
    for (int i = 0; i <= steps; ++i) grid.push_back(from + (to - from) * i / steps);
    const SO3Quadrature quad = quad_from_config(cfg);
    const auto rows = branch_sweep(family, grid, scf_from_config(cfg), quad);
    CsvWriter csv(branch_csv_columns());
    csv.add_comment(std::string("lcdft ") + kVersion);
    csv.add_comment("config " + cfg.dump());
    int n_ok = 0;
    for (const auto& r : rows) {
        if (!r.branch.diverged) ++n_ok;
        csv.add_row(branch_csv_row(r.param, to_string(r.seed), r.branch));
    }
    write_text(out_path, csv.str());
    return n_ok == 0 ? 1 : 0;
}

int cmd_verify(const Json& cfg, const std::string& out_path, const std::string& only) {
    AcceptanceOptions opt;
    opt.mc_samples = cfg.value("mc_samples", opt.mc_samples);
    opt.n_orientations = cfg.value("n_orientations", opt.n_orientations);
    opt.table_mc_samples = cfg.value("table_mc_samples", opt.table_mc_samples);
    opt.seed = cfg.value("seed", opt.seed);
    opt.only = only.empty() ? cfg.value("only", "") : only;
    const auto results = run_acceptance(opt);
    Json out;
    out["version"] = kVersion;
    out["config"] = cfg;
    Json arr = Json::array();
    bool all_pass = !results.empty();
    for (const auto& r : results) {
        std::printf("[%s] %-28s %7.1fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.seconds, r.detail.c_str());
        all_pass = all_pass && r.pass;
        arr.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail},
                       {"seconds", r.seconds}});
    }
    out["results"] = arr;
    out["all_pass"] = all_pass;
    if (!out_path.empty()) write_json(out_path, out);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"density-functional toolkit for rigid-molecule liquid crystals"};
    app.require_subcommand(1);

    std::string config_path, out_path, only;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        if (need_config)
            sub->add_option("-c,--config", config_path, "JSON config file")->required();
        else
            sub->add_option("-c,--config", config_path, "JSON config file");
        sub->add_option("-o,--out", out_path, "output file (default stdout)");
    };
    add_common(app.add_subcommand("exvol", "excluded-volume evaluation"), true);
    add_common(app.add_subcommand("project", "kernel projection"), true);
    add_common(app.add_subcommand("solve", "self-consistent field solve"), true);
    add_common(app.add_subcommand("sweep", "parameter sweep"), true);
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify, false);
    verify->add_option("--only", only, "run criteria whose name contains this substring");

    CLI11_PARSE(app, argc, argv);

    try {
        const Json cfg = config_path.empty() ? Json::object() : load_config(config_path);
        if (app.got_subcommand("exvol")) return cmd_exvol(cfg, out_path);
        if (app.got_subcommand("project")) return cmd_project(cfg, out_path);
        if (app.got_subcommand("solve")) return cmd_solve(cfg, out_path);
        if (app.got_subcommand("sweep")) return cmd_sweep(cfg, out_path);
        if (app.got_subcommand("verify")) return cmd_verify(cfg, out_path, only);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
