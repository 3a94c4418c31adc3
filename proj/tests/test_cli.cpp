#include "doctest.h"

#include "lcdft/excluded_volume.hpp"
#include "lcdft/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace lcdft;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return LCDFT_CLI_PATH; }

fs::path temp_dir() {
    const fs::path p = fs::temp_directory_path() / "lcdft_cli_tests";
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("cli exvol: rod matches the closed form and output is reproducible") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "rod.json";
    write_file(cfg, R"({"shape": {"kind": "rod", "L": 1.0, "D": 0.1},
                        "orientation": {"euler": [1.5707963267948966, 0.0, 0.0]}})");
    const fs::path out1 = dir / "rod1.json", out2 = dir / "rod2.json";
    CHECK(run_cli("exvol -c " + cfg.string() + " -o " + out1.string()) == 0);
    CHECK(run_cli("exvol -c " + cfg.string() + " -o " + out2.string()) == 0);
    CHECK(read_file(out1) == read_file(out2));  // byte-identical reruns
    const Json j = Json::parse(read_file(out1));
    CHECK(j.at("result").at("value").get<double>() ==
          doctest::Approx(rod_excluded_volume(1.0, 0.1, 1.0)).epsilon(1e-12));
    CHECK(j.at("version").get<std::string>() == kVersion);
    CHECK(j.contains("config"));
}

TEST_CASE("cli exvol: angle grid produces a monotone table") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "grid.json";
    write_file(cfg, R"({"shape": {"kind": "rod", "L": 1.0, "D": 0.1},
                        "grid": {"from": 0.0, "to": 1.5707963267948966, "steps": 8}})");
    const fs::path out = dir / "grid.csv";
    CHECK(run_cli("exvol -c " + cfg.string() + " -o " + out.string()) == 0);
    std::istringstream is(read_file(out));
    std::string line;
    double prev = -1.0;
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'a') continue;
        const auto comma = line.find(',');
        const double value = std::stod(line.substr(comma + 1));
        CHECK(value >= prev);
        prev = value;
        ++rows;
    }
    CHECK(rows == 9);
}

TEST_CASE("cli rejects invalid configs with exit code 2") {
    const fs::path dir = temp_dir();
    const fs::path bad_theta = dir / "bad_theta.json";
    write_file(bad_theta, R"({"shape": {"kind": "spherotriangle", "L": 1.0, "D": 0.1,
                              "theta": 0.0}})");
    CHECK(run_cli("exvol -c " + bad_theta.string()) == 2);

    const fs::path bad_class = dir / "bad_class.json";
    write_file(bad_class, R"({"shape": {"kind": "rod", "L": 1.0, "D": 0.1},
                              "symmetry_class": "D17h"})");
    CHECK(run_cli("project -c " + bad_class.string()) == 2);

    const fs::path no_kernel = dir / "no_kernel.json";
    write_file(no_kernel, R"({"scf": {"damping": 0.5}})");
    CHECK(run_cli("solve -c " + no_kernel.string()) == 2);
}

TEST_CASE("cli project: onsager coefficient from the rod kernel") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "project.json";
    write_file(cfg, R"({"shape": {"kind": "rod", "L": 1.0, "D": 0.1},
                        "symmetry_class": "Dinf_h",
                        "quadrature": {"n_alpha": 24, "n_beta": 24, "n_gamma": 24},
                        "concentration": 2.0})");
    const fs::path out = dir / "project.json.out";
    CHECK(run_cli("project -c " + cfg.string() + " -o " + out.string()) == 0);
    const Json j = Json::parse(read_file(out));
    const double c2 = j.at("kernel").at("coeffs")[1].get<double>();
    const double target = -15.0 * std::numbers::pi / 32.0 * 2.0 * 1.0 * 0.1;
    CHECK(std::abs(c2 - target) / std::abs(target) < 1e-3);
}

TEST_CASE("cli solve: zero kernel yields one converged isotropic row per seed") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "solve.json";
    write_file(cfg, R"({"kernel": {"symmetry_class": "Dinf_h", "coeffs": [0.0, 0.0]},
                        "quadrature": {"n_alpha": 8, "n_beta": 8, "n_gamma": 8},
                        "scf": {"damping": 0.5, "tol": 1e-10, "max_iter": 50,
                                "seeds": ["isotropic"]}})");
    const fs::path out = dir / "solve.json.out";
    CHECK(run_cli("solve -c " + cfg.string() + " -o " + out.string()) == 0);
    const Json j = Json::parse(read_file(out));
    REQUIRE(j.at("branches").size() == 1);
    CHECK(j.at("branches")[0].at("converged").get<bool>());
    const auto eigs = j.at("branches")[0].at("order_params").at("m11_eigs");
    CHECK(eigs[0].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("cli sweep: coupling scale CSV has branch rows") {
    const fs::path dir = temp_dir();
    const fs::path cfg = dir / "sweep.json";
    write_file(cfg, R"({"kernel": {"symmetry_class": "Dinf_h", "coeffs": [0.0, -1.0]},
                        "quadrature": {"n_alpha": 8, "n_beta": 8, "n_gamma": 8},
                        "scf": {"damping": 0.5, "tol": 1e-9, "max_iter": 5000},
                        "sweep": {"param": "coupling_scale", "from": 0.0, "to": 9.0,
                                  "steps": 3}})");
    const fs::path out = dir / "sweep.csv";
    CHECK(run_cli("sweep -c " + cfg.string() + " -o " + out.string()) == 0);
    const std::string text = read_file(out);
    CHECK(text.find("param,seed,converged") != std::string::npos);
    CHECK(text.find("\n9,") != std::string::npos);  // rows for the last grid point
}

TEST_CASE("cli verify: single fast criterion runs and reports") {
    const fs::path dir = temp_dir();
    const fs::path out = dir / "verify.json";
    CHECK(run_cli("verify --only haar -o " + out.string()) == 0);
    const Json j = Json::parse(read_file(out));
    REQUIRE(j.at("results").size() == 1);
    CHECK(j.at("results")[0].at("name").get<std::string>() == "haar_identities");
    CHECK(j.at("results")[0].at("pass").get<bool>());
    CHECK(j.at("all_pass").get<bool>());
}
