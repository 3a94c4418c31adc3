#include "lcdft/io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace lcdft {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(const MoleculeShape& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["L"] = s.L;
    j["D"] = s.D;
    if (s.kind != ShapeKind::Rod) j["theta"] = s.theta;
    if (s.kind != ShapeKind::SpheroTriangle) j["N"] = s.N;
    return j;
}

MoleculeShape shape_from_json(const Json& j) {
    MoleculeShape s;
    if (!j.is_object() || !j.contains("kind") || !j.contains("L") || !j.contains("D"))
        throw std::invalid_argument("shape: requires kind, L, D");
    s.kind = shape_kind_from_string(j.at("kind").get<std::string>());
    s.L = j.at("L").get<double>();
    s.D = j.at("D").get<double>();
    if (j.contains("theta")) s.theta = j.at("theta").get<double>();
    if (j.contains("N")) s.N = j.at("N").get<int>();
    if (s.kind != ShapeKind::Rod && !j.contains("theta"))
        throw std::invalid_argument("shape: theta required for this kind");
    s.validate();
    return s;
}

Json to_json(const PairPotential& p) {
    Json j;
    j["kind"] = p.kind == PotentialKind::HardCore ? "hardcore" : "lennard_jones";
    j["D"] = p.D;
    if (p.kind == PotentialKind::LennardJones) {
        j["epsilon"] = p.epsilon;
        j["sigma"] = p.sigma;
    }
    return j;
}

PairPotential potential_from_json(const Json& j, double shape_D) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("potential: requires kind");
    const std::string kind = j.at("kind").get<std::string>();
    const double D = j.value("D", shape_D);
    if (kind == "hardcore") return PairPotential::hard_core(D);
    if (kind == "lennard_jones" || kind == "lj")
        return PairPotential::lennard_jones(D, j.value("epsilon", 1.0));
    throw std::invalid_argument("potential: unknown kind " + kind);
}

Json to_json(const KernelPolynomial& kp) {
    Json j;
    j["symmetry_class"] = to_string(kp.basis.symmetry_class);
    j["coeffs"] = kp.coeffs;
    Json terms = Json::array();
    for (const auto& t : kp.basis.terms) terms.push_back(t.name);
    j["terms"] = terms;
    switch (kp.provenance) {
        case Provenance::Projected: j["provenance"] = "projected"; break;
        case Provenance::Analytic: j["provenance"] = "analytic"; break;
        case Provenance::Manual: j["provenance"] = "manual"; break;
    }
    j["params"] = {{"c", kp.params.c},
                   {"L", kp.params.L},
                   {"D", kp.params.D},
                   {"theta", kp.params.theta},
                   {"T", kp.params.T}};
    return j;
}

KernelPolynomial kernel_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("symmetry_class") || !j.contains("coeffs"))
        throw std::invalid_argument("kernel: requires symmetry_class and coeffs");
    KernelPolynomial kp = KernelPolynomial::manual(
        symmetry_class_from_string(j.at("symmetry_class").get<std::string>()),
        j.at("coeffs").get<std::vector<double>>());
    if (j.contains("params")) {
        const Json& p = j.at("params");
        kp.params.c = p.value("c", 1.0);
        kp.params.L = p.value("L", 0.0);
        kp.params.D = p.value("D", 0.0);
        kp.params.theta = p.value("theta", 0.0);
        kp.params.T = p.value("T", 0.0);
    }
    return kp;
}

Json to_json(const ExcludedVolumeResult& r) {
    Json j;
    j["value"] = r.value;
    j["stderr"] = r.stderr_;
    j["method"] = to_string(r.method);
    if (r.case_tag) j["case_tag"] = to_string(*r.case_tag);
    return j;
}

Json to_json(const MomentSet& m) {
    Json j;
    j["m1"] = {m.m1[0], m.m1[1], m.m1[2]};
    auto mat = [](const Mat3& M) {
        Json rows = Json::array();
        for (int i = 0; i < 3; ++i) rows.push_back({M(i, 0), M(i, 1), M(i, 2)});
        return rows;
    };
    j["M11"] = mat(m.M11);
    j["M22"] = mat(m.M22);
    if (m.has_third) {
        j["T111"] = m.T111;
        j["T122"] = m.T122;
    }
    return j;
}

Json to_json(const SolutionBranch& b) {
    Json j;
    j["moments"] = to_json(b.moments);
    j["free_energy"] = b.free_energy;
    j["log_z"] = b.log_z;
    j["residual"] = b.residual;
    j["iterations"] = b.iterations;
    j["converged"] = b.converged;
    j["diverged"] = b.diverged;
    j["order_params"] = {{"m11_eigs", b.order_params.m11_eigs},
                         {"m22_eigs", b.order_params.m22_eigs},
                         {"m1_norm", b.order_params.m1_norm},
                         {"align_cos", b.order_params.align_cos}};
    return j;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_comment(const std::string& line) { lines_.push_back("# " + line); }

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("CsvWriter: cell count does not match header");
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    lines_.push_back(os.str());
}

std::string CsvWriter::str() const {
    std::ostringstream os;
    std::size_t first_data = 0;
    while (first_data < lines_.size() && lines_[first_data].starts_with("#")) {
        os << lines_[first_data] << '\n';
        ++first_data;
    }
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) os << ',';
        os << columns_[i];
    }
    os << '\n';
    for (std::size_t i = first_data; i < lines_.size(); ++i) os << lines_[i] << '\n';
    return os.str();
}

}  // namespace lcdft
