#pragma once

#include "lcdft/excluded_volume.hpp"
#include "lcdft/kernel.hpp"
#include "lcdft/scf.hpp"
#include "lcdft/shapes.hpp"

#include <string>
#include <vector>

// vendored single-header nlohmann/json
#include "json.hpp"

namespace lcdft {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

Json to_json(const MoleculeShape& s);
MoleculeShape shape_from_json(const Json& j);

Json to_json(const PairPotential& p);
PairPotential potential_from_json(const Json& j, double shape_D);

Json to_json(const KernelPolynomial& kp);
KernelPolynomial kernel_from_json(const Json& j);

Json to_json(const ExcludedVolumeResult& r);

Json to_json(const MomentSet& m);
Json to_json(const SolutionBranch& b);

/// 17-significant-digit float formatting shared by CSV and JSON payloads.
std::string format_double(double v);

/// Minimal CSV writer with a fixed column order and %.17g floats.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<std::string>& cells);
    void add_comment(const std::string& line);
    std::string str() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> lines_;
};

}  // namespace lcdft
