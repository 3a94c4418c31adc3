#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lcdft {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    long mc_samples = 10'000'000;   // per-orientation sample count for the MC oracle
    int n_orientations = 20;        // random orientations per shape kind
    long table_mc_samples = 400'000;
    std::uint64_t seed = 20240901;
    std::string only;               // substring filter; empty runs everything
};

/// Runs the acceptance suite. Each criterion reports pass/fail and a
/// one-line measurement summary.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace lcdft
