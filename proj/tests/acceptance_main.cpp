// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// unexpected outcome. Sample counts follow the stated tolerances (1e7 Monte
// Carlo samples per orientation for the excluded-volume cross-validation).
//
// --xfail <name> marks a criterion whose failure is expected and documented
// (the shipped closed-form table entries that both integral oracles refute).
// An xfail criterion that *passes* is treated as an error so the expectation
// cannot rot silently.

#include "lcdft/verification.hpp"

#include <cstdio>
#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    lcdft::AcceptanceOptions opt;
    std::vector<std::string> xfail;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--xfail") == 0 && i + 1 < argc) {
            xfail.emplace_back(argv[++i]);
        } else {
            opt.only = argv[i];
        }
    }
    const auto results = lcdft::run_acceptance(opt);
    bool ok = !results.empty();
    double total = 0.0;
    int unexpected = 0, expected_fails = 0;
    for (const auto& r : results) {
        const bool is_xfail =
            std::find(xfail.begin(), xfail.end(), r.name) != xfail.end();
        const char* tag = r.pass ? (is_xfail ? "UPASS" : "PASS ")
                                 : (is_xfail ? "XFAIL" : "FAIL ");
        std::printf("[%s] %-28s %6.1fs  %s\n", tag, r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        if (r.pass == is_xfail) {
            ok = false;
            ++unexpected;
        }
        if (!r.pass && is_xfail) ++expected_fails;
        total += r.seconds;
    }
    std::printf("%zu criteria, %.1fs total: %d unexpected outcome(s), %d documented expected "
                "failure(s)\n",
                results.size(), total, unexpected, expected_fails);
    return ok ? 0 : 1;
}
