#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace delidx::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct Config {
    std::uint64_t seed = 12345;
    int trials = 100;
    std::string only; // empty: run everything
};

// Runs the verification suite: exact block indexes, sandwich bounds, cylinder
// closed forms, growth slopes, potential bounds, residual orders, period
// bounds, bracketing and oracle property trials, perturbation stability and
// nodal counts.
std::vector<CriterionResult> run(const Config& config);

void print_table(const std::vector<CriterionResult>& results, std::ostream& out);
bool all_pass(const std::vector<CriterionResult>& results);

} // namespace delidx::acceptance
