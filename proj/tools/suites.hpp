#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cuspforge/cusp_generator.hpp"
#include "cuspforge/grid.hpp"
#include "cuspforge/two_phase.hpp"

namespace cuspforge::cli {

struct Assertion {
    std::string name;
    double value = 0;
    double limit = 0;
    std::string relation;  // "<=", ">=", "==", "in"
    double upper = 0;      // second bound for "in"
    bool passed = false;
};

struct SuiteResult {
    std::string suite;
    std::vector<Assertion> checks;
    std::vector<std::string> notes;

    void at_most(const std::string& name, double value, double limit);
    void at_least(const std::string& name, double value, double limit);
    void within(const std::string& name, double value, double lo, double hi);
    void truth(const std::string& name, bool ok);
    bool passed() const;
    const Assertion* first_failure() const;
    std::string render() const;
};

// Rebuild the artifacts a run directory describes; identical inputs give
// identical fields, which is what lets verify re-derive instead of re-load.
OnePhaseSolution regenerate_onephase(const std::filesystem::path& dir);
TwoPhaseBundle regenerate_twophase(const std::filesystem::path& dir);

SuiteResult onephase_suite(const std::filesystem::path& dir);
SuiteResult twophase_suite(const std::filesystem::path& dir);
SuiteResult qc_suite(const std::filesystem::path& dir);

// Nodes of a classical hodograph w inside the largest all-finite box centred
// on x' = 0, subsampled by 2; used as Dirichlet data for the obstacle solver.
ScalarField classical_box(const ScalarField& w);

}  // namespace cuspforge::cli
