#pragma once

#include "twistnc/config.hpp"

#include <optional>
#include <string>

namespace twistnc {

struct AlgebraCheckOptions {
    bool exact = false;           // rational arithmetic; checks must hold identically
    double tol = 1e-12;           // float mode: pass iff residual <= tol * max(1, |f|)
    std::optional<unsigned> seed; // adds randomized sample times to the fixed ones
    bool include_matrix = true;   // embed the full bracket matrix at the first time
};

struct AlgebraCheckResult {
    bool all_passed = false;
    std::string report;
};

/// Verifies every bracket relation of the configured system against its
/// closed form (particle sector, COM sector, cross and relative sectors,
/// representation decomposition, total-momentum commutation) at several
/// sample times and renders a text report.
AlgebraCheckResult run_algebra_check(const ScenarioConfig& config, const AlgebraCheckOptions& options = {});

/// COM representation of X~ over (x~, DP, P~) with the vanishing-dependence
/// verdict. Requires at least two particles.
std::string com_split_report(const ScenarioConfig& config, bool exact, double tol = 1e-12);

}  // namespace twistnc
