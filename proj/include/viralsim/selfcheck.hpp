// End-to-end property checks over the preset scenarios: conservation,
// monotonicity, final-size agreement, invariant constancy, threshold/peak
// location, integrator convergence order, and polynomial exactness.
#ifndef VIRALSIM_SELFCHECK_HPP
#define VIRALSIM_SELFCHECK_HPP

#include <string>
#include <vector>

#include "viralsim/ode.hpp"

namespace viralsim::check {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string summary;                // one-line residual summary
    std::vector<std::string> details;   // per-scenario residual lines
};

struct CheckOptions {
    // Stepper used by the convergence-order check; swappable so a tampered
    // tableau is detectable by fault injection.
    ode::StepFn step = ode::dp45_step;
};

std::vector<CheckResult> run_self_checks(const CheckOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace viralsim::check

#endif
