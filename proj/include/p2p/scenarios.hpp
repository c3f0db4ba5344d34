#pragma once

#include "p2p/demos.hpp"

#include <map>
#include <string>
#include <vector>

namespace p2p {

/// Outcome of a scripted demo workflow. Branch directories are relative to
/// the output root; values hold the located points and check quantities,
/// among them max_residual, max_arclength_defect and min_tangent_dot over
/// every accepted continuation step of the workflow.
struct ScenarioReport {
    std::vector<std::string> branches;
    std::map<std::string, double> values;
    double seconds = 0;
};

/// Runs the named demo's workflow below root. Knobs come from opt.scenario:
///   acfold : trivial_steps, swibra_ds, branch_steps, fold_steps, exit_steps
///   schnak : branch_steps, lambda_end, rho_steps, travel_steps
///   bratu  : trivial_steps, bp_steps, exit_steps
///   nlbc   : trivial_steps, branch_steps
///   acfront: swibra_ds, lambda_front, mu_end
ScenarioReport run_scenario(const std::string& demo, const std::string& root, const DemoOptions& opt = {});

} // namespace p2p
