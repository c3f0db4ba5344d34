#pragma once

#include "p2p/problem.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace p2p {

struct DemoOptions {
    std::string variant;
    std::optional<MeshSpec> mesh;
    std::map<int, double> par;        // 1-based parameter overrides
    std::map<std::string, double> nc; // control overrides by name
    std::map<std::string, double> scenario; // workflow knobs, see scenarios.hpp
};

/// Reads {"mesh": {...}, "par": {"2": 0.5}, "nc": {"ds": 0.1}, "variant": "", "scenario": {...}}.
DemoOptions load_demo_config(const std::string& path);
void apply_controls(Controls& nc, const std::map<std::string, double>& values);

std::vector<std::string> demo_names();

/// Builds the named problem at its starting point (ptype -1, no tangent).
ProblemState make_demo(const std::string& name, const DemoOptions& opt = {});

/// Traveling-front stage: free the speed s and add the phase condition,
/// continuing in mu.
void acfront_freeze(ProblemState& p);

/// Orients an acfront profile so that u is large at the left end.
void acfront_orient(ProblemState& p);

/// Cylinder stage of the Schnakenberg demo: identify top and bottom, add
/// the phase condition and free the speed s.
void schnak_travel(ProblemState& p);

/// Turing wavenumber of the Schnakenberg model with diffusion ratio d.
double schnak_kc();

} // namespace p2p
