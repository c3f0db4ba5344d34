#pragma once

#include "p2p/problem.hpp"

#include <string>
#include <vector>

namespace p2p {

constexpr int point_format_version = 1;

/// Writes <dir>/<name>.dat atomically. The operator cache is not stored.
void save_point(const ProblemState& p, const std::string& dir, const std::string& name);

/// Rebuilds the state from a point file through the demo registry.
ProblemState load_point(const std::string& dir, const std::string& name);

/// Default output root: $P2P_OUT or "out".
std::string output_root();

struct BranchTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

BranchTable branch_table(const ProblemState& p);
void write_branch_csv(const ProblemState& p, const std::string& path);
BranchTable read_branch_csv(const std::string& path);

struct PlotSeries {
    std::vector<double> x, y;
    std::vector<int> ptype;
    std::string label;
};

/// Branch diagram: one polyline per series, circles at bifurcations, diamonds at folds.
void plot_branch_svg(const std::vector<PlotSeries>& series, const std::string& xlabel, const std::string& ylabel,
                     const std::string& path);
PlotSeries series_from_table(const BranchTable& t, const std::string& xcol, const std::string& ycol,
                             const std::string& label);

/// Flat-shaded per-triangle heatmap of one component on the full mesh.
void plot_solution_svg(const ProblemState& p, int component, const std::string& path);

} // namespace p2p
