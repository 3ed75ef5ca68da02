#pragma once

#include <Eigen/Dense>

#include "dualrate/graph.hpp"

namespace dualrate {

/// Six-agent test graph whose objective has a finite minimiser.
Graph benchmark_graph();

/// Six-agent graph with |1 - l1| > |1 - l5|, so the objective is minimised
/// only as N -> infinity.
Graph benchmark_graph_no_finite_minimizer();

/// Initial state (5, 6, -3.5, 0, -2, 3) used with both six-agent graphs.
Eigen::VectorXd benchmark_initial_state();

}  // namespace dualrate
