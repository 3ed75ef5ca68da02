#include "dualrate/benchmark.hpp"

namespace dualrate {

Graph benchmark_graph() {
  Eigen::MatrixXd a(6, 6);
  a << 0, 1, 0, 0, 1, 0,
       1, 0, 1, 0, 1, 0,
       0, 1, 0, 1, 0, 0,
       0, 0, 1, 0, 1, 1,
       1, 1, 0, 1, 0, 0,
       0, 0, 0, 1, 0, 0;
  return Graph::from_adjacency(a);
}

Graph benchmark_graph_no_finite_minimizer() {
  Eigen::MatrixXd a(6, 6);
  a << 0, 1, 0, 1, 1, 0,
       1, 0, 1, 0, 1, 1,
       0, 1, 0, 0, 0, 1,
       1, 0, 0, 0, 1, 0,
       1, 1, 0, 1, 0, 0,
       0, 1, 1, 0, 0, 0;
  return Graph::from_adjacency(a);
}

Eigen::VectorXd benchmark_initial_state() {
  Eigen::VectorXd x0(6);
  x0 << 5, 6, -3.5, 0, -2, 3;
  return x0;
}

}  // namespace dualrate
