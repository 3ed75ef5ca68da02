#include "dualrate/graph.hpp"

#include <string>
#include <vector>

#include "dualrate/errors.hpp"
#include "dualrate/jacobi.hpp"

namespace dualrate {

namespace {

std::string at(Eigen::Index i, Eigen::Index j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

Graph Graph::from_adjacency(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw Error(ErrorCode::NotSquare, "adjacency matrix is " + std::to_string(adjacency.rows()) +
                                          "x" + std::to_string(adjacency.cols()));
  }
  const Eigen::Index n = adjacency.rows();
  if (n == 0) {
    throw Error(ErrorCode::InvalidParameter, "graph must have at least one vertex");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = adjacency(i, j);
      if (a != 0.0 && a != 1.0) {
        throw Error(ErrorCode::InvalidEntry, "entry " + at(i, j) + " is not 0 or 1");
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) throw Error(ErrorCode::SelfLoop, "vertex " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (adjacency(i, j) != adjacency(j, i)) {
        throw Error(ErrorCode::AsymmetricMatrix, "entries " + at(i, j) + " and " + at(j, i));
      }
    }
  }
  Eigen::VectorXi degrees = adjacency.rowwise().sum().cast<int>();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (degrees(i) == 0) {
      throw Error(ErrorCode::IsolatedVertex, "vertex " + std::to_string(i) + " has degree 0");
    }
  }
  return Graph(adjacency, std::move(degrees));
}

Graph Graph::from_edges(Eigen::Index n, std::span<const Edge> edges) {
  if (n <= 0) throw Error(ErrorCode::InvalidParameter, "n must be positive");
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw Error(ErrorCode::InvalidParameter, "edge " + at(i, j) + " out of range for n=" +
                                                   std::to_string(n));
    }
    if (i == j) throw Error(ErrorCode::SelfLoop, "edge " + at(i, j));
    adjacency(i, j) = adjacency(j, i) = 1.0;
  }
  return from_adjacency(adjacency);
}

Eigen::MatrixXd Graph::averaging_matrix() const {
  return degrees_.cast<double>().cwiseInverse().asDiagonal() * adjacency_;
}

bool is_connected(const Graph& g) {
  const Eigen::Index n = g.size();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> stack{0};
  seen[0] = 1;
  Eigen::Index reached = 1;
  while (!stack.empty()) {
    const Eigen::Index v = stack.back();
    stack.pop_back();
    for (Eigen::Index w = 0; w < n; ++w) {
      if (g.adjacency()(v, w) != 0.0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

Eigen::MatrixXd normalized_laplacian(const Graph& g) {
  return Eigen::MatrixXd::Identity(g.size(), g.size()) - g.averaging_matrix();
}

Spectrum spectrum(const Graph& g) {
  const Eigen::VectorXd d = g.degrees().cast<double>();
  const Eigen::VectorXd d_sqrt = d.cwiseSqrt();
  const Eigen::VectorXd d_isqrt = d_sqrt.cwiseInverse();

  // I - D^{-1/2} A D^{-1/2} is similar to L and symmetric.
  const Eigen::MatrixXd sym = Eigen::MatrixXd::Identity(g.size(), g.size()) -
                              d_isqrt.asDiagonal() * g.adjacency() * d_isqrt.asDiagonal();
  const auto eig = jacobi_eigen(sym);

  Spectrum s;
  s.eigenvalues = eig.values;
  s.right = d_isqrt.asDiagonal() * eig.vectors;
  s.left = (d_sqrt.asDiagonal() * eig.vectors).transpose();
  return s;
}

bool has_simple_zero(const Spectrum& s, double tol) {
  return (s.eigenvalues.array().abs() <= tol).count() == 1;
}

}  // namespace dualrate
