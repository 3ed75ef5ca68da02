#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>

namespace dualrate {

/// Undirected simple graph with 0/1 adjacency and no isolated vertices.
///
/// Construction validates the matrix, so every live Graph has a symmetric
/// adjacency with zero diagonal and all degrees >= 1 (D is invertible).
class Graph {
 public:
  using Edge = std::pair<Eigen::Index, Eigen::Index>;

  /// Throws NotSquare, InvalidEntry (non 0/1 weight), AsymmetricMatrix,
  /// SelfLoop or IsolatedVertex.
  static Graph from_adjacency(const Eigen::MatrixXd& adjacency);

  /// Duplicate and reversed edges collapse onto one undirected edge;
  /// self-edges throw SelfLoop.
  static Graph from_edges(Eigen::Index n, std::span<const Edge> edges);

  Eigen::Index size() const noexcept { return adjacency_.rows(); }
  const Eigen::MatrixXd& adjacency() const noexcept { return adjacency_; }
  const Eigen::VectorXi& degrees() const noexcept { return degrees_; }

  /// D^{-1} A, the row-stochastic averaging matrix used by the control law.
  Eigen::MatrixXd averaging_matrix() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  Graph(Eigen::MatrixXd adjacency, Eigen::VectorXi degrees)
      : adjacency_(std::move(adjacency)), degrees_(std::move(degrees)) {}

  Eigen::MatrixXd adjacency_;
  Eigen::VectorXi degrees_;
};

bool is_connected(const Graph& g);

/// I - D^{-1} A.
Eigen::MatrixXd normalized_laplacian(const Graph& g);

/// Eigen-decomposition of the normalized Laplacian.
///
/// `right` holds the right eigenvectors as columns, `left` the left
/// eigenvectors as rows, scaled so that left * right == I.
struct Spectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd right;
  Eigen::MatrixXd left;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

inline constexpr double kDefaultZeroTolerance = 1e-8;

/// Solves the symmetric similar matrix I - D^{-1/2} A D^{-1/2} with cyclic
/// Jacobi rotations and maps the eigenvectors back. Throws
/// EigensolverNoConvergence if the sweep cap is hit.
Spectrum spectrum(const Graph& g);

bool has_simple_zero(const Spectrum& s, double tol = kDefaultZeroTolerance);

}  // namespace dualrate
