#include <doctest.h>

#include "dualrate/benchmark.hpp"
#include "dualrate/errors.hpp"
#include "dualrate/graph.hpp"
#include "support/random_graphs.hpp"

using namespace dualrate;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dualrate::Error");
  return ErrorCode::Parse;
}

Eigen::MatrixXd two_disjoint_edges() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(0, 1) = a(1, 0) = 1;
  a(2, 3) = a(3, 2) = 1;
  return a;
}

}  // namespace

TEST_CASE("from_adjacency computes degrees") {
  const Graph g = benchmark_graph();
  Eigen::VectorXi expected(6);
  expected << 2, 3, 2, 3, 3, 1;
  CHECK(g.degrees() == expected);

  Eigen::MatrixXd k2(2, 2);
  k2 << 0, 1, 1, 0;
  CHECK(Graph::from_adjacency(k2).degrees() == Eigen::Vector2i(1, 1));
}

TEST_CASE("from_adjacency rejects invalid matrices") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1;
  CHECK(code_of([&] { Graph::from_adjacency(a); }) == ErrorCode::IsolatedVertex);

  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK(code_of([&] { Graph::from_adjacency(asym); }) == ErrorCode::AsymmetricMatrix);

  Eigen::MatrixXd loop(2, 2);
  loop << 1, 1, 1, 0;
  CHECK(code_of([&] { Graph::from_adjacency(loop); }) == ErrorCode::SelfLoop);

  Eigen::MatrixXd weighted(2, 2);
  weighted << 0, 0.5, 0.5, 0;
  CHECK(code_of([&] { Graph::from_adjacency(weighted); }) == ErrorCode::InvalidEntry);

  CHECK(code_of([&] { Graph::from_adjacency(Eigen::MatrixXd::Zero(2, 3)); }) ==
        ErrorCode::NotSquare);
}

TEST_CASE("from_edges treats duplicate and reversed edges as one") {
  const std::vector<Graph::Edge> edges{{0, 1}, {1, 0}, {0, 1}, {1, 2}};
  const Graph g = Graph::from_edges(3, edges);
  CHECK(g == testing::path_graph(3));

  const std::vector<Graph::Edge> self{{0, 1}, {2, 2}};
  CHECK(code_of([&] { Graph::from_edges(3, self); }) == ErrorCode::SelfLoop);
  const std::vector<Graph::Edge> outside{{0, 3}};
  CHECK(code_of([&] { Graph::from_edges(3, outside); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("is_connected") {
  CHECK(is_connected(benchmark_graph()));
  CHECK(is_connected(benchmark_graph_no_finite_minimizer()));
  CHECK_FALSE(is_connected(Graph::from_adjacency(two_disjoint_edges())));
  CHECK(is_connected(testing::complete_graph(2)));
}

TEST_CASE("normalized_laplacian") {
  Eigen::Matrix2d k2;
  k2 << 1, -1, -1, 1;
  CHECK(normalized_laplacian(testing::complete_graph(2)).isApprox(Eigen::MatrixXd(k2)));

  Eigen::Matrix3d path;
  path << 1, -1, 0, -0.5, 1, -0.5, 0, -1, 1;
  CHECK(normalized_laplacian(testing::path_graph(3)).isApprox(Eigen::MatrixXd(path)));

  const Eigen::MatrixXd L = normalized_laplacian(benchmark_graph());
  Eigen::RowVectorXd last(6);
  last << 0, 0, 0, -1, 0, 1;
  CHECK(L.row(5) == last);
  CHECK(L.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spectrum of the benchmark graph") {
  const Spectrum s = spectrum(benchmark_graph());
  const double expected[] = {0, 0.446, 0.871, 1.284, 1.521, 1.877};
  for (int i = 0; i < 6; ++i) CHECK(std::abs(s.eigenvalues(i) - expected[i]) < 5e-4);
  CHECK(has_simple_zero(s));
}

TEST_CASE("spectrum of small graphs") {
  const Spectrum k2 = spectrum(testing::complete_graph(2));
  CHECK(std::abs(k2.eigenvalues(0)) < 1e-12);
  CHECK(k2.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(has_simple_zero(k2));

  // Oracle: det(L - tI) = -t (t - 1) (t - 2) for the 3-node path, checked at
  // several t without touching the eigensolver.
  const Eigen::MatrixXd L = normalized_laplacian(testing::path_graph(3));
  for (double t : {-1.0, 0.25, 0.5, 1.5, 3.0}) {
    const double det = (L - t * Eigen::MatrixXd::Identity(3, 3)).determinant();
    CHECK(det == doctest::Approx(-t * (t - 1) * (t - 2)));
  }
  const Spectrum p3 = spectrum(testing::path_graph(3));
  CHECK(std::abs(p3.eigenvalues(0)) < 1e-12);
  CHECK(p3.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(p3.eigenvalues(2) == doctest::Approx(2.0));
}

TEST_CASE("has_simple_zero detects components") {
  CHECK_FALSE(has_simple_zero(spectrum(Graph::from_adjacency(two_disjoint_edges()))));
}

TEST_CASE("spectrum invariants on random graphs") {
  testing::Rng rng(2024);
  int connected_count = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = testing::uniform_int(rng, 2, 12);
    const Graph g = testing::random_graph(rng, n, testing::uniform(rng, 0.05, 0.6));
    const Spectrum s = spectrum(g);
    const Eigen::MatrixXd L = normalized_laplacian(g);

    const bool connected = is_connected(g);
    connected_count += connected;
    CHECK(connected == has_simple_zero(s, 1e-8));

    CHECK(s.eigenvalues.minCoeff() >= -1e-9);
    CHECK(s.eigenvalues.maxCoeff() <= 2.0 + 1e-9);
    CHECK(std::abs(s.eigenvalues(0)) <= 1e-9);
    CHECK((s.left * s.right - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
    for (int i = 0; i < n; ++i) {
      CHECK((L * s.right.col(i) - s.eigenvalues(i) * s.right.col(i)).norm() <= 1e-9);
      CHECK((s.left.row(i) * L - s.eigenvalues(i) * s.left.row(i)).norm() <= 1e-9);
    }
    if (connected) {
      CHECK(s.eigenvalues(n - 1) >= double(n) / (n - 1) - 1e-9);
    }
  }
  // The generator must exercise both outcomes.
  CHECK(connected_count > 20);
  CHECK(connected_count < 130);
}
