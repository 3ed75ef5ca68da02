#pragma once

#include <Eigen/Dense>
#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dualrate/errors.hpp"

namespace dualrate {

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;  // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // orthonormal columns
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for small dense symmetric matrices.
///
/// Each sweep annihilates every off-diagonal pair (p, q) with a plane
/// rotation; iteration stops once the off-diagonal Frobenius norm drops
/// below machine precision relative to the full norm. Eigenpairs come back
/// sorted by ascending eigenvalue.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using std::abs;

  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::NotSquare, "jacobi_eigen expects a square matrix");
  }
  const Eigen::Index n = input.rows();

  Matrix a = Scalar(0.5) * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);

  const Scalar norm2 = a.squaredNorm();
  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
  auto off_diagonal2 = [&] {
    Scalar sum(0);
    for (Eigen::Index q = 1; q < n; ++q) sum += a.col(q).head(q).squaredNorm();
    return Scalar(2) * sum;
  };

  int sweep = 0;
  while (off_diagonal2() > eps * eps * norm2) {
    if (sweep == max_sweeps) {
      throw Error(ErrorCode::EigensolverNoConvergence,
                  "Jacobi iteration did not converge in " + std::to_string(max_sweeps) +
                      " sweeps");
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        if (!rot.makeJacobi(a, p, q)) continue;
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        v.applyOnTheRight(p, q, rot);
        a(p, q) = a(q, p) = Scalar(0);
      }
    }
    ++sweep;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace dualrate
