#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "dualrate/errors.hpp"

namespace dualrate {

// Polynomials are dense coefficient vectors in ascending order:
// c(0) + c(1) z + ... + c(d) z^d.
template <typename Scalar>
using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived, typename T>
T poly_eval(const Eigen::MatrixBase<Derived>& c, const T& z) {
  T acc(0);
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * z + T(c(k));
  return acc;
}

/// Synthetic division by (z - root); the remainder is dropped.
template <typename Derived>
Coefficients<typename Derived::Scalar> deflate(const Eigen::MatrixBase<Derived>& c,
                                               const typename Derived::Scalar& root) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = c.size() - 1;
  if (d < 1) throw Error(ErrorCode::InvalidParameter, "cannot deflate a constant");
  Coefficients<Scalar> q(d);
  q(d - 1) = c(d);
  for (Eigen::Index k = d - 1; k >= 1; --k) q(k - 1) = c(k) + root * q(k);
  return q;
}

/// Roots of c2 z^2 + c1 z + c0 without cancellation in the larger root.
template <typename Scalar>
std::vector<std::complex<Scalar>> quadratic_roots(const Scalar& c0, const Scalar& c1,
                                                  const Scalar& c2) {
  using std::abs;
  using std::sqrt;
  using Complex = std::complex<Scalar>;
  const Scalar disc = c1 * c1 - Scalar(4) * c2 * c0;
  if (disc >= Scalar(0)) {
    const Scalar s = sqrt(disc);
    const Scalar q = Scalar(-0.5) * (c1 + (c1 >= Scalar(0) ? s : -s));
    if (q == Scalar(0)) return {Complex(0), Complex(0)};
    return {Complex(q / c2), Complex(c0 / q)};
  }
  const Scalar re = -c1 / (Scalar(2) * c2);
  const Scalar im = sqrt(-disc) / (Scalar(2) * abs(c2));
  return {Complex(re, im), Complex(re, -im)};
}

struct RootOptions {
  int max_iterations = 10000;
  int restart_after = 500;
  double residual_tolerance = 1e-10;
  unsigned seed = 0x5eed;
};

/// All complex roots of a polynomial with nonzero leading coefficient.
///
/// Degree 1 and 2 are solved directly; higher degrees run Aberth-Ehrlich
/// simultaneous iteration, restarting from randomly perturbed guesses when
/// it stagnates. Every accepted root satisfies
/// |P(z)| <= tol * (1 + |z|)^degree. Throws RootSolverNoConvergence when the
/// iteration budget runs out.
template <typename Derived>
std::vector<std::complex<typename Derived::Scalar>> poly_roots(
    const Eigen::MatrixBase<Derived>& coeffs, const RootOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  using Complex = std::complex<Scalar>;
  using std::abs;
  using std::pow;

  const Eigen::Index d = coeffs.size() - 1;
  if (d < 1) throw Error(ErrorCode::InvalidParameter, "polynomial degree must be >= 1");
  if (coeffs(d) == Scalar(0)) {
    throw Error(ErrorCode::InvalidParameter, "leading coefficient must be nonzero");
  }
  if (d == 1) return {Complex(-coeffs(0) / coeffs(1))};
  if (d == 2) return quadratic_roots(coeffs(0), coeffs(1), coeffs(2));

  const Coefficients<Scalar> c = coeffs / coeffs(d);
  Coefficients<Scalar> dc(d);
  for (Eigen::Index k = 1; k <= d; ++k) dc(k - 1) = Scalar(k) * c(k);
  Coefficients<Scalar> abs_c = c.cwiseAbs();

  const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
  const auto n = static_cast<std::size_t>(d);

  auto acceptable = [&](const Complex& z) {
    return abs(poly_eval(c, z)) <=
           Scalar(opts.residual_tolerance) * pow(Scalar(1) + abs(z), Scalar(d));
  };

  // Initial guesses on a circle whose radius is the geometric mean of the
  // root moduli, rotated off the real axis.
  Scalar radius = pow(std::max(abs(c(0)), eps), Scalar(1) / Scalar(d));
  radius = std::max(radius, Scalar(0.5));
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar angle = Scalar(2) * Scalar(std::numbers::pi) * Scalar(i) / Scalar(d) +
                         Scalar(0.4);
    z[i] = std::polar(radius, angle);
  }

  std::mt19937 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  std::vector<Complex> step(n);

  int since_restart = 0;
  for (int it = 0; it < opts.max_iterations; ++it, ++since_restart) {
    bool settled = true;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex p = poly_eval(c, z[i]);
      // Rounding floor of the Horner evaluation at z[i].
      const Scalar floor = Scalar(4) * eps * poly_eval(abs_c, abs(z[i]));
      if (abs(p) <= floor) {
        step[i] = Complex(0);
        continue;
      }
      const Complex ratio = p / poly_eval(dc, z[i]);
      Complex repulsion(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) repulsion += Scalar(1) / (z[i] - z[j]);
      }
      step[i] = ratio / (Scalar(1) - ratio * repulsion);
      z[i] -= step[i];
      if (abs(step[i]) > Scalar(2) * eps * abs(z[i])) settled = false;
    }
    if (settled && std::all_of(z.begin(), z.end(), acceptable)) return z;

    if (since_restart >= opts.restart_after) {
      for (auto& zi : z) {
        zi += Complex(Scalar(jitter(rng)), Scalar(jitter(rng))) * Scalar(0.1) *
              (Scalar(1) + abs(zi));
      }
      since_restart = 0;
    }
    for (const auto& zi : z) {
      if (!std::isfinite(static_cast<double>(abs(zi)))) {
        for (std::size_t i = 0; i < n; ++i) {
          z[i] = std::polar(radius, Scalar(2) * Scalar(std::numbers::pi) * Scalar(jitter(rng)));
        }
        since_restart = 0;
        break;
      }
    }
  }
  throw Error(ErrorCode::RootSolverNoConvergence,
              "Aberth iteration exhausted " + std::to_string(opts.max_iterations) +
                  " iterations at degree " + std::to_string(d));
}

template <typename Scalar>
Scalar max_modulus(const std::vector<std::complex<Scalar>>& roots) {
  using std::abs;
  Scalar m(0);
  for (const auto& z : roots) m = std::max(m, Scalar(abs(z)));
  return m;
}

}  // namespace dualrate
