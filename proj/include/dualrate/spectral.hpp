#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "dualrate/dynamics.hpp"
#include "dualrate/graph.hpp"
#include "dualrate/lifted.hpp"
#include "dualrate/polynomial.hpp"

namespace dualrate {

/// Characteristic polynomial of one Laplacian mode of the lifted loop:
///   z^{theta+2} - (1-gamma) z^{theta+1} - (1-lambda) gamma f0 z - (1-lambda) gamma f1.
struct CharPoly {
  double lambda = 0.0;
  int theta = 0;
  Coefficients<double> coeffs;  // ascending, monic

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  template <typename T>
  T operator()(const T& z) const {
    return poly_eval(coeffs, z);
  }
};

template <typename Ratio>
CharPoly char_poly(double lambda, const LiftedCoefficients<double, Ratio>& lc) {
  const int degree = lc.theta + 2;
  CharPoly p{lambda, lc.theta, Coefficients<double>::Zero(degree + 1)};
  const double delayed = (1.0 - lambda) * lc.gamma;
  p.coeffs(degree) += 1.0;
  p.coeffs(degree - 1) -= 1.0 - lc.gamma;
  p.coeffs(1) -= delayed * lc.f0;
  p.coeffs(0) -= delayed * lc.f1;
  return p;
}

std::vector<std::complex<double>> poly_roots(const CharPoly& p, const RootOptions& opts = {});

/// Modes with |lambda| at or below this are treated as the consensus mode.
inline constexpr double kConsensusModeTolerance = 1e-12;

/// Dominant root modulus of a mode for real-valued N >= 1.
///
/// For the consensus mode (lambda = 0) the root z = 1 is divided out first
/// and the largest remaining modulus is returned.
double zbar(double lambda, double epsilon, int h, double N);

/// Reparametrisation of the quadratic (h <= N) regime in g = (1-eps)^N.
///
/// For lambda in (0,1] the roots are p1 +- sqrt(p1^2 + p2) with
/// b = 1 - lambda; for lambda in (1,2] they are p1 +- sqrt(p1^2 - p2) with
/// b = lambda - 1 and a different p1. The two conventions are never mixed.
struct SubstitutionVars {
  double g = 0.0;
  double b = 0.0;
  double c = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;
  bool upper_branch = false;  // lambda in (1, 2]
};

SubstitutionVars substitution_vars(double lambda, double epsilon, int h, double N);

/// Branch-selected closed form of zbar on 1 <= h <= N, lambda in (0, 2].
/// Throws OutOfRegime outside that region.
double zbar_closed_form(double lambda, double epsilon, int h, double N);

struct ModeRootCurve {
  double lambda = 0.0;
  std::vector<double> N;
  std::vector<double> zbar;
};

ModeRootCurve mode_curve(double lambda, double epsilon, int h, std::span<const double> N_values);

/// Modal coordinates alpha_i(l) = mu_i^T x(l), one row per mode and one
/// column per trace step. Throws DimensionMismatch on size disagreement.
Eigen::MatrixXd project_modes(const Spectrum& s, const Trace& trace);

}  // namespace dualrate
