#include "dualrate/spectral.hpp"

#include <cmath>
#include <string>

#include "dualrate/errors.hpp"

namespace dualrate {

std::vector<std::complex<double>> poly_roots(const CharPoly& p, const RootOptions& opts) {
  return poly_roots(p.coeffs, opts);
}

double zbar(double lambda, double epsilon, int h, double N) {
  if (!(lambda >= -kConsensusModeTolerance && lambda <= 2.0 + kConsensusModeTolerance)) {
    throw Error(ErrorCode::InvalidParameter, "lambda must lie in [0, 2]");
  }
  const auto lc = lifted_coefficients(epsilon, h, N);
  const CharPoly p = char_poly(lambda, lc);
  if (std::abs(lambda) <= kConsensusModeTolerance) {
    const Coefficients<double> rest = deflate(p.coeffs, 1.0);
    if (rest.size() == 1) return 0.0;
    return max_modulus(poly_roots(rest));
  }
  return max_modulus(poly_roots(p));
}

SubstitutionVars substitution_vars(double lambda, double epsilon, int h, double N) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
  }
  SubstitutionVars v;
  v.g = std::pow(1.0 - epsilon, N);
  v.c = std::pow(1.0 - epsilon, -static_cast<double>(h));
  v.upper_branch = lambda > 1.0;
  v.b = std::abs(1.0 - lambda);
  v.p2 = v.b * v.g * (v.c - 1.0);
  if (v.upper_branch) {
    v.p1 = ((1.0 + v.b * v.c) * v.g - v.b) / 2.0;
  } else {
    v.p1 = ((1.0 - v.b * v.c) * v.g + v.b) / 2.0;
  }
  return v;
}

double zbar_closed_form(double lambda, double epsilon, int h, double N) {
  if (h < 1 || N < h) {
    throw Error(ErrorCode::OutOfRegime, "closed form needs 1 <= h <= N (h=" + std::to_string(h) +
                                            ", N=" + std::to_string(N) + ")");
  }
  if (!(lambda > 0.0 && lambda <= 2.0)) {
    throw Error(ErrorCode::OutOfRegime, "closed form needs lambda in (0, 2]");
  }
  const SubstitutionVars v = substitution_vars(lambda, epsilon, h, N);
  if (!v.upper_branch) return v.p1 + std::sqrt(v.p1 * v.p1 + v.p2);

  const double disc = v.p1 * v.p1 - v.p2;
  if (disc < 0.0) return std::sqrt(v.p2);  // complex pair
  if (v.p1 < 0.0) return -v.p1 + std::sqrt(disc);
  return v.p1 + std::sqrt(disc);
}

ModeRootCurve mode_curve(double lambda, double epsilon, int h, std::span<const double> N_values) {
  ModeRootCurve curve{lambda, {N_values.begin(), N_values.end()}, {}};
  curve.zbar.reserve(N_values.size());
  for (double N : N_values) curve.zbar.push_back(zbar(lambda, epsilon, h, N));
  return curve;
}

Eigen::MatrixXd project_modes(const Spectrum& s, const Trace& trace) {
  if (s.left.cols() != trace.states.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "spectrum has " + std::to_string(s.left.cols()) + " modes, trace has " +
                    std::to_string(trace.states.rows()) + " agents");
  }
  return s.left * trace.states;
}

}  // namespace dualrate
