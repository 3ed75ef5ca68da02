#include "dualrate/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dualrate/errors.hpp"
#include "dualrate/spectral.hpp"

namespace dualrate {

namespace {

void check_eigenvalues(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() < 2) {
    throw Error(ErrorCode::InvalidParameter, "need at least two modes");
  }
}

// Mode 0 is pinned to exactly zero so zbar deflates z = 1.
double mode_value(const Eigen::VectorXd& eigenvalues, Eigen::Index i) {
  return i == 0 ? 0.0 : eigenvalues(i);
}

void check_regime(double N, int h) {
  if (h < 1) throw Error(ErrorCode::OutOfRegime, "the objective needs h >= 1");
  if (N < h) {
    throw Error(ErrorCode::OutOfRegime,
                "objective is defined on N >= h (N=" + std::to_string(N) +
                    ", h=" + std::to_string(h) + ")");
  }
}

}  // namespace

ModeMinimum mode_minimum(double lambda, double epsilon, int h) {
  // Bipartite graphs put the top eigenvalue at 2 up to rounding.
  if (lambda > 2.0 && lambda <= 2.0 + kConsensusModeTolerance) lambda = 2.0;
  if (!(lambda > 1.0 && lambda <= 2.0)) {
    throw Error(ErrorCode::NoFiniteMinimum,
                "zbar is monotone in N for lambda=" + std::to_string(lambda));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
  }
  if (h < 1) throw Error(ErrorCode::InvalidParameter, "h must be >= 1");

  const double b = lambda - 1.0;
  const double c = std::pow(1.0 - epsilon, -static_cast<double>(h));

  // (1/4)((1+bc)g - b)^2 - g b (c-1) = 0, expanded and scaled by 4.
  const double qa = (1.0 + b * c) * (1.0 + b * c);
  const double qb = -(2.0 * b * (1.0 + b * c) + 4.0 * b * (c - 1.0));
  const double qc = b * b;
  const double disc = qb * qb - 4.0 * qa * qc;
  const double q = -0.5 * (qb - std::sqrt(disc));  // qb < 0, no cancellation

  ModeMinimum m;
  m.lambda = lambda;
  m.g0 = b / (1.0 + b * c);
  m.g1 = qc / q;
  m.g2 = q / qa;
  m.N_real = std::log(m.g1) / std::log(1.0 - epsilon);
  m.zbar_at_min = zbar_closed_form(lambda, epsilon, h, m.N_real);

  const int lo = std::max(h, static_cast<int>(std::floor(m.N_real)));
  const int hi = std::max(h, static_cast<int>(std::ceil(m.N_real)));
  m.N_int = lo;
  if (hi != lo && zbar(lambda, epsilon, h, hi) < zbar(lambda, epsilon, h, lo)) m.N_int = hi;
  return m;
}

bool finite_minimizer_exists(const Eigen::VectorXd& eigenvalues, double tol) {
  check_eigenvalues(eigenvalues);
  const double l1 = eigenvalues(1);
  const double top = eigenvalues(eigenvalues.size() - 1);
  const double a = std::abs(1.0 - l1);
  const double b = std::abs(1.0 - top);
  if (std::abs(a - b) <= tol) return std::abs(l1 - top) <= tol;
  return a < b;
}

bool finite_minimizer_exists(const Spectrum& s, double tol) {
  return finite_minimizer_exists(s.eigenvalues, tol);
}

double objective(double N, const Eigen::VectorXd& eigenvalues, double epsilon, int h) {
  check_eigenvalues(eigenvalues);
  check_regime(N, h);
  double value = std::max(zbar(0.0, epsilon, h, N), zbar(eigenvalues(1), epsilon, h, N));
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) > 1.0) value = std::max(value, zbar(eigenvalues(i), epsilon, h, N));
  }
  return value;
}

double full_objective(double N, const Eigen::VectorXd& eigenvalues, double epsilon, int h) {
  check_eigenvalues(eigenvalues);
  double value = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    value = std::max(value, zbar(mode_value(eigenvalues, i), epsilon, h, N));
  }
  return value;
}

double objective_limit(const Eigen::VectorXd& eigenvalues) {
  check_eigenvalues(eigenvalues);
  return std::max(std::abs(1.0 - eigenvalues(1)),
                  std::abs(1.0 - eigenvalues(eigenvalues.size() - 1)));
}

int default_N_max(const Eigen::VectorXd& eigenvalues, double epsilon, int h) {
  int widest = h;
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i) {
    if (eigenvalues(i) > 1.0) {
      widest = std::max(widest,
                        static_cast<int>(std::ceil(mode_minimum(eigenvalues(i), epsilon, h).N_real)));
    }
  }
  return std::max(h, std::min(2 * widest + 10, 200));
}

ConjectureResult conjecture_check(const Eigen::VectorXd& eigenvalues, double epsilon, int h,
                                  std::span<const int> N_values) {
  check_eigenvalues(eigenvalues);
  if (N_values.empty()) throw Error(ErrorCode::InvalidParameter, "N range is empty");
  ConjectureResult result;
  const double top = eigenvalues(eigenvalues.size() - 1);
  for (int N : N_values) {
    const double z_top = zbar(top, epsilon, h, N);
    for (Eigen::Index i = 1; i + 1 < eigenvalues.size(); ++i) {
      if (eigenvalues(i) <= 1.0) continue;
      const double z = zbar(eigenvalues(i), epsilon, h, N);
      if (z_top < z - 1e-10) {
        result.holds = false;
        result.counterexample = ConjectureResult::Counterexample{N, eigenvalues(i), z, z_top};
        return result;
      }
    }
  }
  return result;
}

OptimizationReport solve_N_star(const Spectrum& s, double epsilon, int h,
                                std::optional<int> N_max) {
  check_eigenvalues(s.eigenvalues);
  if (h < 1) throw Error(ErrorCode::OutOfRegime, "N* is defined for h >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
  }

  OptimizationReport r;
  r.eigenvalues = s.eigenvalues;
  r.epsilon = epsilon;
  r.h = h;
  r.N_max = N_max.value_or(default_N_max(s.eigenvalues, epsilon, h));
  if (r.N_max < h) {
    throw Error(ErrorCode::InvalidParameter, "N_max must be >= h");
  }
  r.finite_exists = finite_minimizer_exists(s.eigenvalues);
  r.limit = objective_limit(s.eigenvalues);

  for (Eigen::Index i = 1; i < s.size(); ++i) {
    if (s.eigenvalues(i) > 1.0) r.mode_minima.push_back(mode_minimum(s.eigenvalues(i), epsilon, h));
  }

  double best_constrained = std::numeric_limits<double>::infinity();
  double best_global = std::numeric_limits<double>::infinity();
  int arg_constrained = h;
  for (int N = 1; N <= r.N_max; ++N) {
    const bool inside = N >= h;
    const double v =
        inside ? objective(N, s.eigenvalues, epsilon, h) : full_objective(N, s.eigenvalues, epsilon, h);
    r.curve.push_back({N, v, inside});
    if (v < best_global) {
      best_global = v;
      r.N_global = N;
    }
    if (inside && v < best_constrained) {
      best_constrained = v;
      arg_constrained = N;
    }
  }

  if (r.finite_exists) {
    r.N_star = OptimalRatio::finite(arg_constrained);
    r.objective_at_star = best_constrained;
  } else {
    r.N_star = OptimalRatio::infinite();
    r.objective_at_star = r.limit;
  }

  std::vector<int> range(static_cast<std::size_t>(r.N_max - h + 1));
  std::iota(range.begin(), range.end(), h);
  r.conjecture = conjecture_check(s.eigenvalues, epsilon, h, range);
  return r;
}

bool TableOne::complete() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const TableOneRow& r) { return r.N_opt && r.N_opt_geq_h; });
}

TableOne table_one(const Graph& g, std::span<const double> epsilon_grid, int h,
                   const Eigen::VectorXd& x0, double delta, int N_lo, int N_hi,
                   Eigen::Index horizon) {
  if (epsilon_grid.empty()) throw Error(ErrorCode::InvalidParameter, "epsilon grid is empty");
  const Spectrum s = spectrum(g);

  TableOne table;
  table.h = h;
  for (double epsilon : epsilon_grid) {
    TableOneRow row;
    row.epsilon = epsilon;
    row.N_star = solve_N_star(s, epsilon, h).N_star;
    try {
      row.N_opt_geq_h =
          empirical_optimal_N(g, epsilon, h, x0, delta, std::max(h, N_lo), N_hi, horizon).N_opt;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotConverged) throw;
    }
    try {
      row.N_opt = empirical_optimal_N(g, epsilon, h, x0, delta, N_lo, N_hi, horizon).N_opt;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotConverged) throw;
    }
    table.rows.push_back(row);
  }
  return table;
}

CurveTable curve_table(const Eigen::VectorXd& eigenvalues, double epsilon, int h,
                       std::span<const int> N_values) {
  check_eigenvalues(eigenvalues);
  CurveTable t;
  t.eigenvalues = eigenvalues;
  t.eigenvalues(0) = 0.0;
  t.N.assign(N_values.begin(), N_values.end());
  t.zbar.resize(static_cast<Eigen::Index>(N_values.size()), eigenvalues.size());
  for (std::size_t r = 0; r < N_values.size(); ++r) {
    const int N = N_values[r];
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      t.zbar(static_cast<Eigen::Index>(r), i) = zbar(mode_value(eigenvalues, i), epsilon, h, N);
    }
    const bool inside = h >= 1 && N >= h;
    t.objective.push_back(inside ? objective(N, eigenvalues, epsilon, h)
                                 : full_objective(N, eigenvalues, epsilon, h));
    t.within_constraint.push_back(inside);
  }
  return t;
}

}  // namespace dualrate
