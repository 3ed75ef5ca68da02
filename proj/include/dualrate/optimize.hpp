#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dualrate/dynamics.hpp"
#include "dualrate/graph.hpp"

namespace dualrate {

/// Per-mode minimiser of zbar over N for a mode in (1, 2].
///
/// g = (1-eps)^N. g0 zeroes p1; g1 <= g0 <= g2 are the roots of the
/// discriminant p1^2 - p2 = 0 and the minimum sits at g1.
struct ModeMinimum {
  double lambda = 0.0;
  double g0 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double N_real = 0.0;
  int N_int = 0;
  double zbar_at_min = 0.0;
};

/// Throws NoFiniteMinimum for lambda <= 1 (zbar decreases monotonically
/// there) and InvalidParameter for h < 1.
ModeMinimum mode_minimum(double lambda, double epsilon, int h);

inline constexpr double kFiniteMinimizerTolerance = 1e-9;

/// |1 - l1| < |1 - l_{n-1}|, or equality with l1 == l_{n-1}. `eigenvalues`
/// must be ascending with a simple zero at the front.
bool finite_minimizer_exists(const Eigen::VectorXd& eigenvalues,
                             double tol = kFiniteMinimizerTolerance);
bool finite_minimizer_exists(const Spectrum& s, double tol = kFiniteMinimizerTolerance);

/// Min-max objective on N >= h: max of zbar over the consensus mode, the
/// smallest nonzero mode and every mode in (1, 2]. Throws OutOfRegime for
/// N < h or h < 1.
double objective(double N, const Eigen::VectorXd& eigenvalues, double epsilon, int h);

/// max of zbar over every mode, valid for any N >= 1. Agrees with
/// `objective` when N >= h.
double full_objective(double N, const Eigen::VectorXd& eigenvalues, double epsilon, int h);

/// The large-N limit of the objective, max(|1 - l1|, |1 - l_{n-1}|).
double objective_limit(const Eigen::VectorXd& eigenvalues);

/// Integer sampling ratio or "never sample".
class OptimalRatio {
 public:
  static OptimalRatio finite(int N) { return OptimalRatio(N); }
  static OptimalRatio infinite() { return OptimalRatio(std::nullopt); }

  bool is_finite() const noexcept { return value_.has_value(); }
  int value() const { return value_.value(); }
  std::string to_string() const { return value_ ? std::to_string(*value_) : "inf"; }

  friend bool operator==(const OptimalRatio&, const OptimalRatio&) = default;

 private:
  explicit OptimalRatio(std::optional<int> v) : value_(v) {}
  std::optional<int> value_;
};

struct ObjectivePoint {
  int N = 0;
  double value = 0.0;
  bool within_constraint = true;  // N >= h
};

struct ConjectureResult {
  bool holds = true;
  struct Counterexample {
    int N = 0;
    double lambda = 0.0;
    double zbar_mode = 0.0;
    double zbar_top = 0.0;
  };
  std::optional<Counterexample> counterexample;
};

struct OptimizationReport {
  Eigen::VectorXd eigenvalues;
  double epsilon = 0.0;
  int h = 0;
  int N_max = 0;
  bool finite_exists = false;
  OptimalRatio N_star = OptimalRatio::infinite();
  /// Argmin over every integer in [1, N_max]; points below h use
  /// `full_objective`.
  int N_global = 1;
  double objective_at_star = 0.0;
  double limit = 0.0;
  std::vector<ObjectivePoint> curve;  // N = 1..N_max
  std::vector<ModeMinimum> mode_minima;
  ConjectureResult conjecture;
  std::optional<int> N_opt;
  std::optional<int> N_opt_geq_h;
};

/// 2 * max(ceil(N_real)) + 10 over modes in (1, 2], capped at 200 and never
/// below h.
int default_N_max(const Eigen::VectorXd& eigenvalues, double epsilon, int h);

/// Minimises `objective` over integers in [h, N_max], ties to the smaller N.
/// N_star is infinite when no finite minimiser exists.
OptimizationReport solve_N_star(const Spectrum& s, double epsilon, int h,
                                std::optional<int> N_max = std::nullopt);

/// Diagnostic: does the largest mode dominate every other mode in (1, 2]
/// over the given N values?
ConjectureResult conjecture_check(const Eigen::VectorXd& eigenvalues, double epsilon, int h,
                                  std::span<const int> N_values);

struct TableOneRow {
  double epsilon = 0.0;
  OptimalRatio N_star = OptimalRatio::infinite();
  std::optional<int> N_opt_geq_h;  // nullopt: some candidate did not converge
  std::optional<int> N_opt;
};

struct TableOne {
  int h = 0;
  std::vector<TableOneRow> rows;

  bool complete() const;
};

/// Model-based optimum next to the empirically fastest ratio over
/// [max(h, N_lo), N_hi] and over [N_lo, N_hi] for every gain in the grid.
TableOne table_one(const Graph& g, std::span<const double> epsilon_grid, int h,
                   const Eigen::VectorXd& x0, double delta, int N_lo, int N_hi,
                   Eigen::Index horizon = kDefaultHorizon);

/// Columns of zbar per mode plus the objective, for plotting.
struct CurveTable {
  Eigen::VectorXd eigenvalues;
  std::vector<int> N;
  Eigen::MatrixXd zbar;             // rows: N, cols: modes
  std::vector<double> objective;    // `objective` for N >= h, `full_objective` below
  std::vector<bool> within_constraint;
};

CurveTable curve_table(const Eigen::VectorXd& eigenvalues, double epsilon, int h,
                       std::span<const int> N_values);

}  // namespace dualrate
