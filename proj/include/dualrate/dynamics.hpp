#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dualrate/graph.hpp"
#include "dualrate/lifted.hpp"

namespace dualrate {

/// Controller gain, measurement delay h (fast steps) and sampling period
/// ratio N. The fast period T is 1.
struct SystemParams {
  double epsilon = 0.3;
  int h = 0;
  int N = 1;

  /// Throws InvalidParameter unless 0 < epsilon < 1, h >= 0 and N >= 1.
  void validate() const;
};

using DerivedQuantities = LiftedCoefficients<double, int>;

DerivedQuantities derived_quantities(const SystemParams& p);

enum class TraceKind { Fast, Slow };

/// Agent states over time, one column per step; column 0 is x(0).
struct Trace {
  TraceKind kind = TraceKind::Fast;
  SystemParams params;
  Eigen::VectorXd initial_state;
  Eigen::MatrixXd states;

  Eigen::Index steps() const noexcept { return states.cols(); }
  /// Fast steps covered by one column (1 for fast traces, N for slow ones).
  int stride() const noexcept { return kind == TraceKind::Fast ? 1 : params.N; }
};

/// Runs the dual-rate loop at the control rate for `steps` updates.
///
/// At fast step t each agent uses the newest neighbour sample x(lN) with
/// lN + h <= t. Before the first sample arrives (t < h) the receive buffer
/// holds x(0).
Trace simulate_fast(const Graph& g, const SystemParams& p, const Eigen::VectorXd& x0,
                    Eigen::Index steps);

/// Iterates the lifted recursion once per measurement period, with
/// x_s(l) = x0 for every l <= 0.
Trace simulate_slow(const Graph& g, const SystemParams& p, const Eigen::VectorXd& x0,
                    Eigen::Index slow_steps);

/// max_k |x(kN) - x_s(k)|_inf over k = 0..slow_steps.
double check_fast_slow_equivalence(const Graph& g, const SystemParams& p,
                                   const Eigen::VectorXd& x0, Eigen::Index slow_steps);

/// Per-step max_i x_i - min_i x_i.
Eigen::VectorXd spread(const Trace& trace);

/// First fast step k with spread(j) <= delta for every simulated j >= k.
/// Returns nullopt when the last simulated step is still above delta.
/// Slow-trace indices are scaled by N into fast steps.
std::optional<std::size_t> convergence_step(const Trace& trace, double delta);

inline constexpr double kDefaultDelta = 1e-5;
inline constexpr Eigen::Index kDefaultHorizon = 5000;

struct EmpiricalOptimum {
  int N_opt = 0;
  std::vector<std::pair<int, std::size_t>> steps;  // (N, convergence step)
};

/// Simulates every N in [N_lo, N_hi] for `horizon` fast steps and returns
/// the one that converges first, preferring the smaller N on ties. Throws
/// NotConverged if any candidate is still above delta at the horizon.
EmpiricalOptimum empirical_optimal_N(const Graph& g, double epsilon, int h,
                                     const Eigen::VectorXd& x0, double delta, int N_lo, int N_hi,
                                     Eigen::Index horizon = kDefaultHorizon);

}  // namespace dualrate
