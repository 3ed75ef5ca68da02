#include "dualrate/dynamics.hpp"

#include <algorithm>
#include <string>

#include "dualrate/errors.hpp"

namespace dualrate {

namespace {

void check_state(const Graph& g, const Eigen::VectorXd& x0) {
  if (x0.size() != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state has " + std::to_string(x0.size()) +
                                                  " entries, graph has " +
                                                  std::to_string(g.size()) + " vertices");
  }
}

}  // namespace

void SystemParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
  }
  if (h < 0) throw Error(ErrorCode::InvalidParameter, "h must be >= 0");
  if (N < 1) throw Error(ErrorCode::InvalidParameter, "N must be >= 1");
}

DerivedQuantities derived_quantities(const SystemParams& p) {
  p.validate();
  return lifted_coefficients(p.epsilon, p.h, p.N);
}

Trace simulate_fast(const Graph& g, const SystemParams& p, const Eigen::VectorXd& x0,
                    Eigen::Index steps) {
  p.validate();
  check_state(g, x0);
  if (steps < 1) throw Error(ErrorCode::InvalidParameter, "steps must be >= 1");

  const Eigen::MatrixXd W = g.averaging_matrix();
  Trace trace{TraceKind::Fast, p, x0, Eigen::MatrixXd(g.size(), steps + 1)};
  trace.states.col(0) = x0;

  // Neighbour average of the held sample; refreshed when a new one lands.
  Eigen::VectorXd held = W * x0;
  for (Eigen::Index t = 0; t < steps; ++t) {
    if (t >= p.h && (t - p.h) % p.N == 0) {
      held.noalias() = W * trace.states.col(t - p.h);
    }
    const auto x = trace.states.col(t);
    trace.states.col(t + 1) = x + p.epsilon * (held - x);
  }
  return trace;
}

Trace simulate_slow(const Graph& g, const SystemParams& p, const Eigen::VectorXd& x0,
                    Eigen::Index slow_steps) {
  const DerivedQuantities dq = derived_quantities(p);
  check_state(g, x0);
  if (slow_steps < 1) throw Error(ErrorCode::InvalidParameter, "slow_steps must be >= 1");

  const Eigen::MatrixXd W = g.averaging_matrix();
  Trace trace{TraceKind::Slow, p, x0, Eigen::MatrixXd(g.size(), slow_steps + 1)};
  trace.states.col(0) = x0;

  auto past = [&](Eigen::Index l) { return trace.states.col(std::max<Eigen::Index>(l, 0)); };

  for (Eigen::Index l = 0; l < slow_steps; ++l) {
    Eigen::VectorXd next = (1.0 - dq.gamma) * trace.states.col(l);
    if (dq.theta < 0) {
      // h = 0: only the current sample is ever used.
      next += dq.gamma * (W * trace.states.col(l));
    } else {
      next += dq.gamma * (W * (dq.f0 * past(l - dq.theta) + dq.f1 * past(l - dq.theta - 1)));
    }
    trace.states.col(l + 1) = next;
  }
  return trace;
}

double check_fast_slow_equivalence(const Graph& g, const SystemParams& p,
                                   const Eigen::VectorXd& x0, Eigen::Index slow_steps) {
  const Trace slow = simulate_slow(g, p, x0, slow_steps);
  const Trace fast = simulate_fast(g, p, x0, slow_steps * p.N);
  double deviation = 0.0;
  for (Eigen::Index k = 0; k <= slow_steps; ++k) {
    deviation = std::max(
        deviation, (fast.states.col(k * p.N) - slow.states.col(k)).lpNorm<Eigen::Infinity>());
  }
  return deviation;
}

Eigen::VectorXd spread(const Trace& trace) {
  if (trace.steps() == 0) throw Error(ErrorCode::InvalidParameter, "empty trace");
  return (trace.states.colwise().maxCoeff() - trace.states.colwise().minCoeff()).transpose();
}

std::optional<std::size_t> convergence_step(const Trace& trace, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidParameter, "delta must be positive");
  const Eigen::VectorXd s = spread(trace);
  // Last index above delta; convergence starts right after it.
  Eigen::Index last_above = -1;
  for (Eigen::Index j = s.size() - 1; j >= 0; --j) {
    if (s(j) > delta) {
      last_above = j;
      break;
    }
  }
  if (last_above == s.size() - 1) return std::nullopt;
  return static_cast<std::size_t>(last_above + 1) * static_cast<std::size_t>(trace.stride());
}

EmpiricalOptimum empirical_optimal_N(const Graph& g, double epsilon, int h,
                                     const Eigen::VectorXd& x0, double delta, int N_lo, int N_hi,
                                     Eigen::Index horizon) {
  if (N_lo < 1 || N_hi < N_lo) {
    throw Error(ErrorCode::InvalidParameter, "N range must be nonempty with N >= 1");
  }
  EmpiricalOptimum out;
  std::size_t best = 0;
  for (int N = N_lo; N <= N_hi; ++N) {
    const Trace trace = simulate_fast(g, SystemParams{epsilon, h, N}, x0, horizon);
    const auto k = convergence_step(trace, delta);
    if (!k) {
      throw Error(ErrorCode::NotConverged, "N=" + std::to_string(N) +
                                               " still above delta after " +
                                               std::to_string(horizon) + " steps");
    }
    out.steps.emplace_back(N, *k);
    if (N == N_lo || *k < best) {
      best = *k;
      out.N_opt = N;
    }
  }
  return out;
}

}  // namespace dualrate
