#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "dualrate/dualrate.hpp"

namespace dualrate::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string graph_path;
  std::string epsilon;  // empty: command default
  int h = 10;
  std::string N;
  std::string x0;
  double delta = kDefaultDelta;
  long long horizon = kDefaultHorizon;
  std::string out_path;
  std::string format = "csv";
  std::string kind = "fast";
  bool empirical = false;
};

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw UsageError("invalid " + what + ": '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) throw UsageError("invalid " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string p;
  while (std::getline(ss, p, sep)) parts.push_back(p);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

/// `v` or `a:b:step`, inclusive of b up to rounding.
std::vector<double> parse_epsilon_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  std::vector<double> grid;
  if (parts.size() == 1) {
    grid.push_back(parse_double(parts[0], "epsilon"));
  } else if (parts.size() == 3) {
    const double a = parse_double(parts[0], "epsilon start");
    const double b = parse_double(parts[1], "epsilon stop");
    const double step = parse_double(parts[2], "epsilon step");
    if (!(step > 0.0)) throw UsageError("epsilon step must be positive");
    if (b >= a) {
      const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9)) + 1;
      for (long long k = 0; k < count; ++k) {
        grid.push_back(io::round_printed(a + static_cast<double>(k) * step));
      }
    }
  } else {
    throw UsageError("epsilon must be <v> or <a:b:step>");
  }
  if (grid.empty()) throw UsageError("epsilon grid is empty");
  for (double e : grid) {
    if (!(e > 0.0 && e < 1.0)) throw UsageError("epsilon values must lie in (0, 1)");
  }
  return grid;
}

/// `k` or `a:b`.
std::vector<int> parse_N_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  int lo = 0;
  int hi = 0;
  if (parts.size() == 1) {
    lo = hi = parse_int(parts[0], "N");
  } else if (parts.size() == 2) {
    lo = parse_int(parts[0], "N start");
    hi = parse_int(parts[1], "N stop");
  } else {
    throw UsageError("N must be <int> or <a:b>");
  }
  if (lo < 1) throw UsageError("N must be >= 1");
  if (hi < lo) throw UsageError("N range is empty");
  std::vector<int> range(static_cast<std::size_t>(hi - lo + 1));
  std::iota(range.begin(), range.end(), lo);
  return range;
}

Eigen::VectorXd parse_x0(const std::string& spec, const Graph& g) {
  if (spec == "benchmark") {
    if (g.size() != 6) throw UsageError("--x0 " + spec + " needs a 6-agent graph");
    return benchmark_initial_state();
  }
  const auto parts = split(spec, ',');
  if (static_cast<Eigen::Index>(parts.size()) != g.size()) {
    throw UsageError("--x0 has " + std::to_string(parts.size()) + " values, graph has " +
                     std::to_string(g.size()) + " agents");
  }
  Eigen::VectorXd x0(g.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    x0(static_cast<Eigen::Index>(i)) = parse_double(parts[i], "x0 entry");
  }
  return x0;
}

/// The benchmark graphs default to the benchmark initial state.
Eigen::VectorXd initial_state(const RunConfig& cfg, const Graph& g) {
  if (!cfg.x0.empty()) return parse_x0(cfg.x0, g);
  if (g == benchmark_graph() || g == benchmark_graph_no_finite_minimizer()) {
    return benchmark_initial_state();
  }
  throw UsageError("--x0 is required for this graph");
}

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::Csv;
  if (f == "json") return Format::Json;
  throw UsageError("--format must be csv or json");
}

int check_h(int h) {
  if (h < 0) throw UsageError("--h must be >= 0");
  return h;
}

/// Writes to --out if given, else to `out`. The file is written in one go.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& text,
          const std::string& path_override = {}) {
  const std::string path = path_override.empty() ? cfg.out_path : path_override;
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Format fmt = parse_format(cfg.format);
  const Graph g = io::read_graph_file(cfg.graph_path);
  const Spectrum s = spectrum(g);
  const bool connected = is_connected(g);
  std::ostringstream text;
  if (fmt == Format::Json) {
    text << dump(io::to_json(s, connected));
  } else {
    io::write_spectrum_csv(text, s);
  }
  emit(cfg, out, text.str());

  err << "connected: " << (connected ? "yes" : "no") << '\n';
  err << "|1-lambda_1| = " << io::format_number(std::abs(1.0 - s.eigenvalues(1)))
      << ", |1-lambda_max| = " << io::format_number(std::abs(1.0 - s.eigenvalues(s.size() - 1)))
      << '\n';
  const bool finite = connected && finite_minimizer_exists(s);
  err << (finite ? "finite minimizer exists" : "no finite minimizer") << '\n';
  return kOk;
}

std::string per_N_path(const std::string& base, int N) {
  const std::filesystem::path p(base);
  std::filesystem::path named = p.parent_path() / (p.stem().string() + "_N" + std::to_string(N));
  named += p.extension();
  return named.string();
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Format fmt = parse_format(cfg.format);
  const Graph g = io::read_graph_file(cfg.graph_path);
  const auto eps = parse_epsilon_grid(cfg.epsilon.empty() ? "0.3" : cfg.epsilon);
  if (eps.size() != 1) throw UsageError("simulate takes a single epsilon");
  const auto Ns = parse_N_range(cfg.N.empty() ? "1" : cfg.N);
  if (Ns.size() > 1 && cfg.out_path.empty()) {
    throw UsageError("several N values need --out (one file per N)");
  }
  if (cfg.kind != "fast" && cfg.kind != "slow") throw UsageError("--kind must be fast or slow");
  if (cfg.horizon < 1) throw UsageError("--horizon must be >= 1");
  if (!(cfg.delta > 0.0)) throw UsageError("--delta must be positive");
  const Eigen::VectorXd x0 = initial_state(cfg, g);

  for (int N : Ns) {
    const SystemParams p{eps[0], check_h(cfg.h), N};
    const Trace trace = cfg.kind == "fast"
                            ? simulate_fast(g, p, x0, cfg.horizon)
                            : simulate_slow(g, p, x0, (cfg.horizon + N - 1) / N);
    std::ostringstream text;
    if (fmt == Format::Json) {
      text << dump(io::to_json(trace));
    } else {
      io::write_trace_csv(text, trace);
    }
    emit(cfg, out, text.str(), Ns.size() > 1 ? per_N_path(cfg.out_path, N) : std::string{});

    const auto k = convergence_step(trace, cfg.delta);
    err << "N=" << N << ' ';
    if (k) {
      err << "convergence_step=" << *k << '\n';
    } else {
      err << "not converged (spread " << io::format_number(spread(trace).tail(1)(0))
          << " > delta at horizon)\n";
    }
  }
  return kOk;
}

int cmd_curves(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Format fmt = parse_format(cfg.format);
  const Graph g = io::read_graph_file(cfg.graph_path);
  const auto eps = parse_epsilon_grid(cfg.epsilon.empty() ? "0.3" : cfg.epsilon);
  if (eps.size() != 1) throw UsageError("curves takes a single epsilon");
  const auto Ns = parse_N_range(cfg.N.empty() ? "1:50" : cfg.N);
  const CurveTable t = curve_table(spectrum(g).eigenvalues, eps[0], check_h(cfg.h), Ns);
  std::ostringstream text;
  if (fmt == Format::Json) {
    text << dump(io::to_json(t));
  } else {
    io::write_curves_csv(text, t);
  }
  emit(cfg, out, text.str());
  return kOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Format fmt = parse_format(cfg.format);
  const Graph g = io::read_graph_file(cfg.graph_path);
  const auto eps = parse_epsilon_grid(cfg.epsilon.empty() ? "0.3" : cfg.epsilon);
  if (eps.size() != 1) throw UsageError("optimize takes a single epsilon; use table1 for grids");
  const int h = check_h(cfg.h);
  if (h < 1) throw UsageError("optimize needs --h >= 1");

  std::optional<int> N_max;
  std::vector<int> search = parse_N_range(cfg.N.empty() ? "1:50" : cfg.N);
  if (!cfg.N.empty()) N_max = std::max(search.back(), h);

  OptimizationReport report = solve_N_star(spectrum(g), eps[0], h, N_max);
  int code = kOk;
  if (cfg.empirical) {
    const Eigen::VectorXd x0 = initial_state(cfg, g);
    const int lo = search.front();
    const int hi = search.back();
    try {
      report.N_opt = empirical_optimal_N(g, eps[0], h, x0, cfg.delta, lo, hi, cfg.horizon).N_opt;
      if (hi >= h) {
        report.N_opt_geq_h =
            empirical_optimal_N(g, eps[0], h, x0, cfg.delta, std::max(lo, h), hi, cfg.horizon)
                .N_opt;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotConverged) throw;
      err << e.what() << '\n';
      code = kPartial;
    }
  }

  std::ostringstream text;
  if (fmt == Format::Json) {
    text << dump(io::to_json(report));
  } else {
    io::write_objective_csv(text, report);
  }
  emit(cfg, out, text.str());
  err << "N_star=" << report.N_star.to_string() << " (objective "
      << io::format_number(report.objective_at_star) << ", limit "
      << io::format_number(report.limit) << ")\n";
  return code;
}

int cmd_table1(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Format fmt = parse_format(cfg.format);
  const Graph g = io::read_graph_file(cfg.graph_path);
  const auto grid = parse_epsilon_grid(cfg.epsilon.empty() ? "0.1:0.9:0.1" : cfg.epsilon);
  const int h = check_h(cfg.h);
  if (h < 1) throw UsageError("table1 needs --h >= 1");
  const auto Ns = parse_N_range(cfg.N.empty() ? "1:50" : cfg.N);
  if (cfg.horizon < 1) throw UsageError("--horizon must be >= 1");
  const Eigen::VectorXd x0 = initial_state(cfg, g);

  const TableOne t = table_one(g, grid, h, x0, cfg.delta, Ns.front(), Ns.back(), cfg.horizon);
  std::ostringstream text;
  if (fmt == Format::Json) {
    text << dump(io::to_json(t));
  } else {
    io::write_table_one_csv(text, t);
  }
  emit(cfg, out, text.str());
  if (!t.complete()) {
    err << "some cells did not converge within the horizon; enlarge --horizon\n";
    return kPartial;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dual-rate delayed consensus: spectra, simulation and sampling-ratio optimisation",
               "dualrate-cli"};
  app.require_subcommand(1);

  RunConfig cfg;
  struct Command {
    const char* name;
    const char* help;
    std::function<int(const RunConfig&, std::ostream&, std::ostream&)> fn;
    CLI::App* app = nullptr;
  };
  std::vector<Command> commands = {
      {"spectrum", "Normalized-Laplacian eigenvalues and finite-minimizer verdict", cmd_spectrum},
      {"simulate", "Simulate the closed loop and export the state trace", cmd_simulate},
      {"curves", "Per-mode dominant root moduli and the objective over N", cmd_curves},
      {"optimize", "Model-based optimal sampling ratio N*", cmd_optimize},
      {"table1", "N* against empirically fastest ratios over an epsilon grid", cmd_table1},
  };

  for (auto& c : commands) {
    c.app = app.add_subcommand(c.name, c.help);
    auto* sub = c.app;
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--graph", cfg.graph_path, "Graph JSON {\"n\":..,\"edges\":[[i,j],..]}")
        ->required();
    sub->add_option("--out", cfg.out_path, "Output file (default: stdout)");
    sub->add_option("--format", cfg.format, "csv or json")->capture_default_str();
    if (c.name == std::string("spectrum")) continue;
    sub->add_option("--epsilon", cfg.epsilon,
                    "Gain <v> or grid <a:b:step> (default 0.3; table1: 0.1:0.9:0.1)");
    sub->add_option("--h", cfg.h, "Measurement delay in control steps")->capture_default_str();
    if (c.name == std::string("curves")) {
      sub->add_option("--N", cfg.N, "Sampling ratio range <a:b> (default 1:50)");
      continue;
    }
    sub->add_option("--N", cfg.N, "Sampling ratio <int> or range <a:b>");
    sub->add_option("--x0", cfg.x0, "Initial state <v0,v1,...> or 'benchmark'");
    sub->add_option("--delta", cfg.delta, "Spread threshold for convergence")
        ->capture_default_str();
    sub->add_option("--horizon", cfg.horizon, "Simulated control steps")->capture_default_str();
    if (c.name == std::string("simulate")) {
      sub->add_option("--kind", cfg.kind, "fast (control rate) or slow (measurement rate)")
          ->capture_default_str();
    }
    if (c.name == std::string("optimize")) {
      sub->add_flag("--empirical", cfg.empirical, "Also search N_opt by simulation over --N");
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (const auto& c : commands) {
      if (c.app->parsed()) return c.fn(cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::NotConverged:
      case ErrorCode::EigensolverNoConvergence:
      case ErrorCode::RootSolverNoConvergence:
        return kPartial;
      default:
        return kUsage;
    }
  }
  return kUsage;
}

}  // namespace dualrate::cli
