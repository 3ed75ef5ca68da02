#include "dualrate/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "dualrate/errors.hpp"

namespace dualrate::io {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, kPrintedDigits);
  if (res.ec != std::errc{}) throw Error(ErrorCode::InvalidParameter, "number formatting failed");
  return std::string(buf, res.ptr);
}

double round_printed(double x) {
  const std::string s = format_number(x);
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return std::isfinite(x) ? v : x;
}

Graph parse_graph_json(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, source + ": " + e.what());
  }
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::Parse, source + ": " + what); };

  if (!doc.is_object()) fail("top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) fail("\"n\" must be an integer");
  if (!doc.contains("edges") || !doc["edges"].is_array()) fail("\"edges\" must be an array");

  const auto n = doc["n"].get<long long>();
  if (n <= 0) fail("\"n\" must be positive");
  std::vector<Graph::Edge> edges;
  std::size_t k = 0;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      fail("edge #" + std::to_string(k) + " must be a pair of integers");
    }
    edges.emplace_back(e[0].get<Eigen::Index>(), e[1].get<Eigen::Index>());
    ++k;
  }
  try {
    return Graph::from_edges(static_cast<Eigen::Index>(n), edges);
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_graph_json(text.str(), path.string());
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = i + 1; j < g.size(); ++j) {
      if (g.adjacency()(i, j) != 0.0) edges.push_back({i, j});
    }
  }
  return {{"n", g.size()}, {"edges", edges}};
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const Eigen::Index n = trace.states.rows();
  out << "step";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i;
  out << ",spread\n";
  const Eigen::VectorXd s = spread(trace);
  for (Eigen::Index t = 0; t < trace.steps(); ++t) {
    out << t;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(trace.states(i, t));
    out << ',' << format_number(s(t)) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    out << i << ',' << format_number(s.eigenvalues(i)) << '\n';
  }
}

void write_curves_csv(std::ostream& out, const CurveTable& t) {
  out << 'N';
  for (Eigen::Index i = 0; i < t.eigenvalues.size(); ++i) {
    out << ",zbar_lambda_" << format_number(t.eigenvalues(i));
  }
  out << ",objective,regime\n";
  for (std::size_t r = 0; r < t.N.size(); ++r) {
    out << t.N[r];
    for (Eigen::Index i = 0; i < t.zbar.cols(); ++i) {
      out << ',' << format_number(t.zbar(static_cast<Eigen::Index>(r), i));
    }
    out << ',' << format_number(t.objective[r]) << ','
        << (t.within_constraint[r] ? "h_le_N" : "h_gt_N") << '\n';
  }
}

void write_objective_csv(std::ostream& out, const OptimizationReport& r) {
  out << "N,objective,regime\n";
  for (const auto& p : r.curve) {
    out << p.N << ',' << format_number(p.value) << ','
        << (p.within_constraint ? "h_le_N" : "h_gt_N") << '\n';
  }
}

namespace {

std::string cell(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "not_converged";
}

json cell_json(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(round_printed(v(i)));
  return a;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

}  // namespace

void write_table_one_csv(std::ostream& out, const TableOne& t) {
  out << "epsilon,N_star,N_opt_geq_h,N_opt\n";
  for (const auto& row : t.rows) {
    out << format_number(row.epsilon) << ',' << row.N_star.to_string() << ','
        << cell(row.N_opt_geq_h) << ',' << cell(row.N_opt) << '\n';
  }
}

json to_json(const Trace& trace) {
  json states = json::array();
  for (Eigen::Index t = 0; t < trace.steps(); ++t) {
    states.push_back(vector_json(trace.states.col(t)));
  }
  return {{"kind", trace.kind == TraceKind::Fast ? "fast" : "slow"},
          {"epsilon", round_printed(trace.params.epsilon)},
          {"h", trace.params.h},
          {"N", trace.params.N},
          {"states", states},
          {"spread", vector_json(spread(trace))}};
}

json to_json(const Spectrum& s, bool connected) {
  const bool finite = connected && finite_minimizer_exists(s);
  return {{"eigenvalues", vector_json(s.eigenvalues)},
          {"right_eigenvectors", matrix_json(s.right)},
          {"left_eigenvectors", matrix_json(s.left)},
          {"connected", connected},
          {"simple_zero", has_simple_zero(s)},
          {"one_minus_lambda_1", round_printed(std::abs(1.0 - s.eigenvalues(1)))},
          {"one_minus_lambda_max",
           round_printed(std::abs(1.0 - s.eigenvalues(s.size() - 1)))},
          {"finite_minimizer_exists", finite},
          {"verdict", finite ? "finite minimizer exists" : "no finite minimizer"}};
}

json to_json(const CurveTable& t) {
  json curves = json::array();
  for (Eigen::Index i = 0; i < t.eigenvalues.size(); ++i) {
    curves.push_back({{"lambda", round_printed(t.eigenvalues(i))},
                      {"zbar", vector_json(t.zbar.col(i))}});
  }
  json objective = json::array();
  for (double v : t.objective) objective.push_back(round_printed(v));
  return {{"N", t.N},
          {"modes", curves},
          {"objective", objective},
          {"within_constraint", t.within_constraint}};
}

json to_json(const OptimizationReport& r) {
  json minima = json::array();
  for (const auto& m : r.mode_minima) {
    minima.push_back({{"lambda", round_printed(m.lambda)},
                      {"g0", round_printed(m.g0)},
                      {"g1", round_printed(m.g1)},
                      {"g2", round_printed(m.g2)},
                      {"N_real", round_printed(m.N_real)},
                      {"N_int", m.N_int},
                      {"zbar_at_min", round_printed(m.zbar_at_min)}});
  }
  json curve = json::array();
  for (const auto& p : r.curve) {
    curve.push_back({{"N", p.N},
                     {"objective", round_printed(p.value)},
                     {"within_constraint", p.within_constraint}});
  }
  json conjecture = {{"holds", r.conjecture.holds}};
  if (r.conjecture.counterexample) {
    const auto& c = *r.conjecture.counterexample;
    conjecture["counterexample"] = {{"N", c.N},
                                    {"lambda", round_printed(c.lambda)},
                                    {"zbar_mode", round_printed(c.zbar_mode)},
                                    {"zbar_top", round_printed(c.zbar_top)}};
  }
  json out = {{"eigenvalues", vector_json(r.eigenvalues)},
              {"epsilon", round_printed(r.epsilon)},
              {"h", r.h},
              {"N_max", r.N_max},
              {"finite_exists", r.finite_exists},
              {"N_star", r.N_star.is_finite() ? json(r.N_star.value()) : json("inf")},
              {"N_global", r.N_global},
              {"objective_at_star", round_printed(r.objective_at_star)},
              {"limit", round_printed(r.limit)},
              {"mode_minima", minima},
              {"conjecture", conjecture},
              {"curve", curve}};
  if (r.N_opt) out["N_opt"] = *r.N_opt;
  if (r.N_opt_geq_h) out["N_opt_geq_h"] = *r.N_opt_geq_h;
  return out;
}

json to_json(const TableOne& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    rows.push_back({{"epsilon", round_printed(row.epsilon)},
                    {"N_star", row.N_star.is_finite() ? json(row.N_star.value()) : json("inf")},
                    {"N_opt_geq_h", cell_json(row.N_opt_geq_h)},
                    {"N_opt", cell_json(row.N_opt)}});
  }
  return {{"h", t.h}, {"rows", rows}, {"complete", t.complete()}};
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace dualrate::io
