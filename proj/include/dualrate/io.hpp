#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dualrate/dynamics.hpp"
#include "dualrate/graph.hpp"
#include "dualrate/optimize.hpp"

namespace dualrate::io {

inline constexpr int kPrintedDigits = 12;

/// Shortest round-trip text of x rounded to 12 significant digits, '.' as
/// decimal separator regardless of locale.
std::string format_number(double x);

/// The double that `format_number(x)` parses back to.
double round_printed(double x);

/// Parses {"n": <int>, "edges": [[i, j], ...]} with 0-based indices.
/// Syntax and schema problems throw Error(Parse) naming `source` and, for
/// syntax errors, the line and column.
Graph parse_graph_json(std::string_view text, const std::string& source = "<input>");
Graph read_graph_file(const std::filesystem::path& path);
nlohmann::json graph_to_json(const Graph& g);

/// Header `step,x_0,...,x_{n-1},spread`.
void write_trace_csv(std::ostream& out, const Trace& trace);
/// Header `index,eigenvalue`.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
/// Header `N,zbar_lambda_<l0>,...,objective,regime`; regime is `h_le_N`
/// inside the N >= h constraint and `h_gt_N` below it.
void write_curves_csv(std::ostream& out, const CurveTable& t);
/// Header `N,objective,regime`.
void write_objective_csv(std::ostream& out, const OptimizationReport& r);
/// Header `epsilon,N_star,N_opt_geq_h,N_opt`; an infinite N* is `inf`,
/// a cell whose candidates did not all converge is `not_converged`.
void write_table_one_csv(std::ostream& out, const TableOne& t);

nlohmann::json to_json(const Trace& trace);
nlohmann::json to_json(const Spectrum& s, bool connected);
nlohmann::json to_json(const CurveTable& t);
nlohmann::json to_json(const OptimizationReport& r);
nlohmann::json to_json(const TableOne& t);

/// Splits comma-separated rows; no quoting support (none of the writers
/// above emit quotes).
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace dualrate::io
