#pragma once

// Tabulated results and figure data, rendered as CSV or JSON.

#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shepp/approximations.hpp"
#include "shepp/montecarlo.hpp"

namespace shepp {

inline constexpr const char* kToolName = "shepp";
inline constexpr const char* kToolVersion = "1.0.0";

struct CellFormat {
  enum class Style { Fixed, Scientific };
  Style style = Style::Fixed;
  int digits = 6;
};

std::string format_cell(double value, CellFormat format);

struct OutputRow {
  std::string label;
  std::vector<double> values;
  std::vector<CellFormat> formats;  // one per value
};

struct OutputTable {
  std::string name;
  std::vector<std::string> columns;  // first entry names the label column
  std::vector<OutputRow> rows;
  std::vector<std::pair<std::string, std::string>> provenance;

  void add_row(std::string label, std::vector<double> values, CellFormat format);
  void add_row(std::string label, std::vector<double> values, std::vector<CellFormat> formats);
  bool all_finite() const;
};

/// Provenance lines first ("# key: value"), then a header row and one line
/// per row. Period decimal separator regardless of locale.
void write_csv(const OutputTable& table, std::ostream& out);
/// Same records as the CSV; numbers carry the CSV's rounding.
void write_json(const OutputTable& table, std::ostream& out);

/// a, a+step, ..., b (inclusive, values rounded to 1e-9).
std::vector<double> make_grid(double a, double b, double step);
std::vector<double> default_h_grid();        // 0, 0.5, ..., 4
std::vector<double> default_lambda_grid();   // 0, 0.1, ..., 3.9

using ProgressFn = std::function<void(const std::string&)>;

OutputTable table_lambda(const std::vector<double>& grid, const ApproxOptions& opts,
                         const std::set<ApproximationId>& skip, const ProgressFn& progress = {});
OutputTable table_relative_errors(const std::vector<double>& grid, const ApproxOptions& opts,
                                  const ProgressFn& progress = {});
/// Lambda(h) with A7, and A8 at h = 0 when opts.allow_expensive is set.
OutputTable table_Lambda(const std::vector<double>& grid, const ApproxOptions& opts,
                         const ProgressFn& progress = {});
OutputTable table_F2(const std::vector<double>& grid);
/// F2(h|x0) and its closed-form approximation at x0 = x_h.
OutputTable table_F2_given_x(const std::vector<double>& grid);

/// Decimals printed for Lambda(h) in the Lambda table.
int Lambda_decimals(double h);

// Figure data, long format (series, x, value) ------------------------------

OutputTable figure_bounds(const std::vector<double>& levels, int max_n, const ApproxOptions& opts);
OutputTable figure_relerr(const std::vector<double>& grid, const ApproxOptions& opts,
                          const ProgressFn& progress = {});
OutputTable figure_lambda_curves(const std::vector<double>& grid, const ApproxOptions& opts,
                                 const ProgressFn& progress = {});
OutputTable figure_correlation(const std::vector<double>& lags, double a, double c);
/// Lambda(h) for the Slepian process (A7) next to Monte Carlo estimates with
/// j = 3 for Slepian, OU, BrokenA(a), BrokenC(c).
OutputTable figure_process_compare(const std::vector<double>& grid, const McConfig& mc, double a,
                                   double c, const ApproxOptions& opts,
                                   const ProgressFn& progress = {});

}  // namespace shepp
