#include "shepp/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "shepp/exact.hpp"
#include "shepp/gaussian.hpp"

namespace shepp {

namespace {

constexpr CellFormat kFixed6{CellFormat::Style::Fixed, 6};
constexpr CellFormat kSci3{CellFormat::Style::Scientific, 2};
constexpr CellFormat kLevel{CellFormat::Style::Fixed, 2};
constexpr CellFormat kSeriesValue{CellFormat::Style::Scientific, 9};

std::string level_label(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "h=%g", h);
  return buf;
}

std::string grid_text(const std::vector<double>& grid) {
  std::string s;
  for (double h : grid) {
    if (!s.empty()) s += ' ';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", h);
    s += buf;
  }
  return s;
}

void describe(OutputTable& t, const ApproxOptions& opts) {
  t.provenance.emplace_back("tensor_nodes", opts.integration.nodes > 0
                                                ? std::to_string(opts.integration.nodes)
                                                : std::string("auto"));
  t.provenance.emplace_back("trunc", format_cell(opts.integration.trunc, {CellFormat::Style::Fixed, 3}));
  t.provenance.emplace_back("method",
                            opts.integration.method == Method::Reduced ? "reduced" : "full");
  t.provenance.emplace_back("eigen_nodes", std::to_string(opts.eigen_nodes));
}

OutputTable make_table(std::string name, std::vector<std::string> columns) {
  OutputTable t;
  t.name = std::move(name);
  t.columns = std::move(columns);
  t.provenance.emplace_back("tool", std::string(kToolName) + " " + kToolVersion);
  t.provenance.emplace_back("table", t.name);
  return t;
}

std::vector<std::string> level_columns(std::string first, const std::vector<double>& grid) {
  std::vector<std::string> cols{std::move(first)};
  for (double h : grid) cols.push_back(level_label(h));
  return cols;
}

OutputTable long_table(std::string name) { return make_table(std::move(name), {"series", "x", "value"}); }

void add_point(OutputTable& t, const std::string& series, double x, double value) {
  t.add_row(series, {x, value}, std::vector<CellFormat>{{CellFormat::Style::Fixed, 4}, kSeriesValue});
}

void report(const ProgressFn& progress, const std::string& msg) {
  if (progress) progress(msg);
}

}  // namespace

std::string format_cell(double value, CellFormat format) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  if (format.style == CellFormat::Style::Fixed)
    std::snprintf(buf, sizeof buf, "%.*f", format.digits, value);
  else
    std::snprintf(buf, sizeof buf, "%.*e", format.digits, value);
  if (buf[0] == '-' && std::strtod(buf, nullptr) == 0.0) return buf + 1;
  return buf;
}

void OutputTable::add_row(std::string label, std::vector<double> values, CellFormat format) {
  std::vector<CellFormat> formats(values.size(), format);
  add_row(std::move(label), std::move(values), std::move(formats));
}

void OutputTable::add_row(std::string label, std::vector<double> values,
                          std::vector<CellFormat> formats) {
  if (formats.size() != values.size()) throw std::invalid_argument("one format per value required");
  rows.push_back({std::move(label), std::move(values), std::move(formats)});
}

bool OutputTable::all_finite() const {
  for (const auto& r : rows)
    for (double v : r.values)
      if (!std::isfinite(v)) return false;
  return true;
}

void write_csv(const OutputTable& table, std::ostream& out) {
  for (const auto& [key, value] : table.provenance) out << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.label;
    for (std::size_t i = 0; i < row.values.size(); ++i)
      out << ',' << format_cell(row.values[i], row.formats[i]);
    out << '\n';
  }
}

void write_json(const OutputTable& table, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["table"] = table.name;
  nlohmann::ordered_json prov = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.provenance) prov[key] = value;
  doc["provenance"] = prov;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      const double v = row.values[i];
      if (std::isfinite(v))
        values.push_back(std::stod(format_cell(v, row.formats[i])));
      else
        values.push_back(nullptr);
    }
    rows.push_back({{"label", row.label}, {"values", values}});
  }
  doc["rows"] = rows;
  out << doc.dump(2) << '\n';
}

std::vector<double> make_grid(double a, double b, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(b >= a)) throw std::invalid_argument("grid end must not precede its start");
  const long long n = std::llround((b - a) / step);
  if (n > 100000) throw std::invalid_argument("grid too large");
  std::vector<double> g;
  for (long long k = 0; k <= n; ++k) {
    const double v = a + k * step;
    if (v > b + 1e-9 * step) break;
    g.push_back(std::round(v * 1e9) / 1e9);
  }
  return g;
}

std::vector<double> default_h_grid() { return make_grid(0.0, 4.0, 0.5); }

std::vector<double> default_lambda_grid() { return make_grid(0.0, 3.9, 0.1); }

OutputTable table_lambda(const std::vector<double>& grid, const ApproxOptions& opts,
                         const std::set<ApproximationId>& skip, const ProgressFn& progress) {
  OutputTable t = make_table("table1", level_columns("approx", grid));
  describe(t, opts);
  t.provenance.emplace_back("grid", grid_text(grid));
  const int last = opts.allow_expensive ? 8 : 7;
  for (int i = 0; i <= last; ++i) {
    const ApproximationId id = approximation_at(i);
    if (skip.count(id)) continue;
    std::vector<double> row;
    for (double h : grid) {
      if (i >= 5) report(progress, to_string(id) + " h=" + format_cell(h, kLevel));
      row.push_back(lambda_approx(id, h, opts).lambda);
    }
    t.add_row("lambda" + std::to_string(i), std::move(row), kFixed6);
  }
  return t;
}

OutputTable table_relative_errors(const std::vector<double>& grid, const ApproxOptions& opts,
                                  const ProgressFn& progress) {
  OutputTable t = make_table("table2", level_columns("approx", grid));
  describe(t, opts);
  t.provenance.emplace_back("grid", grid_text(grid));
  t.provenance.emplace_back("reference", "A7");
  std::vector<std::vector<double>> rel(7);
  for (double h : grid) {
    report(progress, "relative errors h=" + format_cell(h, kLevel));
    const RelativeErrorTable r = relative_errors({h}, opts);
    for (int i = 0; i < 7; ++i) rel[i].push_back(r.rel[i][0]);
  }
  for (int i = 0; i < 7; ++i) t.add_row("lambda" + std::to_string(i), rel[i], kSci3);
  return t;
}

int Lambda_decimals(double h) {
  if (h < 1.55) return 4;
  if (h < 2.35) return 6;
  return 7;
}

OutputTable table_Lambda(const std::vector<double>& grid, const ApproxOptions& opts,
                         const ProgressFn& progress) {
  OutputTable t = make_table("table3", {"approx", "h", "Lambda"});
  describe(t, opts);
  t.provenance.emplace_back("grid", grid_text(grid));
  for (double h : grid) {
    const ApproximationId id =
        (h == 0.0 && opts.allow_expensive) ? ApproximationId::A8 : ApproximationId::A7;
    report(progress, to_string(id) + " h=" + format_cell(h, kLevel));
    const double L = Lambda_approx(id, h, opts);
    t.add_row(to_string(id), {h, L},
              std::vector<CellFormat>{{CellFormat::Style::Fixed, 1},
                                      {CellFormat::Style::Fixed, Lambda_decimals(h)}});
  }
  return t;
}

OutputTable table_F2(const std::vector<double>& grid) {
  OutputTable t = make_table("table4", level_columns("quantity", grid));
  t.provenance.emplace_back("grid", grid_text(grid));
  std::vector<double> exact, approx;
  for (double h : grid) {
    exact.push_back(F2(h));
    approx.push_back(F2_hat(h));
  }
  t.add_row("F2", exact, kFixed6);
  t.add_row("F2_hat", approx, kFixed6);
  return t;
}

OutputTable table_F2_given_x(const std::vector<double>& grid) {
  OutputTable t = make_table("table5", level_columns("quantity", grid));
  t.provenance.emplace_back("grid", grid_text(grid));
  t.provenance.emplace_back("start", "x0 = x_h = -phi(h)/Phi(h)");
  std::vector<double> x0, exact, approx;
  for (double h : grid) {
    const double x = x_h(h);
    x0.push_back(x);
    exact.push_back(F2_given_x(h, x));
    approx.push_back(F2_given_x_hat(h, x));
  }
  t.add_row("x0", x0, kFixed6);
  t.add_row("F2_given_x", exact, kFixed6);
  t.add_row("F2_given_x_hat", approx, kFixed6);
  return t;
}

OutputTable figure_bounds(const std::vector<double>& levels, int max_n, const ApproxOptions& opts) {
  OutputTable t = long_table("bounds");
  describe(t, opts);
  t.provenance.emplace_back("levels", grid_text(levels));
  t.provenance.emplace_back("x", "n");
  for (double h : levels) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_h%g", h);
    const double reference = Lambda_approx(ApproximationId::A7, h, opts);
    for (int n = 1; n <= max_n; ++n) {
      const BoundsResult b = bounds(n, h, opts.integration);
      add_point(t, std::string("lower") + suffix, n, b.lower);
      add_point(t, std::string("upper") + suffix, n, b.upper);
      add_point(t, std::string("Lambda7") + suffix, n, reference);
    }
  }
  return t;
}

OutputTable figure_relerr(const std::vector<double>& grid, const ApproxOptions& opts,
                          const ProgressFn& progress) {
  OutputTable t = long_table("relerr");
  describe(t, opts);
  t.provenance.emplace_back("x", "h");
  for (double h : grid) {
    report(progress, "relative errors h=" + format_cell(h, kLevel));
    const RelativeErrorTable r = relative_errors({h}, opts);
    for (int i = 0; i < 7; ++i) add_point(t, to_string(approximation_at(i)), h, r.rel[i][0]);
  }
  return t;
}

OutputTable figure_lambda_curves(const std::vector<double>& grid, const ApproxOptions& opts,
                                 const ProgressFn& progress) {
  OutputTable t = long_table("lambda-curves");
  describe(t, opts);
  t.provenance.emplace_back("x", "h");
  for (double h : grid) {
    report(progress, "lambda curves h=" + format_cell(h, kLevel));
    for (int i = 0; i <= 7; ++i) {
      const ApproximationId id = approximation_at(i);
      add_point(t, to_string(id), h, lambda_approx(id, h, opts).lambda);
    }
  }
  return t;
}

OutputTable figure_correlation(const std::vector<double>& lags, double a, double c) {
  OutputTable t = long_table("correlation-compare");
  t.provenance.emplace_back("x", "t");
  const ProcessSpec specs[] = {ProcessSpec::slepian(), ProcessSpec::ornstein_uhlenbeck(),
                               ProcessSpec::broken_a(a), ProcessSpec::broken_c(c)};
  for (const auto& spec : specs)
    for (double lag : lags) add_point(t, spec.name(), lag, rho(spec, lag));
  return t;
}

OutputTable figure_process_compare(const std::vector<double>& grid, const McConfig& mc, double a,
                                   double c, const ApproxOptions& opts, const ProgressFn& progress) {
  OutputTable t = long_table("process-compare");
  describe(t, opts);
  t.provenance.emplace_back("x", "h");
  t.provenance.emplace_back("mc", "j=3 reps=" + std::to_string(mc.reps) +
                                      " step=" + format_cell(mc.step, {CellFormat::Style::Fixed, 6}) +
                                      " seed=" + std::to_string(mc.seed) +
                                      (mc.bridge ? " bridge" : " grid-only"));
  const ProcessSpec specs[] = {ProcessSpec::slepian(), ProcessSpec::ornstein_uhlenbeck(),
                               ProcessSpec::broken_a(a), ProcessSpec::broken_c(c)};
  for (double h : grid) {
    add_point(t, "Lambda7", h, Lambda_approx(ApproximationId::A7, h, opts));
    for (const auto& spec : specs) {
      report(progress, spec.name() + " h=" + format_cell(h, kLevel));
      const LambdaEstimate e = estimate_Lambda(spec, h, 3, mc);
      add_point(t, spec.name(), h, e.Lambda);
      add_point(t, spec.name() + "-se", h, e.std_error);
    }
  }
  return t;
}

}  // namespace shepp
