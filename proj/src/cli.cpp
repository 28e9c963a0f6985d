#include "shepp/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "shepp/approximations.hpp"
#include "shepp/montecarlo.hpp"
#include "shepp/report.hpp"

namespace shepp {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<double> h;
  std::string h_grid;
  std::optional<double> T;
  std::string approx;
  int nodes = 0;
  double trunc = 8.0;
  int eigen_nodes = 300;
  std::uint64_t reps = 100000;
  double step = 0.01;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string format = "csv";
  std::string out;
  std::vector<std::string> skip;
  bool expensive = false;
  bool full_form = false;
  std::string process = "slepian";
  double a = 1.0;
  double c = 1.0;
  int j = 0;
  int max_n = 4;
  bool grid_only = false;
  std::string which;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--h-grid expects a:b:step, got '" + text + "'");
    }
    if (used != item.size()) throw UsageError("--h-grid expects a:b:step, got '" + text + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw UsageError("--h-grid expects a:b:step, got '" + text + "'");
  try {
    return make_grid(parts[0], parts[1], parts[2]);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--h-grid: ") + e.what());
  }
}

std::vector<double> levels(const RunConfig& cfg, std::vector<double> fallback) {
  if (cfg.h) return {*cfg.h};
  if (!cfg.h_grid.empty()) return parse_grid(cfg.h_grid);
  return fallback;
}

void require_nonnegative(const std::vector<double>& grid) {
  for (double h : grid)
    if (!(h >= 0.0)) throw UsageError("levels must be >= 0");
}

ApproxOptions approx_options(const RunConfig& cfg) {
  ApproxOptions o;
  o.integration.nodes = cfg.nodes;
  o.integration.trunc = cfg.trunc;
  o.integration.method = cfg.full_form ? Method::Full : Method::Reduced;
  o.eigen_nodes = cfg.eigen_nodes;
  o.eigen_trunc = cfg.trunc;
  o.allow_expensive = cfg.expensive;
  return o;
}

McConfig mc_config(const RunConfig& cfg) {
  McConfig mc;
  mc.step = cfg.step;
  mc.reps = cfg.reps;
  mc.seed = cfg.seed;
  mc.workers = cfg.workers;
  mc.bridge = !cfg.grid_only;
  return mc;
}

ApproximationId required_approx(const RunConfig& cfg) {
  if (cfg.approx.empty()) throw UsageError("--approx is required");
  const auto id = parse_approximation(cfg.approx);
  if (!id) throw UsageError("unknown approximation '" + cfg.approx + "' (expected A0..A8)");
  return *id;
}

ProcessSpec process_spec(const RunConfig& cfg) {
  try {
    if (cfg.process == "slepian") return ProcessSpec::slepian();
    if (cfg.process == "ou") return ProcessSpec::ornstein_uhlenbeck();
    if (cfg.process == "broken-a") return ProcessSpec::broken_a(cfg.a);
    if (cfg.process == "broken-c") return ProcessSpec::broken_c(cfg.c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown process '" + cfg.process + "'");
}

OutputTable eval_table(const RunConfig& cfg) {
  const ApproximationId id = required_approx(cfg);
  if (!cfg.h) throw UsageError("eval needs --h");
  if (id == ApproximationId::A8 && !cfg.expensive) throw UsageError("A8 requires --expensive");
  if (!(*cfg.h >= 0.0)) throw UsageError("--h must be >= 0");
  const ApproxOptions opts = approx_options(cfg);
  OutputTable t;
  t.name = "eval";
  t.columns = {"approx", "h", "lambda", "Lambda"};
  const SheppResult r = lambda_approx(id, *cfg.h, opts);
  std::vector<double> values{*cfg.h, r.lambda, r.Lambda};
  if (cfg.T) {
    t.columns.push_back("T");
    t.columns.push_back("F_T");
    values.push_back(*cfg.T);
    values.push_back(F_T_approx(id, *cfg.T, *cfg.h, opts));
  }
  std::vector<CellFormat> formats(values.size(), {CellFormat::Style::Fixed, 10});
  formats[0] = {CellFormat::Style::Fixed, 4};
  if (cfg.T) formats[3] = {CellFormat::Style::Fixed, 4};
  t.add_row(to_string(id), values, formats);
  if (r.meta.nodes > 0) t.provenance.emplace_back("nodes", std::to_string(r.meta.nodes));
  return t;
}

OutputTable simulate_table(const RunConfig& cfg) {
  const ProcessSpec spec = process_spec(cfg);
  if (!cfg.h) throw UsageError("simulate needs --h");
  McConfig mc = mc_config(cfg);
  const CellFormat fixed{CellFormat::Style::Fixed, 8};
  const CellFormat param{CellFormat::Style::Fixed, 4};
  const CellFormat count{CellFormat::Style::Fixed, 0};
  OutputTable t;
  t.name = "simulate";
  t.provenance.emplace_back("reps", std::to_string(mc.reps));
  t.provenance.emplace_back("step", format_cell(mc.step, {CellFormat::Style::Fixed, 6}));
  t.provenance.emplace_back("seed", std::to_string(mc.seed));
  t.provenance.emplace_back("crossing_test", mc.bridge ? "grid+bridge" : "grid");
  if (cfg.j > 0) {
    const LambdaEstimate e = estimate_Lambda(spec, *cfg.h, cfg.j, mc);
    t.columns = {"process", "h", "j", "Lambda", "std_error", "reps"};
    t.add_row(spec.name(), {*cfg.h, double(cfg.j), e.Lambda, e.std_error, double(mc.reps)},
              std::vector<CellFormat>{param, count, fixed, fixed, count});
  } else {
    mc.h = *cfg.h;
    mc.T = cfg.T.value_or(1.0);
    const McEstimate e = estimate_F(spec, mc);
    t.columns = {"process", "h", "T", "p_hat", "std_error", "reps"};
    t.add_row(spec.name(), {mc.h, mc.T, e.p_hat, e.std_error, double(e.reps)},
              std::vector<CellFormat>{param, param, fixed, fixed, count});
  }
  return t;
}

std::string recorded_arguments(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    if (!s.empty()) s += ' ';
    s += args[i];
  }
  return s;
}

void check_config(const RunConfig& cfg) {
  if (cfg.nodes < 0) throw UsageError("--nodes must be >= 0 (0 selects the default)");
  if (!(cfg.trunc > 0.0)) throw UsageError("--trunc must be positive");
  if (cfg.eigen_nodes < 2) throw UsageError("--eigen-nodes must be >= 2");
  if (cfg.reps < 1) throw UsageError("--reps must be >= 1");
  if (!(cfg.step > 0.0) || cfg.step > 1.0) throw UsageError("--step must lie in (0, 1]");
  if (cfg.j < 0) throw UsageError("--j must be >= 0");
  if (cfg.max_n < 1 || cfg.max_n > 4) throw UsageError("--max-n must lie in 1..4");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
  if (cfg.T && !(*cfg.T >= 0.0)) throw UsageError("--T must be >= 0");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-crossing probabilities and decay rates for the Slepian process", "shepp"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1, 1);
  app.fallthrough();
  RunConfig cfg;

  auto* h_opt = app.add_option("--h", cfg.h, "Single level h");
  app.add_option("--h-grid", cfg.h_grid, "Level grid a:b:step")->excludes(h_opt);
  app.add_option("--T", cfg.T, "Horizon T");
  app.add_option("--approx", cfg.approx, "Approximation id A0..A8");
  app.add_option("--nodes", cfg.nodes, "Gauss-Legendre nodes per axis for tensor integrals (0 = default)");
  app.add_option("--trunc", cfg.trunc, "Truncation length L below min(h, 0)");
  app.add_option("--eigen-nodes", cfg.eigen_nodes, "Nystrom nodes for eigenvalue approximations");
  app.add_flag("--full-form", cfg.full_form, "Integrate the unreduced n+1 dimensional determinant form");
  app.add_option("--reps", cfg.reps, "Monte Carlo replications");
  app.add_option("--step", cfg.step, "Monte Carlo grid spacing");
  app.add_option("--seed", cfg.seed, "Monte Carlo seed");
  app.add_option("--workers", cfg.workers, "Monte Carlo worker threads (0 = hardware)");
  app.add_flag("--grid-only", cfg.grid_only, "Detect crossings at grid points only");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--skip", cfg.skip, "Approximation ids to omit from table1");
  app.add_flag("--expensive", cfg.expensive, "Enable A8 (five-dimensional integral)");
  app.add_option("--process", cfg.process, "slepian, ou, broken-a or broken-c");
  app.add_option("--a", cfg.a, "Parameter a of the broken-line process BrokenA");
  app.add_option("--c", cfg.c, "Parameter c of the broken-line process BrokenC");
  app.add_option("--j", cfg.j, "simulate: estimate Lambda from horizons j-1 and j");
  app.add_option("--max-n", cfg.max_n, "bounds-figure: largest n");
  app.add_option("--which", cfg.which, "Figure variant");

  const char* commands[][2] = {
      {"table1", "lambda^(i)(h) for approximations A0..A7"},
      {"table2", "Relative errors of A0..A6 against A7"},
      {"table3", "Lambda(h) on 0, 0.1, ..., 3.9"},
      {"table4", "F2(h) and its closed-form approximation"},
      {"table5", "F2(h|x_h) and its closed-form approximation"},
      {"bounds-figure", "Bounds on Lambda(h) from F_n(h), long format"},
      {"relerr-figure", "Relative errors (--which relerr) or lambda curves (--which lambda-curves)"},
      {"compare-figure",
       "Process comparison (--which process-compare) or correlations (--which correlation-compare)"},
      {"eval", "One approximation at one level"},
      {"simulate", "Monte Carlo estimate of F_T(h), or of Lambda(h) with --j"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1]);

  std::vector<std::string> argv_store{"shepp"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  const ProgressFn progress = [&err](const std::string& msg) { err << "[progress] " << msg << std::endl; };

  OutputTable table;
  try {
    check_config(cfg);
    const ApproxOptions opts = approx_options(cfg);
    if (command == "table1") {
      std::set<ApproximationId> skip;
      for (const auto& s : cfg.skip) {
        const auto id = parse_approximation(s);
        if (!id) throw UsageError("--skip: unknown approximation '" + s + "'");
        skip.insert(*id);
      }
      const auto grid = levels(cfg, default_h_grid());
      require_nonnegative(grid);
      table = table_lambda(grid, opts, skip, progress);
    } else if (command == "table2") {
      const auto grid = levels(cfg, default_h_grid());
      require_nonnegative(grid);
      table = table_relative_errors(grid, opts, progress);
    } else if (command == "table3") {
      const auto grid = levels(cfg, default_lambda_grid());
      require_nonnegative(grid);
      table = table_Lambda(grid, opts, progress);
    } else if (command == "table4") {
      table = table_F2(levels(cfg, default_h_grid()));
    } else if (command == "table5") {
      table = table_F2_given_x(levels(cfg, default_h_grid()));
    } else if (command == "bounds-figure") {
      const auto grid = levels(cfg, {0.0, 2.0});
      table = figure_bounds(grid, cfg.max_n, opts);
    } else if (command == "relerr-figure") {
      const auto grid = levels(cfg, make_grid(0.0, 4.0, 0.25));
      require_nonnegative(grid);
      if (cfg.which.empty() || cfg.which == "relerr")
        table = figure_relerr(grid, opts, progress);
      else if (cfg.which == "lambda-curves")
        table = figure_lambda_curves(grid, opts, progress);
      else
        throw UsageError("relerr-figure: --which must be relerr or lambda-curves");
    } else if (command == "compare-figure") {
      try {
        (void)ProcessSpec::broken_a(cfg.a);
        (void)ProcessSpec::broken_c(cfg.c);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (cfg.which.empty() || cfg.which == "process-compare") {
        const auto grid = levels(cfg, make_grid(0.0, 3.0, 0.5));
        require_nonnegative(grid);
        table = figure_process_compare(grid, mc_config(cfg), cfg.a, cfg.c, opts, progress);
      } else if (cfg.which == "correlation-compare") {
        table = figure_correlation(levels(cfg, make_grid(0.0, 2.0, 0.05)), cfg.a, cfg.c);
      } else {
        throw UsageError("compare-figure: --which must be process-compare or correlation-compare");
      }
    } else if (command == "eval") {
      table = eval_table(cfg);
    } else if (command == "simulate") {
      table = simulate_table(cfg);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const ApproximationError& e) {
    err << "computation failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "computation failed: " << e.what() << '\n';
    return 1;
  }

  if (table.provenance.empty() || table.provenance.front().first != "tool") {
    table.provenance.insert(table.provenance.begin(),
                            {"tool", std::string(kToolName) + " " + kToolVersion});
  }
  table.provenance.insert(table.provenance.begin() + 1, {"command", recorded_arguments(args)});

  if (!table.all_finite()) {
    for (const auto& row : table.rows)
      for (std::size_t i = 0; i < row.values.size(); ++i)
        if (!std::isfinite(row.values[i]))
          err << "computation failed: non-finite value in row " << row.label << ", column "
              << (i + 1 < table.columns.size() ? table.columns[i + 1] : std::to_string(i)) << '\n';
    return 1;
  }

  std::ostringstream rendered;
  if (cfg.format == "json")
    write_json(table, rendered);
  else
    write_csv(table, rendered);

  if (cfg.out.empty()) {
    out << rendered.str();
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << cfg.out << " for writing\n";
      return 1;
    }
    file << rendered.str();
    if (!file) {
      err << "error: failed writing " << cfg.out << '\n';
      return 1;
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", seconds);
  err << "[done] " << command << " in " << buf << " s\n";
  return 0;
}

}  // namespace shepp
