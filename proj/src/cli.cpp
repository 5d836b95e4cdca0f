#include "mbm/cli.hpp"

#include "mbm/config.hpp"
#include "mbm/errors.hpp"
#include "mbm/table_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>
#include <thread>

namespace mbm {

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  unsigned workers = 0;
  std::uint64_t seed = 0;  // reserved, every algorithm is deterministic
};

struct OracleOptions {
  std::string problem;
  std::vector<std::string> params;
  std::vector<std::string> grid;
  std::string candidates;
  std::string out;
  double tolerance = 1e-3;
};

struct WeightingOptions {
  std::string problem;
  std::vector<std::string> params;
  std::string alpha;
  int grid = 0;
  std::string start;
  int budget = 5000;
  std::string out;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

Vector parse_list(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.empty()) throw InputError(what + " is empty");
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      v[static_cast<Eigen::Index>(i)] = parse_number(parts[i]);
    } catch (const InputError&) {
      throw InputError(what + ": '" + parts[i] + "' is not a number");
    }
  }
  return v;
}

ProblemParameters parse_params(const std::vector<std::string>& items) {
  ProblemParameters params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--param expects NAME=VALUE, got '" + item + "'");
    params[item.substr(0, eq)] = parse_number(item.substr(eq + 1));
  }
  return params;
}

// Each spec is LOWER:UPPER:COUNT for one dimension.
Grid parse_grid_specs(const std::vector<std::string>& specs) {
  if (specs.empty()) throw InputError("--grid is required");
  Grid grid;
  grid.lower.resize(static_cast<Eigen::Index>(specs.size()));
  grid.upper.resize(static_cast<Eigen::Index>(specs.size()));
  for (std::size_t d = 0; d < specs.size(); ++d) {
    const auto parts = split(specs[d], ':');
    if (parts.size() != 3) throw InputError("--grid expects LOWER:UPPER:COUNT, got '" + specs[d] + "'");
    grid.lower[static_cast<Eigen::Index>(d)] = parse_number(parts[0]);
    grid.upper[static_cast<Eigen::Index>(d)] = parse_number(parts[1]);
    const double count = parse_number(parts[2]);
    if (count != std::floor(count) || count < 1 || count > 1e9) {
      throw InputError("grid count must be a positive integer, got '" + parts[2] + "'");
    }
    grid.counts.push_back(static_cast<int>(count));
  }
  return grid;
}

void emit_table(const Table& table, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << to_csv(table);
  } else {
    write_csv_atomic(path, table);
    out << "wrote " << table.rows.size() << " rows to " << path << '\n';
  }
}

std::string describe_vector(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s + ")";
}

int exit_code_for(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return kExitOk;
    case RunStatus::OuterBudgetExhausted: return kExitBudget;
    case RunStatus::InnerFailure: return kExitInnerFailure;
  }
  return kExitInnerFailure;
}

int cmd_run(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_run_config(opts.config);
  const Problem problem = build_problem(cfg);
  const Barrier barrier = build_barrier(cfg, problem);
  const AuxiliaryFunction phi = build_phi(cfg.phi, problem.m());
  const MbmConfig mbm_config = build_mbm_config(cfg);
  const Vector x0 = resolve_start(cfg, problem);

  const RunTrace trace = cfg.local_box
                             ? local_mbm_run(problem, barrier, phi, x0, *cfg.local_box, mbm_config)
                             : mbm_run(problem, barrier, phi, x0, mbm_config);

  emit_table(trace_table(trace, problem.n(), problem.m()),
             opts.out.empty() ? cfg.output.trace : opts.out, out);
  out << "status " << to_string(trace.status) << " after " << trace.rows.size()
      << " outer iterations\n";
  if (trace.x_final.size() > 0) out << "x_final " << describe_vector(trace.x_final) << '\n';
  out << "phi_limit " << format_number(trace.phi_limit) << '\n';
  if (!trace.failure_reason.empty()) err << "inner failure: " << trace.failure_reason << '\n';
  return exit_code_for(trace.status);
}

int cmd_sweep(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_run_config(opts.config);
  if (!cfg.sweep) throw ConfigFieldError("sweep", "missing; the sweep command needs a sweep section");
  const SweepSpec& sweep = *cfg.sweep;
  const Problem problem = build_problem(cfg);
  const Barrier barrier = build_barrier(cfg, problem);
  const auto family = build_family(sweep, problem.m());
  const MbmConfig mbm_config = build_mbm_config(cfg);
  const Vector x0 = resolve_start(cfg, problem);

  SweepStartStrategy strategy = [&](std::size_t i, const AuxiliaryFunction&) {
    SweepStart s{sweep.starts.empty() ? x0 : sweep.starts[i], cfg.local_box};
    if (sweep.box_halfwidth) {
      const Vector hw = Vector::Constant(problem.n(), *sweep.box_halfwidth);
      s.box = Box{s.x0 - hw, s.x0 + hw};
    }
    return s;
  };
  const unsigned workers =
      opts.workers > 0 ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  const auto results = pareto_sweep(problem, barrier, family, mbm_config, strategy, workers);

  std::vector<std::optional<Classification>> classes(results.size());
  if (sweep.oracle_grid) {
    const GridImage image = evaluate_feasible(problem, build_grid(*sweep.oracle_grid));
    for (std::size_t i = 0; i < results.size(); ++i) {
      const Vector& x = results[i].x_final;
      if (x.size() == problem.n() && x.allFinite() && is_feasible(problem, x)) {
        classes[i] = classify_point(problem, x, image, sweep.oracle_tolerance);
      }
    }
  }

  emit_table(front_table(results, problem.n(), problem.m(), classes),
             opts.out.empty() ? cfg.output.front : opts.out, out);
  std::size_t converged = 0;
  for (const auto& r : results) {
    if (r.status == RunStatus::Converged) {
      ++converged;
    } else if (!r.message.empty()) {
      err << "member " << r.index << ": " << r.message << '\n';
    }
  }
  out << converged << " of " << results.size() << " members converged\n";
  return converged == results.size() ? kExitOk : kExitBudget;
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out) {
  const Problem problem = registry_get(opts.problem, parse_params(opts.params)).problem;
  const Grid grid = parse_grid_specs(opts.grid);
  const GridImage image = evaluate_feasible(problem, grid);
  const int n = problem.n();
  const int m = problem.m();

  Table table;
  for (int i = 1; i <= n; ++i) table.header.push_back("x" + std::to_string(i));
  for (int i = 1; i <= m; ++i) table.header.push_back("f" + std::to_string(i));

  if (opts.candidates.empty()) {
    const GridImage front = nondominated_subset(image);
    for (std::size_t i = 0; i < front.points.size(); ++i) {
      std::vector<std::string> row;
      for (int d = 0; d < n; ++d) row.push_back(format_number(front.points[i][d]));
      for (int j = 0; j < m; ++j) row.push_back(format_number(front.values[i][j]));
      table.rows.push_back(std::move(row));
    }
    emit_table(table, opts.out, out);
    out << front.points.size() << " of " << image.points.size()
        << " feasible grid points are nondominated\n";
    if (!front.points.empty()) {
      for (int d = 0; d < n; ++d) {
        double lo = front.points.front()[d];
        double hi = lo;
        for (const auto& p : front.points) {
          lo = std::min(lo, p[d]);
          hi = std::max(hi, p[d]);
        }
        out << "x" << d + 1 << " range [" << format_number(lo) << ", " << format_number(hi) << "]\n";
      }
    }
    return kExitOk;
  }

  const auto points = read_points(read_csv(opts.candidates), n);
  table.header.push_back("classification");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vector& x = points[i];
    if (!is_feasible(problem, x)) {
      throw PreconditionError("candidate row " + std::to_string(i + 1) + " is infeasible");
    }
    const Vector fx = problem.objective(x);
    std::vector<std::string> row;
    for (int d = 0; d < n; ++d) row.push_back(format_number(x[d]));
    for (int j = 0; j < m; ++j) row.push_back(format_number(fx[j]));
    row.emplace_back(to_string(classify_point(problem, x, image, opts.tolerance)));
    table.rows.push_back(std::move(row));
  }
  emit_table(table, opts.out, out);
  return kExitOk;
}

int cmd_weighting(const WeightingOptions& opts, std::ostream& out) {
  const ProblemInstance instance = registry_get(opts.problem, parse_params(opts.params));
  const Problem& problem = instance.problem;
  if (opts.alpha.empty() == (opts.grid == 0)) throw InputError("give exactly one of --alpha or --grid");

  Vector start;
  if (!opts.start.empty()) {
    start = parse_list(opts.start, "--start");
  } else if (problem.strictly_feasible_start()) {
    start = *problem.strictly_feasible_start();
  } else {
    throw InputError("problem has no built-in start point; pass --start");
  }
  if (start.size() != problem.n() || !is_strictly_feasible(problem, start)) {
    throw InputError("--start must be a strictly feasible point of dimension " + std::to_string(problem.n()));
  }

  std::vector<WeightingResult> results;
  double failure = 0.0;
  if (opts.grid != 0) {
    failure = weighting_failure_fraction(problem, opts.grid, start, opts.budget, &results);
  } else {
    results.push_back(weighting_method_solve(problem, parse_list(opts.alpha, "--alpha"), start, opts.budget));
  }

  Table table;
  for (int i = 1; i <= problem.m(); ++i) table.header.push_back("alpha" + std::to_string(i));
  table.header.push_back("outcome");
  for (int i = 1; i <= problem.n(); ++i) table.header.push_back("x" + std::to_string(i));
  table.header.push_back("value");
  for (const auto& r : results) {
    std::vector<std::string> row;
    for (Eigen::Index i = 0; i < r.alpha.size(); ++i) row.push_back(format_number(r.alpha[i]));
    row.emplace_back(to_string(r.outcome));
    for (Eigen::Index i = 0; i < r.x.size(); ++i) row.push_back(format_number(r.x[i]));
    row.push_back(format_number(r.value));
    table.rows.push_back(std::move(row));
  }
  emit_table(table, opts.out, out);
  if (opts.grid != 0) out << "failure fraction " << format_number(failure) << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool sweep) {
  cmd->add_option("--config", opts.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out, sweep ? "front table path (overrides output.front)"
                                           : "trace table path (overrides output.trace)");
  cmd->add_option("--workers", opts.workers, "concurrent sweep members (default: hardware threads)");
  cmd->add_option("--seed", opts.seed, "reserved; results do not depend on it");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiobjective barrier method solver"};
  app.name("mbm");
  app.require_subcommand(1);

  CommonOptions run_opts;
  CommonOptions sweep_opts;
  OracleOptions oracle_opts;
  WeightingOptions weight_opts;

  auto* run = app.add_subcommand("run", "Solve one configured problem and write the outer trace");
  add_common(run, run_opts, false);
  auto* sweep = app.add_subcommand("sweep", "Run one barrier method per family member and write the front");
  add_common(sweep, sweep_opts, true);

  auto* oracle = app.add_subcommand("oracle", "Grid-based nondominance oracle");
  oracle->add_option("--problem", oracle_opts.problem, "registry problem name")->required();
  oracle->add_option("--param", oracle_opts.params, "problem parameter NAME=VALUE (repeatable)");
  oracle->add_option("--grid", oracle_opts.grid, "LOWER:UPPER:COUNT, once per decision dimension")->required();
  oracle->add_option("--candidates", oracle_opts.candidates, "table with x1..xn columns to classify")
      ->check(CLI::ExistingFile);
  oracle->add_option("--tol", oracle_opts.tolerance, "classification tolerance");
  oracle->add_option("--out", oracle_opts.out, "output table path");
  oracle->add_option("--seed", run_opts.seed, "reserved");

  auto* weighting = app.add_subcommand("weighting", "Weighted-sum baseline");
  weighting->add_option("--problem", weight_opts.problem, "registry problem name")->required();
  weighting->add_option("--param", weight_opts.params, "problem parameter NAME=VALUE (repeatable)");
  weighting->add_option("--alpha", weight_opts.alpha, "comma-separated weights on the simplex");
  weighting->add_option("--grid", weight_opts.grid, "number of alpha_1 values in [0, 1] (biobjective)");
  weighting->add_option("--start", weight_opts.start, "comma-separated start point");
  weighting->add_option("--budget", weight_opts.budget, "inner iteration budget");
  weighting->add_option("--out", weight_opts.out, "output table path");
  weighting->add_option("--seed", run_opts.seed, "reserved");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, out, err);
    if (oracle->parsed()) return cmd_oracle(oracle_opts, out);
    if (weighting->parsed()) return cmd_weighting(weight_opts, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace mbm
