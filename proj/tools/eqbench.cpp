// Benchmark CLI: load equilibrium problems, run the solvers, reproduce the
// comparison tables, emit residual traces.
//
// Exit codes: 0 success/converged, 2 usage or input errors, 3 iteration
// budget exhausted, 4 solver errors, 5 failed condition checks.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "eq/bench.hpp"
#include "eq/prox.hpp"
#include "eq/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitMaxIter = 3;
constexpr int kExitSolver = 4;
constexpr int kExitCheckFailed = 5;

eq::ProblemInstance resolve_problem(const std::string& name, int grid) {
  if (name == "example61") return eq::example61();
  if (name == "example62") return eq::example62(grid);
  if (name == "example21") return eq::example21(grid);
  return eq::load_problem(name);
}

eq::Vector parse_start(const std::string& text, const eq::SpacePtr& space) {
  if (text.empty()) return eq::Vector::zeros(space);
  if (text == "paper-x0-1") return eq::bench::paper_start(space, 1);
  if (text == "paper-x0-2") return eq::bench::paper_start(space, 2);
  return eq::Vector(space, eq::parse_coords(text));
}

uint64_t env_seed() {
  if (const char* s = std::getenv("EQ_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw std::invalid_argument("EQ_SEED must be an unsigned integer");
    }
  }
  return 42;
}

std::string status_str(eq::RunStatus s) {
  switch (s) {
    case eq::RunStatus::Converged: return "converged";
    case eq::RunStatus::MaxIter: return "max_iter";
    case eq::RunStatus::Error: return "error";
  }
  return "?";
}

int cmd_run(const std::string& problem_name, int grid, const std::string& solver_name,
            std::optional<std::string> schedule_text, std::optional<double> lambda,
            double tol, int max_iter, const std::string& x0_text,
            std::optional<std::string> y1_text, std::optional<std::string> out_file) {
  eq::ProblemInstance problem;
  eq::SolverId solver;
  eq::SolverConfig cfg;
  try {
    problem = resolve_problem(problem_name, grid);
    solver = eq::parse_solver(solver_name);
    if (schedule_text)
      cfg.schedule = eq::StepSchedule::parse(*schedule_text);
    else if (lambda)
      cfg.schedule = eq::StepSchedule::constant(*lambda);
    else
      throw std::invalid_argument("provide --lambda or --schedule");
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.x0 = parse_start(x0_text, problem.space);
    if (y1_text) cfg.y1 = parse_start(*y1_text, problem.space);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }

  eq::RunTrace trace;
  try {
    trace = eq::run(solver, problem, cfg);
  } catch (const std::exception& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return kExitSolver;
  }
  if (trace.status == eq::RunStatus::Error) {
    std::cerr << "solver error: " << trace.error_message << "\n";
    return kExitSolver;
  }

  if (out_file) {
    std::ofstream out(*out_file, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << *out_file << "\n";
      return kExitSolver;
    }
    eq::write_trace_csv(trace, out);
  }

  std::cout << "iterations=" << trace.iterations()
            << " residual=" << eq::format_double(trace.final_residual())
            << " status=" << status_str(trace.status) << "\n";
  return trace.status == eq::RunStatus::Converged ? kExitOk : kExitMaxIter;
}

int cmd_check(const std::string& problem_name, int grid, int samples) {
  eq::ProblemInstance problem;
  try {
    problem = resolve_problem(problem_name, grid);
  } catch (const std::exception& err) {
    // Reaching the file but failing validation (e.g. a non-PSD Q) is a failed
    // check; a missing file is a usage error.
    std::cerr << "construction failed: " << err.what() << "\n";
    const std::string what = err.what();
    return what.rfind("cannot open", 0) == 0 ? kExitUsage : kExitCheckFailed;
  }

  const auto results = eq::check_conditions(problem, samples, env_seed());
  bool all_ok = true;
  for (const auto& r : results) {
    std::cout << r.name << ": " << (r.passed ? "pass" : "FAIL")
              << " (worst margin " << eq::format_double(r.worst_margin) << ")\n";
    if (!r.passed) {
      all_ok = false;
      std::cout << "  witness: " << r.witness << "\n";
    }
  }
  return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_table(int which, const std::string& out_dir, int grid) {
  try {
    std::filesystem::create_directories(out_dir);
    const eq::bench::ComparisonTable table =
        which == 1 ? eq::bench::table1(out_dir) : eq::bench::table2(grid, out_dir);
    std::cout << table.to_markdown();
    return kExitOk;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSolver;
  }
}

int cmd_list() {
  std::cout << "problems:\n"
            << "  example61   affine bifunction on a box/halfspace polytope (R^5)\n"
            << "  example62   radial operator (3/2-||x||)x on the unit ball of L^2[0,1]\n"
            << "  example21   operator x/(1+||x||^2) on the unit ball of L^2[0,1]\n"
            << "solvers:\n";
  for (const auto& s : eq::solver_names()) std::cout << "  " << s << "\n";
  std::cout << "schedules: constant 'c' | diminishing 'a/(k+1)' | adaptive 'beta:b/(k+1)'\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium-problem solvers and benchmarks"};
  app.require_subcommand(1);

  std::string problem, solver, x0_text;  // empty x0 means the zero vector
  std::optional<std::string> schedule_text, y1_text, out_file;
  std::optional<double> lambda;
  double tol = 1e-6;
  int max_iter = 10000;
  int grid = 101;
  int samples = 1000;
  std::string out_dir = ".";

  auto* c_run = app.add_subcommand("run", "run one solver on a problem");
  c_run->add_option("problem", problem, "builtin name or problem file")->required();
  c_run->add_option("--solver", solver, "gra1|gra2|gra3|graal-vi|gea|hieu|popov")->required();
  c_run->add_option("--lambda", lambda, "constant stepsize");
  c_run->add_option("--schedule", schedule_text, "stepsize schedule, e.g. '40/(k+1)'");
  c_run->add_option("--tol", tol, "stopping tolerance");
  c_run->add_option("--max-iter", max_iter, "iteration budget");
  c_run->add_option("--x0", x0_text, "comma-separated coords or paper-x0-1|paper-x0-2");
  c_run->add_option("--y1", y1_text, "initial y (defaults to x0)");
  c_run->add_option("--out", out_file, "trace CSV path");
  c_run->add_option("--grid", grid, "grid points for the L^2 problems");

  auto* c_check = app.add_subcommand("check", "run the condition sampling suites");
  c_check->add_option("problem", problem, "builtin name or problem file")->required();
  c_check->add_option("--samples", samples, "sample count per condition");
  c_check->add_option("--grid", grid, "grid points for the L^2 problems");

  auto* c_t1 = app.add_subcommand("table1", "reproduce the first comparison table");
  c_t1->add_option("--out-dir", out_dir, "output directory");

  auto* c_t2 = app.add_subcommand("table2", "reproduce the second comparison table");
  c_t2->add_option("--out-dir", out_dir, "output directory");
  c_t2->add_option("--grid", grid, "grid points (default 101)");

  auto* c_list = app.add_subcommand("list", "list builtin problems and solvers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_run->parsed())
      return cmd_run(problem, grid, solver, schedule_text, lambda, tol, max_iter,
                     x0_text, y1_text, out_file);
    if (c_check->parsed()) return cmd_check(problem, grid, samples);
    if (c_t1->parsed()) return cmd_table(1, out_dir, grid);
    if (c_t2->parsed()) return cmd_table(2, out_dir, grid);
    if (c_list->parsed()) return cmd_list();
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
