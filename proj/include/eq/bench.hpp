#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "eq/solvers.hpp"

namespace eq {
namespace bench {

// One named run inside an experiment.
struct RunSpec {
  SolverId solver;
  SolverConfig config;
  std::string x0_id;
};

struct Experiment {
  std::string problem_id;
  const ProblemInstance* problem = nullptr;
  std::vector<RunSpec> runs;
  std::filesystem::path out_dir;  // traces go to out_dir/traces
};

struct TableRow {
  std::string solver;
  std::string x0_id;
  int iterations = 0;
  double seconds = 0.0;
  RunStatus status = RunStatus::MaxIter;
};

struct ComparisonTable {
  std::string title;
  std::vector<TableRow> rows;
  std::vector<RunTrace> traces;  // aligned with rows

  std::string to_markdown() const;
  std::string to_csv() const;  // solver,x0,iterations,seconds,status
};

// Plot-ready residual series: header "k,residual", one row per iteration.
void convergence_csv(const RunTrace& t, const std::filesystem::path& file);

// Executes every run, writes traces/<solver>_<x0-id>.csv under ex.out_dir.
ComparisonTable run_experiment(const Experiment& ex);

// High-accuracy solution via GEA at tol 1e-12 from project(0); validates
// min over 500 sampled y of f(z, y) >= -1e-8 before returning.
Vector reference_solution(const ProblemInstance& p, int budget = 200000);

// The two benchmark experiments. Write <table>.md, <table>.csv and the trace
// files under out_dir; starting points are fixed inside.
ComparisonTable table1(const std::filesystem::path& out_dir);
ComparisonTable table2(int grid_points, const std::filesystem::path& out_dir);

// Starting functions of the second experiment sampled on the grid:
// id 1: (sin(-3t) + cos(-10t))/200, id 2: (t^3+1)e^{5t}/85.
Vector paper_start(const SpacePtr& grid_space, int id);

}  // namespace bench
}  // namespace eq
