#include "eq/bench.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eq {
namespace bench {

namespace {

std::string status_str(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIter: return "max_iter";
    case RunStatus::Error: return "error";
  }
  return "?";
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << content;
}

}  // namespace

std::string ComparisonTable::to_markdown() const {
  std::ostringstream os;
  os << "# " << title << "\n\n";
  os << "| solver | x0 | iterations | seconds | status |\n";
  os << "|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    std::ostringstream sec;
    sec.precision(4);
    sec << std::fixed << r.seconds;
    os << "| " << r.solver << " | " << r.x0_id << " | " << r.iterations << " | "
       << sec.str() << " | " << status_str(r.status) << " |\n";
  }
  return os.str();
}

std::string ComparisonTable::to_csv() const {
  std::string out = "solver,x0,iterations,seconds,status\n";
  for (const auto& r : rows) {
    out += r.solver + "," + r.x0_id + "," + std::to_string(r.iterations) + "," +
           format_double(r.seconds) + "," + status_str(r.status) + "\n";
  }
  return out;
}

void convergence_csv(const RunTrace& t, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "k,residual\n";
  for (const auto& r : t.records)
    out << r.k << ',' << format_double(r.residual) << '\n';
}

ComparisonTable run_experiment(const Experiment& ex) {
  if (!ex.problem) throw std::invalid_argument("experiment has no problem");
  for (const auto& spec : ex.runs)
    if (!spec.config.x0 || !ex.problem->set.contains(*spec.config.x0))
      throw std::invalid_argument("experiment starting point " + spec.x0_id +
                                  " is not feasible");

  const auto traces_dir = ex.out_dir / "traces";
  std::filesystem::create_directories(traces_dir);

  ComparisonTable table;
  table.title = ex.problem_id;
  for (const auto& spec : ex.runs) {
    RunTrace trace = run(spec.solver, *ex.problem, spec.config);
    if (trace.status == RunStatus::Error)
      throw std::runtime_error("run " + solver_name(spec.solver) + "/" + spec.x0_id +
                               " failed: " + trace.error_message);
    table.rows.push_back(TableRow{solver_name(spec.solver), spec.x0_id,
                                  trace.iterations(), trace.total_seconds,
                                  trace.status});
    convergence_csv(trace, traces_dir / (solver_name(spec.solver) + "_" + spec.x0_id + ".csv"));
    table.traces.push_back(std::move(trace));
  }
  return table;
}

Vector reference_solution(const ProblemInstance& p, int budget) {
  SolverConfig cfg;
  if (p.f.lipschitz) {
    const auto [c1, c2] = *p.f.lipschitz;
    cfg.schedule = StepSchedule::constant(std::min(1.0 / (4.0 * c1), 1.0 / (4.0 * c2)));
  } else {
    cfg.schedule = StepSchedule::constant(0.27);
  }
  cfg.tol = 1e-12;
  cfg.max_iter = budget;
  cfg.x0 = p.set.project(Vector::zeros(p.space));

  const RunTrace trace = run(SolverId::Gea, p, cfg);
  if (trace.status != RunStatus::Converged)
    throw std::runtime_error("reference_solution: GEA did not reach tol 1e-12 (" +
                             trace.error_message + ")");
  const Vector z = *trace.solution;

  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i)
    worst = std::min(worst, p.f.eval(z, p.set.sample(rng)));
  if (worst < -1e-8)
    throw std::runtime_error("reference_solution: certificate failed, min f(z,y) = " +
                             format_double(worst));
  return z;
}

ComparisonTable table1(const std::filesystem::path& out_dir) {
  const ProblemInstance problem = example61();
  const Vector z = reference_solution(problem);

  const std::vector<std::pair<std::string, std::vector<double>>> starts = {
      {"x0-1", {-1.0, 3.0, 1.0, 1.0, 2.0}},
      {"x0-2", {1.0, 1.0, 1.0, 1.0, 1.0}},
      {"x0-3", {-1.0, 0.0, 0.0, 0.0, 0.0}},
  };

  Experiment ex;
  ex.problem_id = "example61: GEA vs GRA1, lambda = 0.27, tol 1e-6";
  ex.problem = &problem;
  ex.out_dir = out_dir;
  for (const auto& [id, coords] : starts) {
    SolverConfig cfg;
    cfg.schedule = StepSchedule::constant(0.27);
    cfg.tol = 1e-6;
    cfg.max_iter = 100000;
    cfg.x0 = Vector(problem.space, coords);
    cfg.energy_reference = z;
    ex.runs.push_back(RunSpec{SolverId::Gea, cfg, id});
    ex.runs.push_back(RunSpec{SolverId::Gra1, cfg, id});
  }

  ComparisonTable table = run_experiment(ex);
  write_file(out_dir / "table1.md", table.to_markdown());
  write_file(out_dir / "table1.csv", table.to_csv());
  return table;
}

Vector paper_start(const SpacePtr& grid_space, int id) {
  if (!grid_space->has_nodes())
    throw std::invalid_argument("preset starting functions need a grid space");
  const auto& t = grid_space->nodes();
  std::vector<double> c(t.size());
  if (id == 1) {
    for (size_t i = 0; i < t.size(); ++i)
      c[i] = (std::sin(-3.0 * t[i]) + std::cos(-10.0 * t[i])) / 200.0;
  } else if (id == 2) {
    for (size_t i = 0; i < t.size(); ++i)
      c[i] = (t[i] * t[i] * t[i] + 1.0) * std::exp(5.0 * t[i]) / 85.0;
  } else {
    throw std::invalid_argument("paper_start: id must be 1 or 2");
  }
  return Vector(grid_space, std::move(c));
}

ComparisonTable table2(int grid_points, const std::filesystem::path& out_dir) {
  const ProblemInstance problem = example62(grid_points);

  Experiment ex;
  ex.problem_id = "example62: Hieu vs Popov vs GRA2, lambda_k = 40/(k+1), tol 1e-3, N = " +
                  std::to_string(grid_points);
  ex.problem = &problem;
  ex.out_dir = out_dir;
  for (int id = 1; id <= 2; ++id) {
    SolverConfig cfg;
    cfg.schedule = StepSchedule::diminishing(40.0);
    cfg.tol = 1e-3;
    cfg.max_iter = 100000;
    cfg.x0 = paper_start(problem.space, id);
    const std::string x0_id = "x0-" + std::to_string(id);
    ex.runs.push_back(RunSpec{SolverId::Hieu, cfg, x0_id});
    ex.runs.push_back(RunSpec{SolverId::Popov, cfg, x0_id});
    ex.runs.push_back(RunSpec{SolverId::Gra2, cfg, x0_id});
  }

  ComparisonTable table = run_experiment(ex);
  write_file(out_dir / "table2.md", table.to_markdown());
  write_file(out_dir / "table2.csv", table.to_csv());
  return table;
}

}  // namespace bench
}  // namespace eq
