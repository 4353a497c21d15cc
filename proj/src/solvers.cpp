#include "eq/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "eq/prox.hpp"

namespace eq {

namespace {

constexpr double phi = golden_ratio;

double parse_number(const std::string& s) {
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

StepSchedule StepSchedule::constant(double c) {
  if (c <= 0.0) throw std::invalid_argument("constant stepsize must be positive");
  return {Kind::Constant, c};
}

StepSchedule StepSchedule::diminishing(double a) {
  if (a <= 0.0) throw std::invalid_argument("diminishing stepsize scale must be positive");
  return {Kind::Diminishing, a};
}

StepSchedule StepSchedule::adaptive(double b) {
  if (b <= 0.0) throw std::invalid_argument("adaptive stepsize scale must be positive");
  return {Kind::Adaptive, b};
}

StepSchedule StepSchedule::parse(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty schedule");
  const std::string suffix = "/(k+1)";
  bool adaptive = false;
  if (s.rfind("beta:", 0) == 0) {
    adaptive = true;
    s.erase(0, 5);
  }
  if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
    const double a = parse_number(s.substr(0, s.size() - suffix.size()));
    return adaptive ? StepSchedule::adaptive(a) : StepSchedule::diminishing(a);
  }
  if (adaptive)
    throw std::invalid_argument("adaptive schedule must look like beta:b/(k+1)");
  return StepSchedule::constant(parse_number(s));
}

double StepSchedule::value(int k) const {
  if (k < 0) throw std::invalid_argument("schedule index must be >= 0");
  switch (kind) {
    case Kind::Constant:
      return param;
    case Kind::Diminishing:
    case Kind::Adaptive:
      return param / (k + 1.0);
  }
  throw std::logic_error("unknown schedule kind");
}

std::string StepSchedule::str() const {
  switch (kind) {
    case Kind::Constant:
      return format_double(param);
    case Kind::Diminishing:
      return format_double(param) + "/(k+1)";
    case Kind::Adaptive:
      return "beta:" + format_double(param) + "/(k+1)";
  }
  return "?";
}

GoldenState golden_init(const Vector& x0, const Vector& y1) {
  return GoldenState{x0, y1, combine((phi - 1.0) / phi, y1, x0), 1};
}

SolverId parse_solver(const std::string& name) {
  if (name == "gra1") return SolverId::Gra1;
  if (name == "gra2") return SolverId::Gra2;
  if (name == "gra3") return SolverId::Gra3;
  if (name == "graal-vi") return SolverId::GraalVi;
  if (name == "gea") return SolverId::Gea;
  if (name == "hieu") return SolverId::Hieu;
  if (name == "popov") return SolverId::Popov;
  throw std::invalid_argument("unknown solver '" + name + "'");
}

std::string solver_name(SolverId id) {
  switch (id) {
    case SolverId::Gra1: return "gra1";
    case SolverId::Gra2: return "gra2";
    case SolverId::Gra3: return "gra3";
    case SolverId::GraalVi: return "graal-vi";
    case SolverId::Gea: return "gea";
    case SolverId::Hieu: return "hieu";
    case SolverId::Popov: return "popov";
  }
  return "?";
}

std::vector<std::string> solver_names() {
  return {"gra1", "gra2", "gra3", "graal-vi", "gea", "hieu", "popov"};
}

double RunTrace::final_residual() const {
  return records.empty() ? std::numeric_limits<double>::quiet_NaN()
                         : records.back().residual;
}

namespace {

GoldenState golden_advance(const GoldenState& s, Vector y_next) {
  GoldenState n{s.x, std::move(y_next), Vector::zeros(s.x.space()), s.k + 1};
  n.x = combine((phi - 1.0) / phi, n.y, n.x_prev);
  return n;
}

}  // namespace

GoldenState gra1_step(const GoldenState& s, const ProblemInstance& p, double lambda,
                      double inner_tol) {
  ProxResult r = solve_prox(ProxProblem{p.f, p.set, s.y, s.x, lambda}, inner_tol);
  return golden_advance(s, std::move(r.minimizer));
}

GoldenState gra2_step(const GoldenState& s, const ProblemInstance& p, double lambda_k,
                      double inner_tol) {
  return gra1_step(s, p, lambda_k, inner_tol);
}

GoldenState gra3_step(const GoldenState& s, const ProblemInstance& p, double beta_k) {
  const Vector g = p.f.partial_subgrad(s.y, s.y);
  const double eta = std::max(1.0, norm(g));
  const double lambda = beta_k / eta;
  Vector y_next = p.set.project(axpy(-lambda, g, s.x));
  return golden_advance(s, std::move(y_next));
}

GoldenState graal_vi_step(const GoldenState& s, const std::function<Vector(const Vector&)>& A,
                          const FeasibleSet& set, double lambda) {
  Vector y_next = set.project(axpy(-lambda, A(s.y), s.x));
  return golden_advance(s, std::move(y_next));
}

GeaIterates gea_step(const Vector& x, const ProblemInstance& p, double alpha_k,
                     double beta_k, double inner_tol) {
  if (alpha_k < 0.0) throw std::invalid_argument("gea_step: alpha must be >= 0");
  if (beta_k <= 0.0) throw std::invalid_argument("gea_step: beta must be > 0");
  // alpha = 0 makes the first subproblem the projection of the feasible x.
  Vector x_bar = alpha_k == 0.0
                     ? x
                     : solve_prox(ProxProblem{p.f, p.set, x, x, alpha_k}, inner_tol).minimizer;
  Vector x_tilde =
      solve_prox(ProxProblem{p.f, p.set, x_bar, x_bar, beta_k}, inner_tol).minimizer;
  // Centered at x^k; with alpha = 0 this is the classical extragradient step.
  Vector x_next =
      solve_prox(ProxProblem{p.f, p.set, x_tilde, x, beta_k}, inner_tol).minimizer;
  return GeaIterates{std::move(x_bar), std::move(x_tilde), std::move(x_next)};
}

HieuIterates hieu_step(const Vector& x, const ProblemInstance& p, double lambda_n,
                       double inner_tol) {
  Vector y = solve_prox(ProxProblem{p.f, p.set, x, x, lambda_n}, inner_tol).minimizer;
  Vector x_next = solve_prox(ProxProblem{p.f, p.set, y, x, lambda_n}, inner_tol).minimizer;
  return HieuIterates{std::move(y), std::move(x_next)};
}

PopovIterates popov_step(const Vector& x, const Vector& y, const ProblemInstance& p,
                         double lambda_n, double inner_tol) {
  Vector x_next = solve_prox(ProxProblem{p.f, p.set, y, x, lambda_n}, inner_tol).minimizer;
  Vector y_next =
      solve_prox(ProxProblem{p.f, p.set, y, x_next, lambda_n}, inner_tol).minimizer;
  return PopovIterates{std::move(x_next), std::move(y_next)};
}

namespace {

bool is_golden(SolverId id) {
  return id == SolverId::Gra1 || id == SolverId::Gra2 || id == SolverId::Gra3 ||
         id == SolverId::GraalVi;
}

void validate_schedule_kind(SolverId id, const StepSchedule& sched) {
  using K = StepSchedule::Kind;
  K want;
  switch (id) {
    case SolverId::Gra1:
    case SolverId::GraalVi:
    case SolverId::Gea:
      want = K::Constant;
      break;
    case SolverId::Gra2:
    case SolverId::Hieu:
    case SolverId::Popov:
      want = K::Diminishing;
      break;
    case SolverId::Gra3:
      want = K::Adaptive;
      break;
  }
  if (sched.kind != want)
    throw std::invalid_argument("solver " + solver_name(id) +
                                " does not accept schedule " + sched.str());
}

// Constant-stepsize admissibility, enforced only when constants are declared.
void validate_stepsize_bound(SolverId id, const ProblemInstance& p, const StepSchedule& s) {
  if (s.kind != StepSchedule::Kind::Constant) return;
  if (id == SolverId::Gra1 && p.f.lipschitz) {
    const auto [c1, c2] = *p.f.lipschitz;
    const double bound = std::min(phi / (4.0 * c1), phi / (4.0 * c2));
    if (s.param > bound + 1e-12)
      throw std::invalid_argument("gra1: lambda " + format_double(s.param) +
                                  " exceeds min{phi/(4c1), phi/(4c2)} = " +
                                  format_double(bound));
  }
  if (id == SolverId::GraalVi && p.f.vi_lipschitz) {
    const double bound = phi / (2.0 * *p.f.vi_lipschitz);
    if (s.param > bound + 1e-12)
      throw std::invalid_argument("graal-vi: lambda " + format_double(s.param) +
                                  " exceeds phi/(2L) = " + format_double(bound));
  }
}

struct EnergyTracker {
  const Vector* z = nullptr;
  std::optional<Vector> prev_trial;

  // (1+phi)||x - z||^2 + (phi/2)||trial_prev - trial||^2; undefined until a
  // previous trial point exists (the Fejer-type energy needs two past steps).
  std::optional<double> observe(const Vector& x, const Vector& trial) {
    std::optional<double> e;
    if (z && prev_trial) {
      const double dx = distance(x, *z);
      const double dy = distance(*prev_trial, trial);
      e = (1.0 + phi) * dx * dx + 0.5 * phi * dy * dy;
    }
    prev_trial = trial;
    return e;
  }
};

}  // namespace

RunTrace run(SolverId id, const ProblemInstance& p, const SolverConfig& config) {
  if (config.tol <= 0.0) throw std::invalid_argument("run: tol must be positive");
  if (config.max_iter < 0) throw std::invalid_argument("run: max_iter must be >= 0");
  if (!config.x0) throw std::invalid_argument("run: config.x0 is required");
  validate_schedule_kind(id, config.schedule);
  validate_stepsize_bound(id, p, config.schedule);
  const Vector& x0 = *config.x0;
  if (!p.set.contains(x0)) throw std::invalid_argument("run: x0 is not feasible");
  const Vector y1 = config.y1 ? *config.y1 : x0;
  if (!p.set.contains(y1)) throw std::invalid_argument("run: y1 is not feasible");
  if (id == SolverId::GraalVi && !p.f.is_vi())
    throw std::invalid_argument("graal-vi requires a VI-structured bifunction");

  RunTrace trace;
  EnergyTracker energy;
  if (config.energy_reference) energy.z = &*config.energy_reference;

  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  auto t_last = t_start;

  auto record = [&](int k, double residual, std::optional<double> e) {
    const auto now = clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - t_last).count();
    t_last = now;
    trace.records.push_back(IterationRecord{k, residual, e, ms});
  };
  auto snapshot = [&](const Vector& x, const Vector& y) {
    if (config.record_iterates) {
      trace.xs.push_back(x);
      trace.ys.push_back(y);
    }
  };

  try {
    if (is_golden(id)) {
      GoldenState s = golden_init(x0, y1);
      for (int step = 1; step <= config.max_iter; ++step) {
        const double lam = config.schedule.value(step - 1);
        snapshot(s.x, s.y);
        const auto e = energy.observe(s.x, s.y);
        GoldenState next = [&] {
          switch (id) {
            case SolverId::Gra1:
              return gra1_step(s, p, lam, config.prox_inner_tol);
            case SolverId::Gra2:
              return gra2_step(s, p, lam, config.prox_inner_tol);
            case SolverId::Gra3:
              return gra3_step(s, p, lam);
            default:
              return graal_vi_step(s, p.f.vi_operator, p.set, lam);
          }
        }();
        const double residual =
            (id == SolverId::Gra1 || id == SolverId::GraalVi)
                ? distance(next.y, s.y) + distance(s.y, s.x)
                : distance(next.y, s.x) + distance(s.y, s.x);
        record(step, residual, e);
        s = std::move(next);
        if (residual < config.tol) {
          trace.status = RunStatus::Converged;
          break;
        }
      }
      snapshot(s.x, s.y);
      trace.solution = s.y;
    } else if (id == SolverId::Gea) {
      Vector x = x0;
      for (int step = 1; step <= config.max_iter; ++step) {
        const double lam = config.schedule.value(step - 1);
        GeaIterates it = gea_step(x, p, lam, lam, config.prox_inner_tol);
        const double residual = distance(it.x_tilde, it.x_bar);
        snapshot(x, it.x_bar);
        record(step, residual, energy.observe(it.x_next, it.x_bar));
        x = std::move(it.x_next);
        if (residual < config.tol) {
          trace.status = RunStatus::Converged;
          break;
        }
      }
      trace.solution = x;
    } else if (id == SolverId::Hieu) {
      Vector x = x0;
      for (int step = 1; step <= config.max_iter; ++step) {
        const double lam = config.schedule.value(step - 1);
        HieuIterates it = hieu_step(x, p, lam, config.prox_inner_tol);
        const double residual = distance(x, it.y);
        snapshot(x, it.y);
        record(step, residual, energy.observe(it.x_next, it.y));
        x = std::move(it.x_next);
        if (residual < config.tol) {
          trace.status = RunStatus::Converged;
          break;
        }
      }
      trace.solution = x;
    } else {  // Popov
      Vector x = x0;
      Vector y = y1;  // y^0
      for (int step = 1; step <= config.max_iter; ++step) {
        const double lam = config.schedule.value(step - 1);
        PopovIterates it = popov_step(x, y, p, lam, config.prox_inner_tol);
        const double residual = distance(it.y_next, x) + distance(y, x);
        snapshot(x, y);
        record(step, residual, energy.observe(it.x_next, it.y_next));
        x = std::move(it.x_next);
        y = std::move(it.y_next);
        if (residual < config.tol) {
          trace.status = RunStatus::Converged;
          break;
        }
      }
      snapshot(x, y);
      trace.solution = x;
    }
  } catch (const std::runtime_error& err) {
    trace.status = RunStatus::Error;
    trace.error_message = err.what();
  }

  trace.total_seconds =
      std::chrono::duration<double>(clock::now() - t_start).count();
  return trace;
}

void write_trace_csv(const RunTrace& t, std::ostream& os) {
  os << "k,residual,energy,wall_ms\n";
  for (const auto& r : t.records) {
    os << r.k << ',' << format_double(r.residual) << ',';
    if (r.energy) os << format_double(*r.energy);
    os << ',' << format_double(r.wall_ms) << '\n';
  }
}

}  // namespace eq
