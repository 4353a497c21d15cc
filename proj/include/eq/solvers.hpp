#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eq/problems.hpp"

namespace eq {

// (1 + sqrt 5)/2, the positive root of phi^2 = phi + 1.
inline constexpr double golden_ratio = 1.61803398874989484820458683436563812;

// Stepsize sequences used by the solvers:
//   constant     lambda_k = c
//   diminishing  lambda_k = a/(k+1)   (non-summable, -> 0)
//   adaptive     beta_k   = b/(k+1)   (non-summable, square-summable; scaled
//                                      by 1/max{1,||g||} inside gra3)
struct StepSchedule {
  enum class Kind { Constant, Diminishing, Adaptive };
  Kind kind = Kind::Constant;
  double param = 0.0;

  static StepSchedule constant(double c);
  static StepSchedule diminishing(double a);
  static StepSchedule adaptive(double b);
  // Mini-language: "0.27" | "40/(k+1)" | "beta:4/(k+1)".
  static StepSchedule parse(const std::string& text);

  double value(int k) const;  // k >= 0, counted from the first executed step
  std::string str() const;
};

// Golden-ratio iterate triple. The invariant x = ((phi-1)y + x_prev)/phi
// holds on every state, equivalently y - x_prev = phi*(y - x).
struct GoldenState {
  Vector x_prev;  // x^{k-1}
  Vector y;       // y^k
  Vector x;       // x^k
  int k = 1;
};

// Builds the state for the first iterative step from x^0, y^1.
GoldenState golden_init(const Vector& x0, const Vector& y1);

enum class SolverId { Gra1, Gra2, Gra3, GraalVi, Gea, Hieu, Popov };

SolverId parse_solver(const std::string& name);
std::string solver_name(SolverId id);
std::vector<std::string> solver_names();

struct SolverConfig {
  StepSchedule schedule;
  double tol = 1e-6;
  int max_iter = 10000;
  std::optional<Vector> x0;                // required
  std::optional<Vector> y1;                // defaults to x0
  std::optional<Vector> energy_reference;  // z for the Fejer-type energy record
  bool record_iterates = false;
  double prox_inner_tol = 1e-10;
};

enum class RunStatus { Converged, MaxIter, Error };

struct IterationRecord {
  int k = 0;
  double residual = 0.0;
  std::optional<double> energy;
  double wall_ms = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  RunStatus status = RunStatus::MaxIter;
  std::optional<Vector> solution;  // terminal iterate
  std::string error_message;
  double total_seconds = 0.0;
  // Filled when record_iterates: per step the main iterate x and the trial
  // point y entering the step, plus the final pair after the last step.
  std::vector<Vector> xs, ys;

  int iterations() const { return static_cast<int>(records.size()); }
  double final_residual() const;
};

// One iterative step each. Steps compute the prox/projection first and then
// the golden-ratio average for the next state.
GoldenState gra1_step(const GoldenState& s, const ProblemInstance& p, double lambda,
                      double inner_tol = 1e-10);
GoldenState gra2_step(const GoldenState& s, const ProblemInstance& p, double lambda_k,
                      double inner_tol = 1e-10);
// Diagonal-subgradient step: g in df(y^k,.)(y^k), eta = max{1, ||g||},
// y^{k+1} = P_C(x^k - (beta_k/eta) g).
GoldenState gra3_step(const GoldenState& s, const ProblemInstance& p, double beta_k);
// y^{k+1} = P_C(x^k - lambda A(y^k)).
GoldenState graal_vi_step(const GoldenState& s, const std::function<Vector(const Vector&)>& A,
                          const FeasibleSet& set, double lambda);

struct GeaIterates {
  Vector x_bar, x_tilde, x_next;
};
// Three prox solves; alpha_k = 0 collapses x_bar = x (classical extragradient).
GeaIterates gea_step(const Vector& x, const ProblemInstance& p, double alpha_k,
                     double beta_k, double inner_tol = 1e-10);

struct HieuIterates {
  Vector y, x_next;
};
HieuIterates hieu_step(const Vector& x, const ProblemInstance& p, double lambda_n,
                       double inner_tol = 1e-10);

struct PopovIterates {
  Vector x_next, y_next;
};
// Both prox solves anchored at y^n, centered at x^n and x^{n+1}.
PopovIterates popov_step(const Vector& x, const Vector& y, const ProblemInstance& p,
                         double lambda_n, double inner_tol = 1e-10);

// Runs a solver until its residual drops below tol or max_iter steps.
// Residuals are frozen per algorithm:
//   gra1, graal-vi: ||y^{k+1}-y^k|| + ||y^k-x^k||
//   gra2, gra3:     ||y^{k+1}-x^k|| + ||y^k-x^k||
//   gea:            ||x_tilde^k - x_bar^k||
//   hieu:           ||x^n - y^n||
//   popov:          ||y^{n+1}-x^n|| + ||y^n-x^n||
RunTrace run(SolverId id, const ProblemInstance& p, const SolverConfig& config);

// CSV with header k,residual,energy,wall_ms ("%.17g", energy blank when absent).
void write_trace_csv(const RunTrace& t, std::ostream& os);

}  // namespace eq
