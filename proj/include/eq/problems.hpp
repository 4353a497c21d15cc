#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "eq/linalg.hpp"

namespace eq {

// Equilibrium bifunction f(x,y) with a partial-subgradient oracle for f(x,.).
// When the bifunction has variational-inequality structure f(x,y) = <Ax, y-x>,
// `vi_operator` is set and the prox subproblem collapses to one projection.
struct Bifunction {
  std::function<double(const Vector&, const Vector&)> eval;
  // Some g in the subdifferential of f(x,.) at y.
  std::function<Vector(const Vector&, const Vector&)> partial_subgrad;
  std::optional<std::pair<double, double>> lipschitz;  // (c1, c2) of the Lipschitz-type condition
  std::optional<double> strong_modulus;                // gamma of strong pseudomonotonicity
  std::optional<double> vi_lipschitz;                  // Lipschitz constant of A, when known
  double smooth_hessian_bound = 0.0;                   // sup_y ||Hess_y f(x,.)||, 0 when f(x,.) is affine in y
  std::function<Vector(const Vector&)> vi_operator;

  bool is_vi() const { return static_cast<bool>(vi_operator); }
};

// Closed convex feasible set C given through oracles.
struct FeasibleSet {
  std::function<Vector(const Vector&)> project;
  std::function<bool(const Vector&)> contains;  // membership within 1e-9
  std::function<Vector(std::mt19937_64&)> sample;
};

struct ProblemInstance {
  std::string name;
  SpacePtr space;
  Bifunction f;
  FeasibleSet set;
  std::optional<Vector> known_solution;
};

// f(x,y) = <Px + Qy + q, y - x> on Euclidean R^n. Construction verifies
// Q = Q^T, Q PSD and Q - P NSD by symmetric eigenvalue tests (tolerance 1e-9).
Bifunction affine_bifunction(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                             const Eigen::VectorXd& q, const SpacePtr& space);

// f(x,y) = <A x, y - x>; partial subgradient is A x, constant in y.
// lipschitz becomes (L/2, L/2) when L is given.
Bifunction vi_bifunction(std::function<Vector(const Vector&)> A,
                         std::optional<double> L = std::nullopt,
                         std::optional<double> gamma = std::nullopt);

// Feasible-set builders over a given space.
FeasibleSet box_set(const SpacePtr& space, double lo, double hi);
FeasibleSet ball_set(const SpacePtr& space, double radius);
// { x : lo <= x_i <= hi, sum_i x_i >= level }
FeasibleSet box_halfspace_set(const SpacePtr& space, double lo, double hi, double level);

// The 5-dimensional affine instance on { -5 <= x_i <= 5, sum x_i >= -1 }.
// known_solution is left empty; the bench module computes it at high accuracy.
ProblemInstance example61();
// Radial instance f(x,y) = <(3/2 - ||x||)x, y-x> on the unit ball of the
// grid-discretized L^2([0,1]); c1 = c2 = 7/4, gamma = 1/2, solution 0.
ProblemInstance example62(int grid_points);
// f(x,y) = <x/(1+||x||^2), y-x> on the unit ball; gamma = 1/2, solution 0.
ProblemInstance example21(int grid_points);

// Plain-text key-value problem file (see data/*.eqp and README).
ProblemInstance load_problem(const std::string& path);

// Sampling suites for the standing assumptions, shared by `check`, the unit
// tests and the acceptance suite. Margins follow the per-condition tolerances.
struct ConditionResult {
  std::string name;
  bool passed = false;
  double worst_margin = 0.0;  // most violated amount observed (<= tolerance when passed)
  std::string witness;        // offending point(s) when failed
};

std::vector<ConditionResult> check_conditions(const ProblemInstance& p, int samples,
                                              uint64_t seed);

}  // namespace eq
