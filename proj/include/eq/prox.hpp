#pragma once

#include "eq/linalg.hpp"
#include "eq/problems.hpp"

namespace eq {

// Nearest-point maps onto the canonical sets, in the vector's own
// inner-product geometry.
Vector project_box(const Vector& x, double lo, double hi);
Vector project_ball(const Vector& x, double radius);
// Halfspace { y : <a,y> >= b }.
Vector project_halfspace(const Vector& x, const Vector& a, double b);

// Dykstra's alternating projections onto box {lo <= x_i <= hi} intersected
// with { sum_i x_i >= level }. Iterates until the successive change drops
// below `tol` or the sweep budget is exhausted (error).
Vector project_box_halfspace(const Vector& x, double lo, double hi, double level,
                             double tol = 1e-12, int max_sweeps = 10000);

// The strongly convex subproblem min_{y in C} lambda*f(anchor, y) + 1/2||y - center||^2.
struct ProxProblem {
  const Bifunction& f;
  const FeasibleSet& set;
  Vector anchor;
  Vector center;
  double stepsize;  // lambda > 0
};

struct ProxResult {
  Vector minimizer;
  int inner_iterations = 0;
  // Fixed-point optimality residual ||y - P_C(y - grad h(y))|| at the minimizer,
  // h(y) = lambda f(anchor,y) + 1/2 ||y-center||^2.
  double certificate = 0.0;
};

// VI-structured bifunctions collapse to a single projection
// P_C(center - lambda*A(anchor)); smooth ones run projected gradient with
// fixed step 1/(1 + lambda*hessian_bound) until the certificate <= inner_tol.
ProxResult solve_prox(const ProxProblem& p, double inner_tol = 1e-10,
                      int max_inner = 100000);

}  // namespace eq
