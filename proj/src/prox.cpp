#include "eq/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eq {

Vector project_box(const Vector& x, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("project_box: lo > hi");
  std::vector<double> c(x.coords());
  for (auto& v : c) v = std::clamp(v, lo, hi);
  return Vector(x.space(), std::move(c));
}

Vector project_ball(const Vector& x, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("project_ball: radius must be positive");
  const double n = norm(x);
  if (n <= radius) return x;
  return (radius / n) * x;
}

Vector project_halfspace(const Vector& x, const Vector& a, double b) {
  const double a2 = dot(a, a);
  if (a2 == 0.0) throw std::invalid_argument("project_halfspace: a must be nonzero");
  const double slack = dot(a, x) - b;
  if (slack >= 0.0) return x;
  return axpy(-slack / a2, a, x);
}

Vector project_box_halfspace(const Vector& x, double lo, double hi, double level,
                             double tol, int max_sweeps) {
  if (lo > hi) throw std::invalid_argument("project_box_halfspace: lo > hi");
  const Vector ones = Vector::constant(x.space(), 1.0);
  // Dykstra with correction terms p (box) and q (halfspace); plain alternation
  // would find a point of the intersection but not the projection.
  Vector y = x;
  Vector p = Vector::zeros(x.space());
  Vector q = Vector::zeros(x.space());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const Vector yb = project_box(y + p, lo, hi);
    p = (y + p) - yb;
    const Vector yh = project_halfspace(yb + q, ones, level);
    q = (yb + q) - yh;
    const double change = distance(yh, y);
    y = yh;
    if (change < tol) return y;
  }
  throw std::runtime_error(
      "project_box_halfspace: sweep budget exhausted, last change above " +
      format_double(tol));
}

ProxResult solve_prox(const ProxProblem& p, double inner_tol, int max_inner) {
  if (p.stepsize <= 0.0) throw std::invalid_argument("solve_prox: stepsize must be positive");
  if (inner_tol <= 0.0) throw std::invalid_argument("solve_prox: inner_tol must be positive");

  const double lambda = p.stepsize;
  auto grad_h = [&](const Vector& y) {
    return axpy(lambda, p.f.partial_subgrad(p.anchor, y), y - p.center);
  };
  auto fixed_point_residual = [&](const Vector& y) {
    return distance(y, p.set.project(y - grad_h(y)));
  };

  if (p.f.is_vi()) {
    // f(anchor, .) is affine in y, so the argmin is one projection.
    Vector y = p.set.project(axpy(-lambda, p.f.vi_operator(p.anchor), p.center));
    const double cert = fixed_point_residual(y);
    return ProxResult{std::move(y), 0, cert};
  }

  const double step = 1.0 / (1.0 + lambda * p.f.smooth_hessian_bound);
  Vector y = p.set.project(p.center);
  for (int it = 0; it <= max_inner; ++it) {
    const Vector g = grad_h(y);
    const double cert = distance(y, p.set.project(y - g));
    if (cert <= inner_tol) return ProxResult{std::move(y), it, cert};
    if (it == max_inner)
      throw std::runtime_error("solve_prox: iteration budget exhausted, certificate " +
                               format_double(cert));
    y = p.set.project(axpy(-step, g, y));
  }
  throw std::runtime_error("solve_prox: unreachable");
}

}  // namespace eq
