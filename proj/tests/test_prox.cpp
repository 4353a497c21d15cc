#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "eq/prox.hpp"
#include "oracle.hpp"

using namespace eq;

namespace {

Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.coords().data(), v.dim());
}

Vector from_eigen(const SpacePtr& s, const Eigen::VectorXd& e) {
  return Vector(s, std::vector<double>(e.data(), e.data() + e.size()));
}

Vector random_vector(const SpacePtr& s, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(static_cast<size_t>(s->dim()));
  for (auto& v : c) v = u(rng);
  return Vector(s, std::move(c));
}

// Nearest-point certificates: <x - Px, y - Px> <= tol for sampled y in C and
// ||Px - y||^2 <= ||x - y||^2 - ||x - Px||^2 + tol.
void check_projection_certificates(const Vector& x, const Vector& px,
                                   const FeasibleSet& set, std::mt19937_64& rng) {
  const Vector d = x - px;
  const double dx2 = dot(d, d);
  for (int i = 0; i < 200; ++i) {
    const Vector y = set.sample(rng);
    CHECK(dot(d, y - px) <= 1e-8);
    const double lhs = dot(px - y, px - y);
    const double rhs = dot(x - y, x - y) - dx2;
    CHECK(lhs <= rhs + 1e-8);
  }
}

}  // namespace

TEST_CASE("box projection") {
  auto s = InnerProductSpace::euclidean(2);
  CHECK(distance(project_box(Vector(s, {7, 0}), -5, 5), Vector(s, {5, 0})) == 0.0);
  CHECK(distance(project_box(Vector(s, {1, -2}), -5, 5), Vector(s, {1, -2})) == 0.0);
  CHECK(distance(project_box(Vector(s, {-6, 6}), -5, 5), Vector(s, {-5, 5})) == 0.0);
  CHECK_THROWS_AS(project_box(Vector(s, {0, 0}), 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("ball projection") {
  auto s = InnerProductSpace::euclidean(2);
  const Vector x(s, {1.2, 1.6});  // norm 2
  const Vector p = project_ball(x, 1.0);
  CHECK(distance(p, Vector(s, {0.6, 0.8})) <= 1e-15);
  CHECK(distance(project_ball(Vector(s, {0.1, 0.2}), 1.0), Vector(s, {0.1, 0.2})) == 0.0);
  CHECK(norm(project_ball(Vector::zeros(s), 1.0)) == 0.0);
}

TEST_CASE("halfspace projection") {
  auto s = InnerProductSpace::euclidean(5);
  const Vector a = Vector::constant(s, 1.0);
  const Vector x(s, {-1, -1, 0, 0, 0});
  const Vector p = project_halfspace(x, a, -1.0);
  CHECK(distance(p, Vector(s, {-0.8, -0.8, 0.2, 0.2, 0.2})) <= 1e-15);
  const Vector feas(s, {1, 1, 1, 1, 1});
  CHECK(distance(project_halfspace(feas, a, -1.0), feas) == 0.0);
  const Vector boundary(s, {-1, 0, 0, 0, 0});
  CHECK(distance(project_halfspace(boundary, a, -1.0), boundary) == 0.0);
  CHECK_THROWS_AS(project_halfspace(x, Vector::zeros(s), 0.0), std::invalid_argument);
}

TEST_CASE("polytope projection agrees with the active-set oracle") {
  auto s = InnerProductSpace::euclidean(5);
  const FeasibleSet set = box_halfspace_set(s, -5, 5, -1);

  // interior point is a fixed point
  const Vector inside(s, {1, 0, -1, 2, 0});
  CHECK(distance(project_box_halfspace(inside, -5, 5, -1), inside) == 0.0);

  // both constraints active; hand-derived KKT solution, oracle-verified
  const Vector deep(s, {-6, 0, 0, 0, 0});
  const Vector pd = project_box_halfspace(deep, -5, 5, -1);
  CHECK(distance(pd, Vector(s, {-5, 1, 1, 1, 1})) <= 1e-10);

  // only the sum constraint active: equals the closed-form halfspace step
  const Vector mid(s, {-1, -1, 0, 0, 0});
  CHECK(distance(project_box_halfspace(mid, -5, 5, -1),
                 Vector(s, {-0.8, -0.8, 0.2, 0.2, 0.2})) <= 1e-10);

  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    const Vector x = random_vector(s, rng, -10.0, 10.0);
    const Vector mine = project_box_halfspace(x, -5, 5, -1);
    const Eigen::VectorXd ref = eqtest::project_box_halfspace_oracle(to_eigen(x), -5, 5, -1);
    CHECK(distance(mine, from_eigen(s, ref)) <= 1e-8);
    CHECK(set.contains(mine));
  }
}

TEST_CASE("projection certificates hold on every projector") {
  std::mt19937_64 rng(7);
  auto s5 = InnerProductSpace::euclidean(5);
  auto g = InnerProductSpace::unit_grid(41);

  const FeasibleSet poly = box_halfspace_set(s5, -5, 5, -1);
  const FeasibleSet box = box_set(s5, -2, 3);
  const FeasibleSet ball = ball_set(g, 1.0);

  for (int i = 0; i < 5; ++i) {
    const Vector x5 = random_vector(s5, rng, -8.0, 8.0);
    check_projection_certificates(x5, poly.project(x5), poly, rng);
    check_projection_certificates(x5, box.project(x5), box, rng);
    const Vector xg = random_vector(g, rng, -2.0, 2.0);
    check_projection_certificates(xg, ball.project(xg), ball, rng);
  }
}

TEST_CASE("vi prox collapses to one projection") {
  const ProblemInstance p = example62(51);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const Vector anchor = p.set.sample(rng);
    const Vector center = p.set.sample(rng);
    const double lam = 0.3 + i * 0.1;
    const ProxResult r = solve_prox(ProxProblem{p.f, p.set, anchor, center, lam});
    const Vector direct = p.set.project(axpy(-lam, p.f.vi_operator(anchor), center));
    CHECK(distance(r.minimizer, direct) == 0.0);
    CHECK(r.inner_iterations == 0);
    CHECK(r.certificate <= 1e-12);
  }
}

TEST_CASE("tiny stepsize prox is the projection of the center") {
  const ProblemInstance p = example61();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    const Vector anchor = p.set.sample(rng);
    const Vector center = random_vector(p.space, rng, -8.0, 8.0);
    const ProxResult r = solve_prox(ProxProblem{p.f, p.set, anchor, center, 1e-12});
    CHECK(distance(r.minimizer, p.set.project(center)) <= 1e-8);
  }
  CHECK_THROWS_AS(
      solve_prox(ProxProblem{p.f, p.set, Vector::zeros(p.space), Vector::zeros(p.space), 0.0}),
      std::invalid_argument);
}

TEST_CASE("affine prox at the origin matches the frozen oracle value") {
  const ProblemInstance p = example61();
  const Vector zero = Vector::zeros(p.space);
  const ProxResult r = solve_prox(ProxProblem{p.f, p.set, zero, zero, 0.27});
  // computed by the independent active-set oracle (interior optimum)
  const Vector expected(p.space, {-0.24973483268067823, 0.3620476446607115,
                                  0.2614508292846373, -0.37634444630591385,
                                  0.12980769230769232});
  CHECK(distance(r.minimizer, expected) <= 1e-9);
  CHECK(r.certificate <= 1e-10);
}

TEST_CASE("affine prox agrees with the oracle on random subproblems") {
  const ProblemInstance p = example61();
  Eigen::MatrixXd P(5, 5), Q(5, 5);
  P << 3.1, 2, 0, 0, 0, 2, 3.6, 0, 0, 0, 0, 0, 3.5, 2, 0, 0, 0, 2, 3.3, 0, 0, 0, 0, 0, 3;
  Q << 1.6, 1, 0, 0, 0, 1, 1.6, 0, 0, 0, 0, 0, 1.5, 1, 0, 0, 0, 1, 1.5, 0, 0, 0, 0, 0, 2;
  Eigen::VectorXd q(5);
  q << 1, -2, -1, 2, -1;

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ul(0.05, 0.8);
  for (int i = 0; i < 100; ++i) {
    const Vector anchor = p.set.sample(rng);
    const Vector center = random_vector(p.space, rng, -6.0, 6.0);
    const double lam = ul(rng);
    const ProxResult r = solve_prox(ProxProblem{p.f, p.set, anchor, center, lam});
    const Eigen::VectorXd ref = eqtest::affine_prox_oracle(
        P, Q, q, to_eigen(anchor), to_eigen(center), lam, -5, 5, -1);
    CHECK(distance(r.minimizer, from_eigen(p.space, ref)) <= 1e-8);
  }
}

TEST_CASE("prox minimizer beats sampled feasible points") {
  const ProblemInstance p = example61();
  std::mt19937_64 rng(29);
  auto objective = [&](const Vector& anchor, const Vector& center, double lam,
                       const Vector& y) {
    const double d = distance(y, center);
    return lam * p.f.eval(anchor, y) + 0.5 * d * d;
  };
  for (int i = 0; i < 5; ++i) {
    const Vector anchor = p.set.sample(rng);
    const Vector center = random_vector(p.space, rng, -6.0, 6.0);
    const double lam = 0.27;
    const ProxResult r = solve_prox(ProxProblem{p.f, p.set, anchor, center, lam});
    const double h_star = objective(anchor, center, lam, r.minimizer);
    for (int j = 0; j < 200; ++j) {
      const Vector y = p.set.sample(rng);
      CHECK(h_star <= objective(anchor, center, lam, y) + 1e-8);
    }
  }
}

TEST_CASE("prox is idempotent at a solution") {
  // z solves EP(C,f) and lies in C, so prox(anchor z, center z) returns z.
  const ProblemInstance p = example62(41);
  const Vector z = *p.known_solution;
  const ProxResult r = solve_prox(ProxProblem{p.f, p.set, z, z, 0.2});
  CHECK(distance(r.minimizer, z) == 0.0);
}

TEST_CASE("prox reports budget exhaustion with a certificate") {
  const ProblemInstance p = example61();
  const Vector zero = Vector::zeros(p.space);
  CHECK_THROWS_AS(solve_prox(ProxProblem{p.f, p.set, zero, zero, 0.27}, 1e-10, 1),
                  std::runtime_error);
}
