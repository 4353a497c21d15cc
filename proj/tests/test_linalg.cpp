#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "eq/linalg.hpp"

using namespace eq;

namespace {

Vector random_vector(const SpacePtr& space, std::mt19937_64& rng, double scale = 5.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> c(static_cast<size_t>(space->dim()));
  for (auto& v : c) v = u(rng);
  return Vector(space, std::move(c));
}

}  // namespace

TEST_CASE("euclidean dot") {
  auto s = InnerProductSpace::euclidean(2);
  const Vector a(s, {1.0, 2.0});
  const Vector b(s, {3.0, 4.0});
  CHECK(dot(a, b) == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(dot(a, Vector::zeros(s)) == 0.0);
  CHECK(dot(a, b) == dot(b, a));
}

TEST_CASE("quadrature weights sum to one and all positive") {
  for (int n : {2, 11, 101, 501}) {
    auto s = InnerProductSpace::unit_grid(n);
    double sum = 0.0;
    for (double w : s->weights()) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // <1,1> = integral of 1 over [0,1]
    const Vector one = Vector::constant(s, 1.0);
    CHECK(dot(one, one) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("norms") {
  auto s = InnerProductSpace::euclidean(2);
  CHECK(norm(Vector(s, {3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(norm(Vector::zeros(s)) == 0.0);
}

TEST_CASE("grid norm of sqrt(2t) is 1") {
  // |sqrt(2t)|^2 integrates 2t, which the trapezoid rule handles exactly.
  auto s = InnerProductSpace::unit_grid(101);
  std::vector<double> c(s->nodes().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = std::sqrt(2.0 * s->nodes()[i]);
  CHECK(norm(Vector(s, std::move(c))) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("combine endpoints and midpoint identity") {
  auto s = InnerProductSpace::euclidean(2);
  const Vector a(s, {2.0, 0.0});
  const Vector b(s, {0.0, 2.0});
  const Vector c1 = combine(1.0, a, b);
  const Vector c0 = combine(0.0, a, b);
  CHECK(distance(c1, a) == 0.0);
  CHECK(distance(c0, b) == 0.0);
  const Vector mid = combine(0.5, a, b);
  CHECK(mid[0] == doctest::Approx(1.0));
  CHECK(mid[1] == doctest::Approx(1.0));
  const double lhs = norm(mid) * norm(mid);
  CHECK(lhs == doctest::Approx(0.5 * 4.0 + 0.5 * 4.0 - 0.25 * 8.0).epsilon(1e-15));
}

TEST_CASE("convex-combination norm identity on random triples") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ut(-2.0, 3.0);
  auto su = InnerProductSpace::euclidean(7);
  auto sg = InnerProductSpace::unit_grid(33);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& s = (trial % 2 == 0) ? su : sg;
    const double t = ut(rng);
    const Vector a = random_vector(s, rng);
    const Vector b = random_vector(s, rng);
    const Vector m = combine(t, a, b);
    const double lhs = dot(m, m);
    const Vector d = a - b;
    const double rhs = t * dot(a, a) + (1.0 - t) * dot(b, b) - t * (1.0 - t) * dot(d, d);
    const double scale = 1.0 + std::fabs(lhs) + std::fabs(rhs);
    CHECK(std::fabs(lhs - rhs) <= 1e-10 * scale);
  }
}

TEST_CASE("dot is symmetric and bilinear on random samples") {
  std::mt19937_64 rng(7);
  auto s = InnerProductSpace::unit_grid(25);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector a = random_vector(s, rng);
    const Vector b = random_vector(s, rng);
    const Vector c = random_vector(s, rng);
    const double al = u(rng);
    CHECK(std::fabs(dot(a, b) - dot(b, a)) <= 1e-12 * (1.0 + std::fabs(dot(a, b))));
    const double lhs = dot(axpy(al, a, c), b);
    const double rhs = al * dot(a, b) + dot(c, b);
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + std::fabs(lhs)));
  }
}

TEST_CASE("space and dimension mismatches are rejected") {
  auto s2 = InnerProductSpace::euclidean(2);
  auto s3 = InnerProductSpace::euclidean(3);
  auto g3 = InnerProductSpace::unit_grid(3);
  const Vector a(s2, {1.0, 2.0});
  const Vector b(s3, {1.0, 2.0, 3.0});
  const Vector g(g3, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(dot(a, b), std::invalid_argument);
  CHECK_THROWS_AS(combine(0.5, b, g), std::invalid_argument);  // same dim, different weights
  CHECK_THROWS_AS(Vector(s2, {1.0}), std::invalid_argument);
}

TEST_CASE("non-finite entries are rejected") {
  auto s = InnerProductSpace::euclidean(2);
  CHECK_THROWS_AS(Vector(s, {1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Vector(s, {std::numeric_limits<double>::infinity(), 0.0}),
                  std::invalid_argument);
}

TEST_CASE("text round trip preserves doubles exactly") {
  std::mt19937_64 rng(123);
  auto s = InnerProductSpace::euclidean(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector v = random_vector(s, rng, 1e6);
    const Vector back(s, parse_coords(format_vector(v)));
    for (int i = 0; i < v.dim(); ++i) CHECK(back[i] == v[i]);
  }
  CHECK_THROWS_AS(parse_coords("1.0,,2.0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_coords("1.0,junk"), std::invalid_argument);
}
