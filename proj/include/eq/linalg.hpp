#pragma once

#include <memory>
#include <string>
#include <vector>

namespace eq {

// Ambient space of the solver iterates: R^n with a weighted inner product
// <a,b> = sum_i w_i a_i b_i. Euclidean spaces have unit weights; discretized
// L^2([0,1]) uses trapezoid quadrature weights on a uniform grid.
class InnerProductSpace {
 public:
  static std::shared_ptr<const InnerProductSpace> euclidean(int dim);
  // Uniform grid of `points` nodes on [0,1] with trapezoid weights
  // h*(1/2, 1, ..., 1, 1/2), h = 1/(points-1). Weights sum to 1.
  static std::shared_ptr<const InnerProductSpace> unit_grid(int points);

  int dim() const { return dim_; }
  const std::vector<double>& weights() const { return weights_; }
  bool has_nodes() const { return !nodes_.empty(); }
  // Grid coordinates in [0,1]; empty for Euclidean spaces.
  const std::vector<double>& nodes() const { return nodes_; }

  bool same_as(const InnerProductSpace& other) const;

 private:
  InnerProductSpace(int dim, std::vector<double> weights, std::vector<double> nodes);
  int dim_;
  std::vector<double> weights_;
  std::vector<double> nodes_;
};

using SpacePtr = std::shared_ptr<const InnerProductSpace>;

// Immutable dense vector tied to its space. All entries are finite; every
// public operation validates the result.
class Vector {
 public:
  Vector(SpacePtr space, std::vector<double> coords);
  static Vector zeros(SpacePtr space);
  static Vector constant(SpacePtr space, double value);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<size_t>(i)]; }
  const std::vector<double>& coords() const { return coords_; }
  const SpacePtr& space() const { return space_; }

 private:
  SpacePtr space_;
  std::vector<double> coords_;
};

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double distance(const Vector& a, const Vector& b);

// t*a + (1-t)*b
Vector combine(double t, const Vector& a, const Vector& b);
// alpha*x + y
Vector axpy(double alpha, const Vector& x, const Vector& y);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);

// Comma-separated "%.17g" coordinates; parse_coords accepts the same format.
std::string format_vector(const Vector& v);
std::vector<double> parse_coords(const std::string& text);

std::string format_double(double x);  // "%.17g"

}  // namespace eq
