#include "eq/linalg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace eq {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("vector entry is not finite");
}

void check_same_space(const Vector& a, const Vector& b) {
  if (a.space().get() == b.space().get()) return;
  if (!a.space()->same_as(*b.space()))
    throw std::invalid_argument("vectors belong to different inner-product spaces");
}

}  // namespace

InnerProductSpace::InnerProductSpace(int dim, std::vector<double> weights,
                                     std::vector<double> nodes)
    : dim_(dim), weights_(std::move(weights)), nodes_(std::move(nodes)) {}

SpacePtr InnerProductSpace::euclidean(int dim) {
  require(dim >= 1, "space dimension must be positive");
  return SpacePtr(new InnerProductSpace(dim, std::vector<double>(static_cast<size_t>(dim), 1.0), {}));
}

SpacePtr InnerProductSpace::unit_grid(int points) {
  require(points >= 2, "grid needs at least two points");
  const double h = 1.0 / (points - 1);
  std::vector<double> w(static_cast<size_t>(points), h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  std::vector<double> t(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) t[static_cast<size_t>(i)] = i * h;
  t.back() = 1.0;
  return SpacePtr(new InnerProductSpace(points, std::move(w), std::move(t)));
}

bool InnerProductSpace::same_as(const InnerProductSpace& other) const {
  return dim_ == other.dim_ && weights_ == other.weights_;
}

Vector::Vector(SpacePtr space, std::vector<double> coords)
    : space_(std::move(space)), coords_(std::move(coords)) {
  require(space_ != nullptr, "vector needs a space");
  require(static_cast<int>(coords_.size()) == space_->dim(),
          "coordinate count does not match space dimension");
  check_finite(coords_);
}

Vector Vector::zeros(SpacePtr space) {
  require(space != nullptr, "vector needs a space");
  std::vector<double> c(static_cast<size_t>(space->dim()), 0.0);
  return Vector(std::move(space), std::move(c));
}

Vector Vector::constant(SpacePtr space, double value) {
  require(space != nullptr, "vector needs a space");
  std::vector<double> c(static_cast<size_t>(space->dim()), value);
  return Vector(std::move(space), std::move(c));
}

double dot(const Vector& a, const Vector& b) {
  check_same_space(a, b);
  const auto& w = a.space()->weights();
  double s = 0.0;
  for (size_t i = 0; i < w.size(); ++i) s += w[i] * a.coords()[i] * b.coords()[i];
  return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double distance(const Vector& a, const Vector& b) { return norm(a - b); }

Vector combine(double t, const Vector& a, const Vector& b) {
  check_same_space(a, b);
  std::vector<double> c(a.coords().size());
  for (size_t i = 0; i < c.size(); ++i)
    c[i] = t * a.coords()[i] + (1.0 - t) * b.coords()[i];
  return Vector(a.space(), std::move(c));
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  check_same_space(x, y);
  std::vector<double> c(x.coords().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = alpha * x.coords()[i] + y.coords()[i];
  return Vector(x.space(), std::move(c));
}

Vector operator+(const Vector& a, const Vector& b) { return axpy(1.0, a, b); }

Vector operator-(const Vector& a, const Vector& b) { return axpy(-1.0, b, a); }

Vector operator*(double s, const Vector& a) {
  std::vector<double> c(a.coords().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = s * a.coords()[i];
  return Vector(a.space(), std::move(c));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_vector(const Vector& v) {
  std::string out;
  for (int i = 0; i < v.dim(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::vector<double> parse_coords(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    double v;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number in vector literal: '" + item + "'");
    }
    while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    if (pos != item.size())
      throw std::invalid_argument("trailing junk in vector literal: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty vector literal");
  return out;
}

}  // namespace eq
