#include "eq/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "eq/prox.hpp"

namespace eq {

namespace {

constexpr double kConstructTol = 1e-9;

Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.coords().data(), v.dim());
}

Vector from_eigen(const SpacePtr& space, const Eigen::VectorXd& e) {
  return Vector(space, std::vector<double>(e.data(), e.data() + e.size()));
}

bool uniform_unit_weights(const InnerProductSpace& s) {
  for (double w : s.weights())
    if (w != 1.0) return false;
  return true;
}

std::string short_witness(const Vector& v) {
  if (v.dim() <= 8) return format_vector(v);
  std::string out;
  for (int i = 0; i < 4; ++i) out += format_double(v[i]) + ",";
  return out + "...(" + std::to_string(v.dim()) + " coords)";
}

}  // namespace

Bifunction affine_bifunction(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                             const Eigen::VectorXd& q, const SpacePtr& space) {
  const auto n = space->dim();
  if (P.rows() != n || P.cols() != n || Q.rows() != n || Q.cols() != n || q.size() != n)
    throw std::invalid_argument("affine bifunction: dimension mismatch");
  if (!uniform_unit_weights(*space))
    throw std::invalid_argument("affine bifunction requires a Euclidean space");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > kConstructTol)
    throw std::invalid_argument("affine bifunction: Q is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_q(0.5 * (Q + Q.transpose()));
  if (es_q.eigenvalues().minCoeff() < -kConstructTol)
    throw std::invalid_argument("affine bifunction: Q is not positive semidefinite");

  const Eigen::MatrixXd d = Q - P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_d(0.5 * (d + d.transpose()));
  if (es_d.eigenvalues().maxCoeff() > kConstructTol)
    throw std::invalid_argument("affine bifunction: Q - P is not negative semidefinite");

  Bifunction f;
  f.smooth_hessian_bound = 2.0 * es_q.eigenvalues().cwiseAbs().maxCoeff();
  f.eval = [P, Q, q](const Vector& x, const Vector& y) {
    const Eigen::VectorXd ex = to_eigen(x), ey = to_eigen(y);
    return ((P * ex + Q * ey + q).dot(ey - ex));
  };
  f.partial_subgrad = [P, Q, q](const Vector& x, const Vector& y) {
    const Eigen::VectorXd ex = to_eigen(x), ey = to_eigen(y);
    const Eigen::VectorXd g = P * ex + q + Q * ey + Q * (ey - ex);
    return from_eigen(x.space(), g);
  };
  return f;
}

Bifunction vi_bifunction(std::function<Vector(const Vector&)> A,
                         std::optional<double> L, std::optional<double> gamma) {
  Bifunction f;
  f.vi_operator = A;
  f.eval = [A](const Vector& x, const Vector& y) { return dot(A(x), y - x); };
  f.partial_subgrad = [A](const Vector& x, const Vector&) { return A(x); };
  if (L) {
    f.vi_lipschitz = *L;
    f.lipschitz = std::make_pair(*L / 2.0, *L / 2.0);
  }
  f.strong_modulus = gamma;
  return f;
}

FeasibleSet box_set(const SpacePtr& space, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("box: lo > hi");
  FeasibleSet s;
  s.project = [lo, hi](const Vector& x) { return project_box(x, lo, hi); };
  s.contains = [lo, hi](const Vector& x) {
    for (int i = 0; i < x.dim(); ++i)
      if (x[i] < lo - 1e-9 || x[i] > hi + 1e-9) return false;
    return true;
  };
  s.sample = [space, lo, hi](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> c(static_cast<size_t>(space->dim()));
    for (auto& v : c) v = u(rng);
    return Vector(space, std::move(c));
  };
  return s;
}

FeasibleSet ball_set(const SpacePtr& space, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("ball: radius must be positive");
  FeasibleSet s;
  s.project = [radius](const Vector& x) { return project_ball(x, radius); };
  s.contains = [radius](const Vector& x) { return norm(x) <= radius + 1e-9; };
  // Gaussian direction normalized in the space norm, uniform radius.
  s.sample = [space, radius](std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> c(static_cast<size_t>(space->dim()));
    for (auto& v : c) v = gauss(rng);
    Vector dir(space, std::move(c));
    const double n = norm(dir);
    if (n == 0.0) return Vector::zeros(space);
    return (radius * u(rng) / n) * dir;
  };
  return s;
}

FeasibleSet box_halfspace_set(const SpacePtr& space, double lo, double hi, double level) {
  if (lo > hi) throw std::invalid_argument("box_halfspace: lo > hi");
  if (space->dim() * hi < level)
    throw std::invalid_argument("box_halfspace: empty intersection");
  FeasibleSet s;
  s.project = [lo, hi, level](const Vector& x) {
    return project_box_halfspace(x, lo, hi, level);
  };
  s.contains = [lo, hi, level](const Vector& x) {
    double sum = 0.0;
    for (int i = 0; i < x.dim(); ++i) {
      if (x[i] < lo - 1e-9 || x[i] > hi + 1e-9) return false;
      sum += x[i];
    }
    return sum >= level - 1e-9;
  };
  // Uniform box draws, rejecting violations of the sum constraint.
  s.sample = [space, lo, hi, level](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    for (;;) {
      std::vector<double> c(static_cast<size_t>(space->dim()));
      double sum = 0.0;
      for (auto& v : c) {
        v = u(rng);
        sum += v;
      }
      if (sum >= level) return Vector(space, std::move(c));
    }
  };
  return s;
}

ProblemInstance example61() {
  Eigen::MatrixXd P(5, 5), Q(5, 5);
  P << 3.1, 2.0, 0.0, 0.0, 0.0,
       2.0, 3.6, 0.0, 0.0, 0.0,
       0.0, 0.0, 3.5, 2.0, 0.0,
       0.0, 0.0, 2.0, 3.3, 0.0,
       0.0, 0.0, 0.0, 0.0, 3.0;
  Q << 1.6, 1.0, 0.0, 0.0, 0.0,
       1.0, 1.6, 0.0, 0.0, 0.0,
       0.0, 0.0, 1.5, 1.0, 0.0,
       0.0, 0.0, 1.0, 1.5, 0.0,
       0.0, 0.0, 0.0, 0.0, 2.0;
  Eigen::VectorXd q(5);
  q << 1.0, -2.0, -1.0, 2.0, -1.0;

  ProblemInstance p;
  p.name = "example61";
  p.space = InnerProductSpace::euclidean(5);
  p.f = affine_bifunction(P, Q, q, p.space);
  p.set = box_halfspace_set(p.space, -5.0, 5.0, -1.0);
  return p;
}

ProblemInstance example62(int grid_points) {
  ProblemInstance p;
  p.name = "example62";
  p.space = InnerProductSpace::unit_grid(grid_points);
  auto A = [](const Vector& x) { return (1.5 - norm(x)) * x; };
  p.f = vi_bifunction(A);
  p.f.lipschitz = std::make_pair(1.75, 1.75);
  p.f.strong_modulus = 0.5;
  p.set = ball_set(p.space, 1.0);
  p.known_solution = Vector::zeros(p.space);
  return p;
}

ProblemInstance example21(int grid_points) {
  ProblemInstance p;
  p.name = "example21";
  p.space = InnerProductSpace::unit_grid(grid_points);
  auto A = [](const Vector& x) {
    const double n = norm(x);
    return (1.0 / (1.0 + n * n)) * x;
  };
  p.f = vi_bifunction(A, std::nullopt, 0.5);
  p.set = ball_set(p.space, 1.0);
  p.known_solution = Vector::zeros(p.space);
  return p;
}

// ---------------------------------------------------------------------------
// Problem files

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& s, const char* what) {
  std::istringstream ss(s);
  std::vector<double> out;
  double v;
  while (ss >> v) out.push_back(v);
  std::string rest;
  ss.clear();
  if (ss >> rest)
    throw std::invalid_argument(std::string("problem file: bad number in ") + what);
  if (out.empty())
    throw std::invalid_argument(std::string("problem file: empty ") + what);
  return out;
}

// "name(a, b, ...)" -> {name, args}
std::pair<std::string, std::vector<double>> parse_call(const std::string& s) {
  const auto open = s.find('(');
  if (open == std::string::npos) return {trim(s), {}};
  const auto close = s.rfind(')');
  if (close == std::string::npos || close < open)
    throw std::invalid_argument("problem file: unbalanced parentheses in '" + s + "'");
  std::string args = s.substr(open + 1, close - open - 1);
  for (auto& ch : args)
    if (ch == ',') ch = ' ';
  std::vector<double> vals;
  if (!trim(args).empty()) vals = parse_numbers(args, "argument list");
  return {trim(s.substr(0, open)), vals};
}

}  // namespace

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq_pos = line.find('=');
    if (eq_pos == std::string::npos)
      throw std::invalid_argument("problem file: expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq_pos));
    const std::string val = trim(line.substr(eq_pos + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("problem file: empty key or value in '" + line + "'");
    if (kv.count(key))
      throw std::invalid_argument("problem file: duplicate key '" + key + "'");
    kv[key] = val;
  }

  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument("problem file: missing key '" + key + "'");
    return it->second;
  };

  const int dim = static_cast<int>(std::llround(parse_numbers(get("dim"), "dim").at(0)));
  if (dim < 1) throw std::invalid_argument("problem file: dim must be positive");

  const std::string space_kind = get("space");
  SpacePtr space;
  if (space_kind == "euclidean")
    space = InnerProductSpace::euclidean(dim);
  else if (space_kind == "grid01")
    space = InnerProductSpace::unit_grid(dim);
  else
    throw std::invalid_argument("problem file: unknown space '" + space_kind + "'");

  ProblemInstance p;
  p.space = space;
  p.name = kv.count("name") ? kv["name"] : path;

  const auto [bif_kind, bif_args] = parse_call(get("bifunction"));
  if (bif_kind == "affine") {
    auto read_matrix = [&](const char* key) {
      const auto vals = parse_numbers(get(key), key);
      if (static_cast<int>(vals.size()) != dim * dim)
        throw std::invalid_argument(std::string("problem file: ") + key + " needs dim*dim entries");
      Eigen::MatrixXd m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = vals[static_cast<size_t>(r * dim + c)];
      return m;
    };
    const Eigen::MatrixXd P = read_matrix("matrix P");
    const Eigen::MatrixXd Q = read_matrix("matrix Q");
    const auto qv = parse_numbers(get("vector q"), "vector q");
    if (static_cast<int>(qv.size()) != dim)
      throw std::invalid_argument("problem file: vector q needs dim entries");
    Eigen::VectorXd q(dim);
    for (int i = 0; i < dim; ++i) q(i) = qv[static_cast<size_t>(i)];
    p.f = affine_bifunction(P, Q, q, space);
  } else if (bif_kind == "radial") {
    if (bif_args.size() != 1)
      throw std::invalid_argument("problem file: radial(c) needs one argument");
    const double c = bif_args[0];
    p.f = vi_bifunction([c](const Vector& x) { return (c - norm(x)) * x; });
  } else if (bif_kind == "normalized") {
    if (bif_args.size() != 1)
      throw std::invalid_argument("problem file: normalized(c) needs one argument");
    const double c = bif_args[0];
    p.f = vi_bifunction([c](const Vector& x) {
      const double n = norm(x);
      return (1.0 / (c + n * n)) * x;
    });
  } else {
    throw std::invalid_argument("problem file: unknown bifunction '" + bif_kind + "'");
  }

  const auto [set_kind, set_args] = parse_call(get("set"));
  if (set_kind == "box" && set_args.size() == 2)
    p.set = box_set(space, set_args[0], set_args[1]);
  else if (set_kind == "ball" && set_args.size() == 1)
    p.set = ball_set(space, set_args[0]);
  else if (set_kind == "box_halfspace" && set_args.size() == 3)
    p.set = box_halfspace_set(space, set_args[0], set_args[1], set_args[2]);
  else
    throw std::invalid_argument("problem file: unknown set '" + get("set") + "'");

  if (kv.count("lipschitz")) {
    const auto cs = parse_numbers(kv["lipschitz"], "lipschitz");
    if (cs.size() != 2 || cs[0] <= 0 || cs[1] <= 0)
      throw std::invalid_argument("problem file: lipschitz needs two positive constants");
    p.f.lipschitz = std::make_pair(cs[0], cs[1]);
  }
  if (kv.count("gamma")) {
    const double g = parse_numbers(kv["gamma"], "gamma").at(0);
    if (g <= 0) throw std::invalid_argument("problem file: gamma must be positive");
    p.f.strong_modulus = g;
  }
  if (kv.count("solution")) {
    if (kv["solution"] == "zero") {
      p.known_solution = Vector::zeros(space);
    } else {
      auto coords = parse_coords(kv["solution"]);
      p.known_solution = Vector(space, std::move(coords));
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Condition suites

std::vector<ConditionResult> check_conditions(const ProblemInstance& p, int samples,
                                              uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ConditionResult> out;

  auto finish = [&](ConditionResult r, double tolerance) {
    r.passed = r.worst_margin <= tolerance;
    out.push_back(std::move(r));
  };

  {  // (A1): f(x,x) = 0
    ConditionResult r{.name = "A1"};
    r.worst_margin = 0.0;
    for (int i = 0; i < samples; ++i) {
      const Vector x = p.set.sample(rng);
      const double v = std::fabs(p.f.eval(x, x));
      if (v > r.worst_margin) {
        r.worst_margin = v;
        r.witness = "x=" + short_witness(x);
      }
    }
    finish(std::move(r), 1e-12);
  }

  {  // (A2): f(x,y) >= 0 implies f(y,x) <= 0
    ConditionResult r{.name = "A2"};
    r.worst_margin = -1e300;
    for (int i = 0; i < samples; ++i) {
      const Vector x = p.set.sample(rng);
      const Vector y = p.set.sample(rng);
      if (p.f.eval(x, y) < 0.0) continue;
      const double v = p.f.eval(y, x);
      if (v > r.worst_margin) {
        r.worst_margin = v;
        r.witness = "x=" + short_witness(x) + "; y=" + short_witness(y);
      }
    }
    finish(std::move(r), 1e-10);
  }

  {  // (A4) certificate: f(x,y) >= f(x,y0) + <g(x,y0), y - y0>
    ConditionResult r{.name = "A4"};
    r.worst_margin = -1e300;
    for (int i = 0; i < samples; ++i) {
      const Vector x = p.set.sample(rng);
      const Vector y = p.set.sample(rng);
      const Vector y0 = p.set.sample(rng);
      const Vector g = p.f.partial_subgrad(x, y0);
      const double v = p.f.eval(x, y0) + dot(g, y - y0) - p.f.eval(x, y);
      if (v > r.worst_margin) {
        r.worst_margin = v;
        r.witness = "x=" + short_witness(x);
      }
    }
    finish(std::move(r), 1e-10);
  }

  if (p.f.lipschitz) {
    const auto [c1, c2] = *p.f.lipschitz;
    ConditionResult r;
    r.name = "A5(c1=" + format_double(c1) + ",c2=" + format_double(c2) + ")";
    r.worst_margin = -1e300;
    for (int i = 0; i < samples; ++i) {
      const Vector x = p.set.sample(rng);
      const Vector y = p.set.sample(rng);
      const Vector z = p.set.sample(rng);
      const double dxy = distance(x, y), dyz = distance(y, z);
      const double v = p.f.eval(x, z) - c1 * dxy * dxy - c2 * dyz * dyz -
                       p.f.eval(x, y) - p.f.eval(y, z);
      if (v > r.worst_margin) {
        r.worst_margin = v;
        r.witness = "x=" + short_witness(x) + "; y=" + short_witness(y) + "; z=" + short_witness(z);
      }
    }
    finish(std::move(r), 1e-10);
  }

  if (p.f.strong_modulus) {
    const double gamma = *p.f.strong_modulus;
    ConditionResult r;
    r.name = "A9(gamma=" + format_double(gamma) + ")";
    r.worst_margin = -1e300;
    for (int i = 0; i < samples; ++i) {
      const Vector x = p.set.sample(rng);
      const Vector y = p.set.sample(rng);
      if (p.f.eval(x, y) < 0.0) continue;
      const double d = distance(x, y);
      const double v = p.f.eval(y, x) + gamma * d * d;
      if (v > r.worst_margin) {
        r.worst_margin = v;
        r.witness = "x=" + short_witness(x) + "; y=" + short_witness(y);
      }
    }
    finish(std::move(r), 1e-10);
  }

  return out;
}

}  // namespace eq
