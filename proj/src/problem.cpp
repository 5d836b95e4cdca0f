#include "mbm/problem.hpp"

#include "mbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mbm {

Problem::Problem(int n, int m, int p, VectorField objective, VectorField constraints,
                 JacobianField objective_jacobian, JacobianField constraint_jacobian,
                 std::optional<Vector> strictly_feasible_start)
    : n_(n),
      m_(m),
      p_(p),
      objective_(std::move(objective)),
      constraints_(std::move(constraints)),
      objective_jacobian_(std::move(objective_jacobian)),
      constraint_jacobian_(std::move(constraint_jacobian)),
      start_(std::move(strictly_feasible_start)) {
  if (n_ < 1 || m_ < 1 || p_ < 0) {
    throw ConfigError("problem dimensions must satisfy n >= 1, m >= 1, p >= 0");
  }
  if (!objective_ || !constraints_) {
    throw ConfigError("problem requires both an objective and a constraint evaluator");
  }
  if (start_ && !is_strictly_feasible(*this, *start_)) {
    throw ConfigError("strictly_feasible_start violates g(x) < 0");
  }
}

void Problem::check_dimension(const Vector& x) const {
  if (x.size() != n_) {
    std::ostringstream msg;
    msg << "point has dimension " << x.size() << ", problem expects " << n_;
    throw InputError(msg.str());
  }
}

Vector Problem::objective(const Vector& x) const {
  check_dimension(x);
  Vector f = objective_(x);
  if (f.size() != m_) throw InputError("objective evaluator returned wrong size");
  return f;
}

Vector Problem::constraints(const Vector& x) const {
  check_dimension(x);
  Vector g = constraints_(x);
  if (g.size() != p_) throw InputError("constraint evaluator returned wrong size");
  return g;
}

Matrix Problem::objective_jacobian(const Vector& x) const {
  check_dimension(x);
  if (objective_jacobian_) return objective_jacobian_(x);
  return finite_difference_jacobian(objective_, x);
}

Matrix Problem::constraint_jacobian(const Vector& x) const {
  check_dimension(x);
  if (constraint_jacobian_) return constraint_jacobian_(x);
  if (p_ == 0) return Matrix::Zero(0, n_);
  return finite_difference_jacobian(constraints_, x);
}

Problem Problem::with_start(Vector start) const {
  return Problem(n_, m_, p_, objective_, constraints_, objective_jacobian_,
                 constraint_jacobian_, std::move(start));
}

bool is_strictly_feasible(const Problem& problem, const Vector& x) {
  const Vector g = problem.constraints(x);
  return (g.array() < 0.0).all();
}

bool is_feasible(const Problem& problem, const Vector& x) {
  const Vector g = problem.constraints(x);
  return (g.array() <= 0.0).all();
}

double default_fd_step(const Vector& x) {
  const double scale = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return 1e-6 * std::max(1.0, scale);
}

Matrix finite_difference_jacobian(const VectorField& field, const Vector& x,
                                  std::optional<double> h) {
  const double step = h.value_or(default_fd_step(x));
  if (!(step > 0.0)) throw InputError("finite-difference step must be positive");

  const Vector f0 = field(x);
  Matrix jac(f0.size(), x.size());
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + step;
    const Vector plus = field(probe);
    probe[j] = x[j] - step;
    const Vector minus = field(probe);
    probe[j] = x[j];
    jac.col(j) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

// ---------------------------------------------------------------------------

Problem make_ex51(double a) {
  auto f = [a](const Vector& x) {
    Vector out(2);
    out << x[0], -a * x[0];
    return out;
  };
  auto g = [](const Vector& x) {
    Vector out(1);
    out << -x[0];
    return out;
  };
  auto jf = [a](const Vector&) {
    Matrix out(2, 1);
    out << 1.0, -a;
    return out;
  };
  auto jg = [](const Vector&) {
    Matrix out(1, 1);
    out << -1.0;
    return out;
  };
  return Problem(1, 2, 1, f, g, jf, jg, Vector::Constant(1, 1.0));
}

Problem make_ex52() {
  auto f = [](const Vector& x) {
    const double t = x[0];
    Vector out(2);
    out << t * t + 1.0, t * t - 2.0 * t + 1.0;
    return out;
  };
  auto g = [](const Vector& x) {
    Vector out(1);
    out << -x[0] - 2.0;
    return out;
  };
  auto jf = [](const Vector& x) {
    const double t = x[0];
    Matrix out(2, 1);
    out << 2.0 * t, 2.0 * t - 2.0;
    return out;
  };
  auto jg = [](const Vector&) {
    Matrix out(1, 1);
    out << -1.0;
    return out;
  };
  return Problem(1, 2, 1, f, g, jf, jg, Vector::Constant(1, -1.0));
}

Problem make_disk2d() {
  auto f = [](const Vector& x) { return Vector(x); };
  auto g = [](const Vector& x) {
    Vector out(1);
    out << x.squaredNorm() - 1.0;
    return out;
  };
  auto jf = [](const Vector&) { return Matrix(Matrix::Identity(2, 2)); };
  auto jg = [](const Vector& x) {
    Matrix out(1, 2);
    out << 2.0 * x[0], 2.0 * x[1];
    return out;
  };
  return Problem(2, 2, 1, f, g, jf, jg, Vector::Zero(2));
}

namespace {

void reject_unknown(std::string_view name, const ProblemParameters& params,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : params) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError("problem '" + std::string(name) + "' has no parameter '" + key + "'");
    }
  }
}

}  // namespace

std::vector<std::string> registry_names() { return {"disk2d", "ex51", "ex52"}; }

ProblemInstance registry_get(std::string_view name, const ProblemParameters& params) {
  if (name == "ex51") {
    reject_unknown(name, params, {"a"});
    const auto it = params.find("a");
    const double a = it != params.end() ? it->second : 9.0;
    return {"ex51", make_ex51(a), "every feasible t >= 0 is Pareto optimal"};
  }
  if (name == "ex52") {
    reject_unknown(name, params, {});
    return {"ex52", make_ex52(), "Pareto set [0, 1]; Max shifted by (alpha, 0) selects t = -alpha/2"};
  }
  if (name == "disk2d") {
    reject_unknown(name, params, {});
    return {"disk2d", make_disk2d(), "Pareto set is the arc |x| = 1 with x <= 0"};
  }
  std::string msg = "unknown problem '" + std::string(name) + "'; available:";
  for (const auto& n : registry_names()) msg += " " + n;
  throw LookupError(msg);
}

}  // namespace mbm
