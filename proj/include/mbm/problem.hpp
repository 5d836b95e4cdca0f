#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mbm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// x -> F(x) for a vector-valued map.
using VectorField = std::function<Vector(const Vector&)>;
/// x -> dF/dx, one row per component of F.
using JacobianField = std::function<Matrix(const Vector&)>;

/// Constrained multiobjective problem
///
///     min f(x) = (f_1(x), ..., f_m(x))   subject to   g(x) <= 0,
///
/// with f : R^n -> R^m and g : R^n -> R^p. Only inequality constraints are
/// representable. Values are immutable after construction, so a Problem may
/// be shared between concurrently running solves as long as the evaluators
/// themselves are reentrant.
class Problem {
 public:
  /// Throws ConfigError on non-positive dimensions or if the supplied start
  /// point is not strictly feasible.
  Problem(int n, int m, int p, VectorField objective, VectorField constraints,
          JacobianField objective_jacobian = {},
          JacobianField constraint_jacobian = {},
          std::optional<Vector> strictly_feasible_start = std::nullopt);

  int n() const { return n_; }
  int m() const { return m_; }
  int p() const { return p_; }

  /// f(x). Throws InputError when x has the wrong dimension.
  Vector objective(const Vector& x) const;
  /// g(x). Throws InputError when x has the wrong dimension.
  Vector constraints(const Vector& x) const;

  bool has_objective_jacobian() const { return static_cast<bool>(objective_jacobian_); }
  bool has_constraint_jacobian() const { return static_cast<bool>(constraint_jacobian_); }

  /// Analytic Jacobian when available, central differences otherwise.
  Matrix objective_jacobian(const Vector& x) const;
  Matrix constraint_jacobian(const Vector& x) const;

  const std::optional<Vector>& strictly_feasible_start() const { return start_; }

  /// Copy of this problem with a different start point (validated).
  Problem with_start(Vector start) const;

 private:
  void check_dimension(const Vector& x) const;

  int n_;
  int m_;
  int p_;
  VectorField objective_;
  VectorField constraints_;
  JacobianField objective_jacobian_;
  JacobianField constraint_jacobian_;
  std::optional<Vector> start_;
};

/// True iff every component of g(x) is strictly negative.
bool is_strictly_feasible(const Problem& problem, const Vector& x);

/// True iff every component of g(x) is nonpositive.
bool is_feasible(const Problem& problem, const Vector& x);

/// Default central-difference step, 1e-6 * max(1, |x|_inf).
double default_fd_step(const Vector& x);

/// Central-difference Jacobian of `field` at x. Entry (i, j) is
/// (F_i(x + h e_j) - F_i(x - h e_j)) / (2h). Throws InputError if h <= 0.
Matrix finite_difference_jacobian(const VectorField& field, const Vector& x,
                                  std::optional<double> h = std::nullopt);

// ---------------------------------------------------------------------------
// Built-in instances

using ProblemParameters = std::map<std::string, double>;

struct ProblemInstance {
  std::string name;
  Problem problem;
  /// Human-readable description of the optimal set; used by tests only.
  std::string known_solution;
};

/// f(t) = (t, -a t), g(t) = -t. Pareto set is the whole feasible half-line.
Problem make_ex51(double a = 9.0);
/// f(t) = (t^2 + 1, t^2 - 2t + 1), g(t) = -t - 2. Pareto set is [0, 1].
Problem make_ex52();
/// f(x) = (x1, x2), g(x) = x1^2 + x2^2 - 1. Pareto set is the arc |x| = 1, x <= 0.
Problem make_disk2d();

/// Looks up a built-in instance. Recognised parameters: "a" for ex51.
/// Throws LookupError (listing available names) for unknown names and
/// InputError for parameters the instance does not take.
ProblemInstance registry_get(std::string_view name, const ProblemParameters& params = {});

std::vector<std::string> registry_names();

}  // namespace mbm
