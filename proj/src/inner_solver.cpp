#include "mbm/inner_solver.hpp"

#include "mbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mbm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryProximity = 1e-12;

void require_dimension(const Vector& x, int n, const char* what) {
  if (x.size() != n) {
    throw InputError(std::string(what) + " has dimension " + std::to_string(x.size()) +
                     ", expected " + std::to_string(n));
  }
}

/// Constraint slacks -g_i(x) followed by the box face distances. All entries
/// are positive exactly when x is admissible.
Vector slacks(const CompositeObjective& objective, const Vector& x) {
  const Vector g = objective.problem().constraints(x);
  const auto& box = objective.box();
  const Eigen::Index p = g.size();
  const Eigen::Index faces = box ? 2 * x.size() : 0;
  Vector s(p + faces);
  s.head(p) = -g;
  if (box) {
    s.segment(p, x.size()) = x - box->lower;
    s.tail(x.size()) = box->upper - x;
  }
  return s;
}

bool looks_unbounded(const InnerSolverConfig& config, const Vector& x, double value) {
  return value < config.unbounded_value || x.cwiseAbs().maxCoeff() > config.unbounded_norm;
}

// ---------------------------------------------------------------------------

InnerResult gradient_backtracking(const CompositeObjective& objective, const Vector& x_start,
                                  double start_value, const InnerSolverConfig& config,
                                  const IterateHook& hook) {
  InnerResult result{x_start, start_value, 0, InnerStatus::IterationLimit};
  Vector x = x_start;
  double value = start_value;
  Vector grad = composite_gradient(objective, x);
  Vector prev_step;
  Vector prev_grad_change;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    result.iterations = iter;
    const double grad_norm = grad.norm();
    if (grad_norm == 0.0 || !std::isfinite(grad_norm)) {
      result.status = InnerStatus::Converged;
      break;
    }
    const Vector direction = -grad;

    // Barzilai-Borwein trial length, falling back to a unit-length move.
    double step = 1.0 / std::max(1.0, grad_norm);
    if (prev_step.size() > 0) {
      const double curvature = prev_step.dot(prev_grad_change);
      if (curvature > 0.0) step = prev_step.squaredNorm() / curvature;
    }
    step = std::min(step, 1e3 * config.unbounded_norm / grad_norm);

    // Fraction-to-boundary: keep every slack above (1 - safeguard) of its
    // current value before f or B is evaluated at the trial point.
    const Vector current_slack = slacks(objective, x);
    const Vector slack_floor = (1.0 - config.safeguard) * current_slack;
    Vector trial = x + step * direction;
    while (step * grad_norm >= config.step_tolerance &&
           !(slacks(objective, trial).array() >= slack_floor.array()).all()) {
      step *= config.shrink;
      trial = x + step * direction;
    }

    // Armijo backtracking.
    double trial_value = kInf;
    while (step * grad_norm >= config.step_tolerance) {
      if ((slacks(objective, trial).array() >= slack_floor.array()).all()) {
        trial_value = evaluate_composite(objective, trial);
        if (trial_value <= value - config.armijo * step * grad_norm * grad_norm) break;
      }
      step *= config.shrink;
      trial = x + step * direction;
      trial_value = kInf;
    }
    if (!std::isfinite(trial_value)) {
      // No admissible decrease along the gradient at resolvable step length.
      result.status = InnerStatus::Converged;
      break;
    }

    const double decrease = value - trial_value;
    prev_step = trial - x;
    x = trial;
    value = trial_value;
    result.x = x;
    result.value = value;
    if (hook) hook(iter, x, value);

    if (looks_unbounded(config, x, value)) {
      result.status = InnerStatus::Unbounded;
      break;
    }
    if (prev_step.cwiseAbs().maxCoeff() < config.step_tolerance ||
        decrease < config.value_tolerance * std::max(1.0, std::abs(value))) {
      result.status = InnerStatus::Converged;
      break;
    }
    const Vector next_grad = composite_gradient(objective, x);
    prev_grad_change = next_grad - grad;
    grad = next_grad;
  }
  return result;
}

// ---------------------------------------------------------------------------

struct Simplex {
  std::vector<Vector> vertices;
  std::vector<double> values;

  void order() {
    std::vector<std::size_t> idx(vertices.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Vector> v;
    std::vector<double> f;
    for (std::size_t i : idx) {
      v.push_back(vertices[i]);
      f.push_back(values[i]);
    }
    vertices = std::move(v);
    values = std::move(f);
  }

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
      d = std::max(d, (vertices[i] - vertices[0]).cwiseAbs().maxCoeff());
    }
    return d;
  }
};

/// Axis-aligned start simplex around x. Edge lengths are halved (and the
/// direction flipped) until every vertex is admissible.
Simplex initial_simplex(const CompositeObjective& objective, const Vector& x, double value,
                        double scale) {
  Simplex simplex;
  simplex.vertices.push_back(x);
  simplex.values.push_back(value);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double h = scale * std::max(1.0, std::abs(x[j]));
    Vector vertex = x;
    double vertex_value = kInf;
    for (int attempt = 0; attempt < 200 && !std::isfinite(vertex_value); ++attempt) {
      vertex = x;
      vertex[j] += (attempt % 2 == 0) ? h : -h;
      vertex_value = evaluate_composite(objective, vertex);
      if (attempt % 2 == 1) h *= 0.5;
    }
    if (!std::isfinite(vertex_value)) {
      throw PreconditionError("could not build an admissible Nelder-Mead simplex");
    }
    simplex.vertices.push_back(vertex);
    simplex.values.push_back(vertex_value);
  }
  return simplex;
}

InnerResult nelder_mead(const CompositeObjective& objective, const Vector& x_start,
                        double start_value, const InnerSolverConfig& config,
                        const IterateHook& hook) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;
  constexpr int kMaxRestarts = 2;

  const auto n = static_cast<std::size_t>(x_start.size());
  InnerResult result{x_start, start_value, 0, InnerStatus::IterationLimit};
  int iter = 0;
  Vector best = x_start;
  double best_value = start_value;

  for (int restart = 0; restart <= kMaxRestarts; ++restart) {
    Simplex s = initial_simplex(objective, best, best_value, restart == 0 ? 0.1 : 0.01);
    const double round_start = best_value;
    int flat_rounds = 0;
    bool converged = false;

    while (iter < config.max_iterations) {
      s.order();
      if (s.diameter() < config.step_tolerance) {
        converged = true;
        break;
      }
      const double spread = s.values[n] - s.values[0];
      flat_rounds = spread <= config.value_tolerance * std::max(1.0, std::abs(s.values[0]))
                        ? flat_rounds + 1
                        : 0;
      if (flat_rounds > 5 * static_cast<int>(n + 1)) {
        converged = true;
        break;
      }
      ++iter;

      Vector centroid = Vector::Zero(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) centroid += s.vertices[i];
      centroid /= static_cast<double>(n);

      const Vector& worst = s.vertices[n];
      const Vector reflected = centroid + kReflect * (centroid - worst);
      const double f_reflected = evaluate_composite(objective, reflected);

      if (f_reflected < s.values[0]) {
        const Vector expanded = centroid + kExpand * (reflected - centroid);
        const double f_expanded = evaluate_composite(objective, expanded);
        if (f_expanded < f_reflected) {
          s.vertices[n] = expanded;
          s.values[n] = f_expanded;
        } else {
          s.vertices[n] = reflected;
          s.values[n] = f_reflected;
        }
      } else if (f_reflected < s.values[n - 1]) {
        s.vertices[n] = reflected;
        s.values[n] = f_reflected;
      } else {
        const bool outside = f_reflected < s.values[n];
        const Vector contracted = outside ? Vector(centroid + kContract * (reflected - centroid))
                                          : Vector(centroid + kContract * (worst - centroid));
        const double f_contracted = evaluate_composite(objective, contracted);
        if (f_contracted < (outside ? f_reflected : s.values[n])) {
          s.vertices[n] = contracted;
          s.values[n] = f_contracted;
        } else {
          for (std::size_t i = 1; i <= n; ++i) {
            s.vertices[i] = s.vertices[0] + kShrink * (s.vertices[i] - s.vertices[0]);
            s.values[i] = evaluate_composite(objective, s.vertices[i]);
          }
        }
      }

      const auto lowest = static_cast<std::size_t>(
          std::min_element(s.values.begin(), s.values.end()) - s.values.begin());
      if (s.values[lowest] < best_value) {
        best = s.vertices[lowest];
        best_value = s.values[lowest];
      }
      if (hook) hook(iter, best, best_value);
      if (looks_unbounded(config, best, best_value)) {
        result = {best, best_value, iter, InnerStatus::Unbounded};
        return result;
      }
    }

    result = {best, best_value, iter, converged ? InnerStatus::Converged : InnerStatus::IterationLimit};
    if (!converged) break;
    // A restart that gains nothing measurable confirms the minimizer.
    if (restart > 0 &&
        round_start - best_value <= config.value_tolerance * std::max(1.0, std::abs(best_value))) {
      break;
    }
  }
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------

void Box::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw ConfigError("box bounds must be nonempty and of equal dimension");
  }
  if (!lower.allFinite() || !upper.allFinite()) throw ConfigError("box bounds must be finite");
  if (!((upper - lower).array() > 0.0).all()) {
    throw ConfigError("box has empty interior (every side must have positive length)");
  }
}

bool Box::contains_interior(const Vector& x) const {
  return x.size() == lower.size() && (x.array() > lower.array()).all() &&
         (x.array() < upper.array()).all();
}

CompositeObjective::CompositeObjective(Barrier barrier, AuxiliaryFunction phi, double tau,
                                       std::optional<Box> box)
    : barrier_(std::move(barrier)), phi_(std::move(phi)), tau_(tau), box_(std::move(box)) {
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw ConfigError("tau must be positive and finite");
  if (phi_.dimension() != barrier_.m()) {
    throw ConfigError("auxiliary function dimension does not match the number of objectives");
  }
  if (box_) {
    box_->validate();
    if (box_->lower.size() != barrier_.problem().n()) {
      throw ConfigError("box dimension does not match the decision dimension");
    }
  }
}

bool CompositeObjective::admissible(const Vector& x) const {
  if (box_ && !box_->contains_interior(x)) return false;
  return is_strictly_feasible(problem(), x);
}

Vector CompositeObjective::penalized(const Vector& x) const {
  if (!admissible(x)) throw DomainError("penalized objective evaluated at an inadmissible point");
  return problem().objective(x) + tau_ * barrier_.evaluate(x);
}

double evaluate_composite(const CompositeObjective& objective, const Vector& x) {
  const Problem& problem = objective.problem();
  require_dimension(x, problem.n(), "point");
  if (objective.box() && !objective.box()->contains_interior(x)) return kInf;
  const Vector g = problem.constraints(x);
  if (!(g.array() < 0.0).all()) return kInf;
  const Vector b = objective.barrier().evaluate_from_constraints(g);
  if (!b.allFinite()) return kInf;
  const double value = objective.phi().evaluate(problem.objective(x) + objective.tau() * b);
  return std::isnan(value) ? kInf : value;
}

Vector composite_gradient(const CompositeObjective& objective, const Vector& x) {
  const Problem& problem = objective.problem();
  require_dimension(x, problem.n(), "point");
  if (objective.box() && !objective.box()->contains_interior(x)) {
    throw DomainError("gradient requested outside the open box");
  }
  const Vector g = problem.constraints(x);
  if (!(g.array() <= -kBoundaryProximity).all()) {
    throw DomainError("gradient requested on or too close to the feasible-set boundary");
  }
  const Vector u = problem.objective(x) + objective.tau() * objective.barrier().evaluate_from_constraints(g);
  const Vector dphi = objective.phi().gradient(u);
  const Matrix jac = problem.objective_jacobian(x) + objective.tau() * objective.barrier().jacobian(x);
  return jac.transpose() * dphi;
}

std::string_view to_string(InnerMethod method) {
  switch (method) {
    case InnerMethod::Auto: return "auto";
    case InnerMethod::GradientBacktracking: return "gradient_backtracking";
    case InnerMethod::NelderMead: return "nelder_mead";
  }
  return "unknown";
}

InnerMethod inner_method_from_string(std::string_view name) {
  for (auto method : {InnerMethod::Auto, InnerMethod::GradientBacktracking, InnerMethod::NelderMead}) {
    if (to_string(method) == name) return method;
  }
  throw InputError("unknown inner method '" + std::string(name) + "'");
}

std::string_view to_string(InnerStatus status) {
  switch (status) {
    case InnerStatus::Converged: return "converged";
    case InnerStatus::IterationLimit: return "iteration_limit";
    case InnerStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

void InnerSolverConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("inner.max_iterations must be at least 1");
  if (!(step_tolerance > 0.0)) throw ConfigError("inner.step_tolerance must be positive");
  if (!(value_tolerance > 0.0)) throw ConfigError("inner.value_tolerance must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ConfigError("inner.shrink must lie in (0, 1)");
  if (!(safeguard > 0.0 && safeguard < 1.0)) throw ConfigError("inner.safeguard must lie in (0, 1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw ConfigError("inner.armijo must lie in (0, 1)");
  if (!(unbounded_norm > 0.0)) throw ConfigError("inner.unbounded_norm must be positive");
}

InnerMethod resolve_method(InnerMethod method, const AuxiliaryFunction& phi) {
  if (method != InnerMethod::Auto) return method;
  return phi.is_smooth() ? InnerMethod::GradientBacktracking : InnerMethod::NelderMead;
}

InnerResult minimize(const CompositeObjective& objective, const Vector& x_start,
                     const InnerSolverConfig& config, const IterateHook& hook) {
  config.validate();
  require_dimension(x_start, objective.problem().n(), "start point");
  if (!objective.admissible(x_start)) {
    throw PreconditionError("inner solver start point is not strictly feasible (or outside the box)");
  }
  const double start_value = evaluate_composite(objective, x_start);
  if (!std::isfinite(start_value)) {
    throw PreconditionError("composite objective is not finite at the start point");
  }
  if (hook) hook(0, x_start, start_value);

  switch (resolve_method(config.method, objective.phi())) {
    case InnerMethod::GradientBacktracking:
      return gradient_backtracking(objective, x_start, start_value, config, hook);
    case InnerMethod::NelderMead:
    case InnerMethod::Auto:
      break;
  }
  return nelder_mead(objective, x_start, start_value, config, hook);
}

}  // namespace mbm
