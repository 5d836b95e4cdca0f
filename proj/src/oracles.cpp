#include "mbm/oracles.hpp"

#include "mbm/auxiliary.hpp"
#include "mbm/barrier.hpp"
#include "mbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mbm {

void Grid::validate() const {
  if (lower.size() == 0 || lower.size() != upper.size() ||
      counts.size() != static_cast<std::size_t>(lower.size())) {
    throw ConfigError("grid bounds and counts must have matching nonzero dimension");
  }
  for (Eigen::Index d = 0; d < lower.size(); ++d) {
    const int count = counts[static_cast<std::size_t>(d)];
    if (!std::isfinite(lower[d]) || !std::isfinite(upper[d]) || upper[d] < lower[d]) {
      throw ConfigError("grid dimension " + std::to_string(d) + " has invalid bounds");
    }
    const bool single_point = count == 1 && lower[d] == upper[d];
    if (count < 2 && !single_point) {
      throw ConfigError("grid dimension " + std::to_string(d) + " needs at least 2 points");
    }
  }
  double total = 1.0;
  for (int count : counts) total *= static_cast<double>(count);
  if (total > static_cast<double>(cap)) {
    throw ConfigError("grid has " + std::to_string(static_cast<long long>(total)) +
                      " points, above the cap of " + std::to_string(cap));
  }
}

std::size_t Grid::size() const {
  std::size_t total = 1;
  for (int count : counts) total *= static_cast<std::size_t>(count);
  return total;
}

double Grid::spacing(int dimension) const {
  const int count = counts[static_cast<std::size_t>(dimension)];
  return count > 1 ? (upper[dimension] - lower[dimension]) / (count - 1) : 0.0;
}

Vector Grid::point(std::size_t flat_index) const {
  Vector x(lower.size());
  for (Eigen::Index d = lower.size() - 1; d >= 0; --d) {
    const auto count = static_cast<std::size_t>(counts[static_cast<std::size_t>(d)]);
    const std::size_t i = flat_index % count;
    flat_index /= count;
    // Endpoints are hit exactly.
    x[d] = (count > 1 && i == count - 1) ? upper[d] : lower[d] + static_cast<double>(i) * spacing(static_cast<int>(d));
  }
  return x;
}

Grid Grid::line(double lower, double upper, int count) {
  return Grid{Vector::Constant(1, lower), Vector::Constant(1, upper), {count}};
}

Grid Grid::cube(int n, double lower, double upper, int count) {
  return Grid{Vector::Constant(n, lower), Vector::Constant(n, upper),
              std::vector<int>(static_cast<std::size_t>(n), count)};
}

GridImage evaluate_feasible(const Problem& problem, const Grid& grid) {
  grid.validate();
  if (grid.lower.size() != problem.n()) {
    throw ConfigError("grid dimension does not match the decision dimension");
  }
  GridImage image;
  const std::size_t total = grid.size();
  for (std::size_t i = 0; i < total; ++i) {
    Vector x = grid.point(i);
    if (!is_feasible(problem, x)) continue;
    image.values.push_back(problem.objective(x));
    image.points.push_back(std::move(x));
  }
  return image;
}

bool dominates(const Vector& a, const Vector& b) {
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

GridImage nondominated_subset(const GridImage& image) {
  // After a lexicographic sort every dominator precedes the point it
  // dominates, so each point only needs checking against the front so far.
  std::vector<std::size_t> order(image.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vector& fa = image.values[a];
    const Vector& fb = image.values[b];
    return std::lexicographical_compare(fa.data(), fa.data() + fa.size(), fb.data(),
                                        fb.data() + fb.size());
  });

  std::vector<std::size_t> front;
  for (std::size_t idx : order) {
    const Vector& candidate = image.values[idx];
    const bool dominated = std::any_of(front.begin(), front.end(), [&](std::size_t f) {
      return dominates(image.values[f], candidate);
    });
    if (!dominated) front.push_back(idx);
  }
  std::sort(front.begin(), front.end());

  GridImage out;
  for (std::size_t idx : front) {
    out.points.push_back(image.points[idx]);
    out.values.push_back(image.values[idx]);
  }
  return out;
}

GridImage brute_force_nondominated(const Problem& problem, const Grid& grid) {
  return nondominated_subset(evaluate_feasible(problem, grid));
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::ApproxPareto: return "ApproxPareto";
    case Classification::ApproxWeakParetoOnly: return "ApproxWeakParetoOnly";
    case Classification::Dominated: return "Dominated";
  }
  return "unknown";
}

Classification classify_point(const Problem& problem, const Vector& x, const GridImage& image,
                              double tol) {
  if (!is_feasible(problem, x)) throw PreconditionError("classify_point needs a feasible candidate");
  const Vector fx = problem.objective(x);
  bool weak_only = false;
  for (const Vector& fy : image.values) {
    if (((fy - fx).array() < -tol).all()) return Classification::Dominated;
    if (!weak_only && ((fy - fx).array() <= tol).all() && ((fy - fx).array() < -tol).any()) {
      weak_only = true;
    }
  }
  return weak_only ? Classification::ApproxWeakParetoOnly : Classification::ApproxPareto;
}

Classification classify_point(const Problem& problem, const Vector& x, const Grid& grid,
                              double tol) {
  return classify_point(problem, x, evaluate_feasible(problem, grid), tol);
}

std::string_view to_string(WeightingOutcome outcome) {
  switch (outcome) {
    case WeightingOutcome::Minimizer: return "Minimizer";
    case WeightingOutcome::Unbounded: return "Unbounded";
    case WeightingOutcome::BudgetExhausted: return "BudgetExhausted";
  }
  return "unknown";
}

WeightingResult weighting_method_solve(const Problem& problem, const Vector& alpha,
                                       const Vector& x_start, int budget) {
  if (alpha.size() != problem.m()) throw InputError("weight vector has the wrong dimension");
  if (!alpha.allFinite() || (alpha.array() < 0.0).any() || std::abs(alpha.sum() - 1.0) > 1e-12) {
    throw InputError("weights must lie on the unit simplex");
  }
  if (budget < 1) throw InputError("weighting budget must be at least 1");

  constexpr double kTinyPenalty = 1e-8;
  const CompositeObjective objective(make_inverse_summed_replicated(problem),
                                     AuxiliaryFunction::weighted_sum(alpha), kTinyPenalty);
  InnerSolverConfig config;
  config.method = InnerMethod::GradientBacktracking;
  config.max_iterations = budget;
  const InnerResult inner = minimize(objective, x_start, config);

  WeightingResult result;
  result.alpha = alpha;
  result.x = inner.x;
  result.value = inner.value;
  switch (inner.status) {
    case InnerStatus::Converged: result.outcome = WeightingOutcome::Minimizer; break;
    case InnerStatus::Unbounded: result.outcome = WeightingOutcome::Unbounded; break;
    case InnerStatus::IterationLimit: result.outcome = WeightingOutcome::BudgetExhausted; break;
  }
  return result;
}

double weighting_failure_fraction(const Problem& problem, int alpha_grid, const Vector& x_start,
                                  int budget, std::vector<WeightingResult>* details) {
  if (problem.m() != 2) throw CapabilityError("weighting sweep is defined for two objectives");
  if (alpha_grid < 2) throw InputError("alpha grid needs at least 2 points");
  int unbounded = 0;
  for (int i = 0; i < alpha_grid; ++i) {
    const double a1 = static_cast<double>(i) / (alpha_grid - 1);
    Vector alpha(2);
    alpha << a1, 1.0 - a1;
    WeightingResult r = weighting_method_solve(problem, alpha, x_start, budget);
    if (r.outcome == WeightingOutcome::Unbounded) ++unbounded;
    if (details) details->push_back(std::move(r));
  }
  return static_cast<double>(unbounded) / alpha_grid;
}

}  // namespace mbm
