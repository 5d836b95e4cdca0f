#pragma once

#include "mbm/inner_solver.hpp"
#include "mbm/problem.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace mbm {

/// Tensor grid of evaluation points; only feasible points (g <= 0,
/// boundary included) take part in the oracles.
struct Grid {
  Vector lower;
  Vector upper;
  std::vector<int> counts;
  std::size_t cap = 1'000'000;

  /// ConfigError on mismatched sizes, counts < 2 (a count of 1 is accepted
  /// only when lower == upper in that dimension), or more points than `cap`.
  void validate() const;
  std::size_t size() const;
  /// Point with the given flat (row-major, last dimension fastest) index.
  Vector point(std::size_t flat_index) const;
  double spacing(int dimension) const;

  /// 1-D convenience constructor.
  static Grid line(double lower, double upper, int count);
  /// Same bounds and count in every dimension.
  static Grid cube(int n, double lower, double upper, int count);
};

struct GridImage {
  std::vector<Vector> points;
  std::vector<Vector> values;
};

/// Feasible grid points with their objective values.
GridImage evaluate_feasible(const Problem& problem, const Grid& grid);

/// a dominates b: a <= b componentwise with at least one strict inequality.
bool dominates(const Vector& a, const Vector& b);

/// Feasible grid points not dominated by any other feasible grid point.
GridImage brute_force_nondominated(const Problem& problem, const Grid& grid);

/// Same filter applied to an already-evaluated image.
GridImage nondominated_subset(const GridImage& image);

enum class Classification { ApproxPareto, ApproxWeakParetoOnly, Dominated };
std::string_view to_string(Classification c);

/// Compares f(x) with the feasible grid image:
///  Dominated if some y has f(y) < f(x) - tol in every component;
///  ApproxWeakParetoOnly if not, but some y has f(y) <= f(x) + tol with
///  f_j(y) < f_j(x) - tol for some j;
///  ApproxPareto otherwise.
/// PreconditionError if x is infeasible.
Classification classify_point(const Problem& problem, const Vector& x, const GridImage& image,
                              double tol);
Classification classify_point(const Problem& problem, const Vector& x, const Grid& grid,
                              double tol);

enum class WeightingOutcome { Minimizer, Unbounded, BudgetExhausted };
std::string_view to_string(WeightingOutcome outcome);

struct WeightingResult {
  Vector alpha;
  WeightingOutcome outcome = WeightingOutcome::BudgetExhausted;
  Vector x;  // last iterate (the minimizer when outcome == Minimizer)
  double value = 0.0;
};

/// Weighting-method baseline: minimizes <alpha, f(x)> over the feasible set
/// with the gradient inner solver on the weighted-sum composite, using the
/// summed inverse barrier at the fixed tiny penalty 1e-8. Unbounded when the
/// iterate norm exceeds 1e8 or the value drops below -1e12. InputError if
/// alpha is off the unit simplex.
WeightingResult weighting_method_solve(const Problem& problem, const Vector& alpha,
                                       const Vector& x_start, int budget);

/// Fraction of alpha_1 values on a uniform grid over [0, 1] (alpha_2 = 1 - alpha_1)
/// for which the weighting method is Unbounded. Biobjective problems only.
double weighting_failure_fraction(const Problem& problem, int alpha_grid, const Vector& x_start,
                                  int budget, std::vector<WeightingResult>* details = nullptr);

}  // namespace mbm
