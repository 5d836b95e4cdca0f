#pragma once

#include "mbm/auxiliary.hpp"
#include "mbm/barrier.hpp"
#include "mbm/problem.hpp"

#include <functional>
#include <optional>
#include <string_view>

namespace mbm {

/// Closed axis-aligned box [lower, upper]. Subproblems are restricted to its interior.
struct Box {
  Vector lower;
  Vector upper;

  /// ConfigError unless both bounds are finite, of equal size and every side
  /// has positive length.
  void validate() const;
  bool contains_interior(const Vector& x) const;
  Vector center() const { return 0.5 * (lower + upper); }
};

/// x -> phi(f(x) + tau * B(x)) over D^o, optionally intersected with int(V).
class CompositeObjective {
 public:
  /// The problem is the one the barrier was built for. ConfigError unless
  /// tau > 0 and the dimensions of phi, barrier and box agree.
  CompositeObjective(Barrier barrier, AuxiliaryFunction phi, double tau,
                     std::optional<Box> box = std::nullopt);

  const Problem& problem() const { return barrier_.problem(); }
  const Barrier& barrier() const { return barrier_; }
  const AuxiliaryFunction& phi() const { return phi_; }
  double tau() const { return tau_; }
  const std::optional<Box>& box() const { return box_; }

  /// True iff x is strictly feasible and inside the open box.
  bool admissible(const Vector& x) const;
  /// Penalized objective vector f(x) + tau B(x). Requires admissible x.
  Vector penalized(const Vector& x) const;

 private:
  Barrier barrier_;
  AuxiliaryFunction phi_;
  double tau_;
  std::optional<Box> box_;
};

/// phi(f(x) + tau B(x)) at admissible x, +inf everywhere else (including
/// points where the barrier saturates).
double evaluate_composite(const CompositeObjective& objective, const Vector& x);

/// grad phi(u)^T (J_f(x) + tau J_B(x)) with u = f(x) + tau B(x).
/// DomainError if some g_i(x) > -1e-12 or x lies outside the open box;
/// TieError from max-type phi at ties.
Vector composite_gradient(const CompositeObjective& objective, const Vector& x);

enum class InnerMethod {
  Auto,  // NelderMead for max-type phi, GradientBacktracking otherwise
  GradientBacktracking,
  NelderMead,
};

std::string_view to_string(InnerMethod method);
InnerMethod inner_method_from_string(std::string_view name);

struct InnerSolverConfig {
  InnerMethod method = InnerMethod::Auto;
  int max_iterations = 5000;
  double step_tolerance = 1e-10;
  double value_tolerance = 1e-12;
  /// Backtracking shrink factor in (0, 1).
  double shrink = 0.5;
  /// Fraction-to-boundary factor in (0, 1): a step may consume at most this
  /// fraction of any constraint (or box) slack.
  double safeguard = 0.99;
  double armijo = 1e-4;
  /// Values below this are reported as Unbounded.
  double unbounded_value = -1e12;
  /// Iterates with infinity norm above this are reported as Unbounded.
  double unbounded_norm = 1e8;

  /// ConfigError on non-positive tolerances or factors outside (0, 1).
  void validate() const;
  bool operator==(const InnerSolverConfig&) const = default;
};

enum class InnerStatus { Converged, IterationLimit, Unbounded };

std::string_view to_string(InnerStatus status);

struct InnerResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  InnerStatus status = InnerStatus::Converged;
};

/// Called with (iteration, x, value) for the start point and after every
/// iteration with the current accepted point. Values are nonincreasing.
using IterateHook = std::function<void(int, const Vector&, double)>;

/// Resolves InnerMethod::Auto for the given auxiliary function.
InnerMethod resolve_method(InnerMethod method, const AuxiliaryFunction& phi);

/// Local minimization of the composite from a strictly feasible start.
/// Every accepted point is admissible and the returned value never exceeds
/// the start value. PreconditionError for inadmissible starts or a
/// non-finite start value.
InnerResult minimize(const CompositeObjective& objective, const Vector& x_start,
                     const InnerSolverConfig& config = {}, const IterateHook& hook = {});

}  // namespace mbm
