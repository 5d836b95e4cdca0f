#pragma once

#include "mbm/problem.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mbm {

enum class BarrierKind {
  InverseAssigned,          // B_i = 1/(-g_i) for i < p, zero padding up to m
  InverseSummedReplicated,  // every B_j = sum_i 1/(-g_i)
  InverseGrouped,           // B_j = sum over group j of 1/(-g_i)
  LogReplicatedShifted,     // every B_j = -sum_i log(-g_i) - rho
};

std::string_view to_string(BarrierKind kind);
BarrierKind barrier_kind_from_string(std::string_view name);

/// Partition of constraint indices (0-based) into m groups, one per objective.
using Grouping = std::vector<std::vector<int>>;

/// Multiobjective barrier B : D^o -> R^m for the feasible set of a problem.
///
/// Every component is a sum of per-constraint terms, either 1/(-g_i) or
/// -log(-g_i), over a fixed index set. Constraint values in [-1e-300, 0)
/// saturate their terms to +inf instead of overflowing.
class Barrier {
 public:
  BarrierKind kind() const { return kind_; }
  double shift() const { return shift_; }
  /// Component -> contributing constraint indices.
  const Grouping& groups() const { return groups_; }
  int m() const { return static_cast<int>(groups_.size()); }
  const Problem& problem() const { return problem_; }

  /// B(x). Throws DomainError if x is not strictly feasible.
  Vector evaluate(const Vector& x) const;
  /// B expressed through already-computed constraint values g(x) < 0.
  Vector evaluate_from_constraints(const Vector& g) const;
  /// m x n Jacobian of B at a strictly feasible x.
  Matrix jacobian(const Vector& x) const;

 private:
  friend Barrier make_inverse_assigned(const Problem&);
  friend Barrier make_inverse_summed_replicated(const Problem&);
  friend Barrier make_inverse_grouped(const Problem&, const Grouping&);
  friend Barrier make_log_replicated_shifted(const Problem&, double);

  Barrier(Problem problem, BarrierKind kind, Grouping groups, double shift);

  double term(double g) const;
  double term_derivative(double g) const;

  Problem problem_;
  BarrierKind kind_;
  Grouping groups_;
  double shift_;
};

/// Requires p <= m; otherwise ConfigError pointing at the grouped/summed kinds.
Barrier make_inverse_assigned(const Problem& problem);
Barrier make_inverse_summed_replicated(const Problem& problem);
/// `grouping` must have m entries covering every constraint exactly once.
Barrier make_inverse_grouped(const Problem& problem, const Grouping& grouping);
Barrier make_log_replicated_shifted(const Problem& problem, double rho);

/// Shift estimate for the log barrier: the minimum of the unshifted value
/// -sum log(-g_i) over the strictly feasible samples, minus `margin`.
/// Throws InputError if no sample is strictly feasible.
double estimate_log_shift(const Problem& problem, std::span<const Vector> samples,
                          double margin = 1.0);

struct NonnegativityReport {
  bool nonnegative = true;
  double min_component = 0.0;
  std::optional<Vector> witness;  // first sample with a negative component
};

/// Flags barriers whose sampled values go negative. Infeasible samples are skipped.
NonnegativityReport check_nonnegative(const Barrier& barrier, std::span<const Vector> samples);

}  // namespace mbm
