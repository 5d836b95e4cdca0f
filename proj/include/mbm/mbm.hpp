#pragma once

#include "mbm/auxiliary.hpp"
#include "mbm/barrier.hpp"
#include "mbm/inner_solver.hpp"
#include "mbm/problem.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mbm {

/// Strictly decreasing positive penalty parameters tau_0, tau_1, ... -> 0.
class PenaltySchedule {
 public:
  enum class Rule { Geometric, Harmonic };

  /// tau_k = tau0 * sigma^k, sigma in (0, 1).
  static PenaltySchedule geometric(double tau0, double sigma);
  /// tau_k = tau0 / (k + 1).
  static PenaltySchedule harmonic(double tau0);

  Rule rule() const { return rule_; }
  double tau0() const { return tau0_; }
  double sigma() const { return sigma_; }

  /// Value at the 0-based index k.
  double value(int k) const;

  bool operator==(const PenaltySchedule&) const = default;

 private:
  PenaltySchedule(Rule rule, double tau0, double sigma);

  Rule rule_;
  double tau0_;
  double sigma_;
};

std::string_view to_string(PenaltySchedule::Rule rule);

enum class Mode { Weak, Strong };
std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

struct MbmConfig {
  Mode mode = Mode::Weak;
  PenaltySchedule schedule = PenaltySchedule::geometric(1.0, 0.5);
  int outer_iterations = 60;
  /// Converged once |x^k - x^{k-1}|_inf < outer_tolerance and tau_k < tau_stop.
  double outer_tolerance = 1e-8;
  double tau_stop = 1e-8;
  /// Restricts every subproblem to D^o intersected with int(box).
  std::optional<Box> local_box;
  InnerSolverConfig inner;
  bool warm_start = true;
  bool recover_weights = false;
  /// Active-set tolerance for weight recovery; default 1e-6 (1 + |max|).
  std::optional<double> recovery_tie_tolerance;

  void validate() const;
};

enum class RunStatus { Converged, OuterBudgetExhausted, InnerFailure };
std::string_view to_string(RunStatus status);

struct RecoveredWeights {
  /// Convex multipliers, zero outside the active set.
  Vector alpha;
  std::vector<int> active_set;
  /// |sum_i alpha_i (grad f_i + tau grad B_i)|_2
  double residual = 0.0;
};

struct TraceRow {
  int k = 0;  // 1-based outer iteration
  double tau = 0.0;
  Vector x;
  Vector f;
  Vector b;
  double phi = 0.0;  // phi(f(x^k) + tau_k B(x^k))
  int inner_iterations = 0;
  InnerStatus inner_status = InnerStatus::Converged;
  std::optional<RecoveredWeights> weights;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  Vector x_final;
  /// Estimate of lim phi_k: the last recorded phi_k.
  double phi_limit = 0.0;
  RunStatus status = RunStatus::OuterBudgetExhausted;
  std::string failure_reason;
  /// Every point accepted by the inner solver, in order (instrumentation).
  std::vector<Vector> accepted_points;
};

/// Global barrier method. Iterate k minimizes phi(f + tau_k B) over D^o,
/// warm-started from x^{k-1}. Throws PreconditionError if x0 is not strictly
/// feasible (or outside the local box) and ConfigError on a mode/monotonicity
/// mismatch. Inner solver failures end the run with RunStatus::InnerFailure.
RunTrace mbm_run(const Problem& problem, const Barrier& barrier, const AuxiliaryFunction& phi,
                 const Vector& x0, const MbmConfig& config);

/// Local variant: identical to mbm_run with subproblems restricted to int(box).
RunTrace local_mbm_run(const Problem& problem, const Barrier& barrier,
                       const AuxiliaryFunction& phi, const Vector& x0, const Box& box,
                       MbmConfig config);

/// Multipliers alpha on the unit simplex, supported on the active set of
/// f(x) + tau B(x) under a max-type phi, minimizing the norm of
/// sum_i alpha_i (grad f_i(x) + tau grad B_i(x)).
/// Tie tolerance defaults to 1e-6 (1 + |max|).
RecoveredWeights recover_weights(const Problem& problem, const Barrier& barrier,
                                 const AuxiliaryFunction& phi, const Vector& x, double tau,
                                 std::optional<double> tie_tolerance = std::nullopt);

/// True iff phi_{k+1} <= phi_k + slack for all consecutive rows.
bool check_phi_monotone_trace(const RunTrace& trace, double slack);

struct SweepStart {
  Vector x0;
  std::optional<Box> box;
};

/// Chooses the start point (and optional local box) of member `index`.
using SweepStartStrategy = std::function<SweepStart(std::size_t index, const AuxiliaryFunction&)>;

/// Same start for every member, no box.
SweepStartStrategy fixed_start(Vector x0);

struct SweepResult {
  std::size_t index = 0;
  AuxiliaryFunction phi;
  RunStatus status = RunStatus::InnerFailure;
  Vector x_final;
  Vector f_final;
  std::string message;
  RunTrace trace;
};

/// One (local when the strategy supplies a box) barrier run per family member.
/// Runs are independent and may execute on up to `workers` threads; results
/// keep family order. Members that fail report their status rather than
/// being dropped.
std::vector<SweepResult> pareto_sweep(const Problem& problem, const Barrier& barrier,
                                      const std::vector<AuxiliaryFunction>& family,
                                      const MbmConfig& config, const SweepStartStrategy& start,
                                      unsigned workers = 1);

}  // namespace mbm
