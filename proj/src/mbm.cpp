#include "mbm/mbm.hpp"

#include "mbm/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace mbm {

PenaltySchedule::PenaltySchedule(Rule rule, double tau0, double sigma)
    : rule_(rule), tau0_(tau0), sigma_(sigma) {
  if (!(tau0_ > 0.0) || !std::isfinite(tau0_)) {
    throw ConfigError("schedule.tau0 must be positive and finite");
  }
  if (rule_ == Rule::Geometric && !(sigma_ > 0.0 && sigma_ < 1.0)) {
    throw ConfigError("schedule.sigma must lie in (0, 1)");
  }
}

PenaltySchedule PenaltySchedule::geometric(double tau0, double sigma) {
  return PenaltySchedule(Rule::Geometric, tau0, sigma);
}

PenaltySchedule PenaltySchedule::harmonic(double tau0) {
  return PenaltySchedule(Rule::Harmonic, tau0, 0.0);
}

double PenaltySchedule::value(int k) const {
  if (k < 0) throw InputError("schedule index must be nonnegative");
  if (rule_ == Rule::Geometric) return tau0_ * std::pow(sigma_, k);
  return tau0_ / (static_cast<double>(k) + 1.0);
}

std::string_view to_string(PenaltySchedule::Rule rule) {
  return rule == PenaltySchedule::Rule::Geometric ? "geometric" : "harmonic";
}

std::string_view to_string(Mode mode) { return mode == Mode::Weak ? "weak" : "strong"; }

Mode mode_from_string(std::string_view name) {
  if (name == "weak") return Mode::Weak;
  if (name == "strong") return Mode::Strong;
  throw InputError("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::OuterBudgetExhausted: return "outer_budget_exhausted";
    case RunStatus::InnerFailure: return "inner_failure";
  }
  return "unknown";
}

void MbmConfig::validate() const {
  if (outer_iterations < 1) throw ConfigError("outer.iterations must be at least 1");
  if (!(outer_tolerance > 0.0)) throw ConfigError("outer.tolerance must be positive");
  if (!(tau_stop > 0.0)) throw ConfigError("outer.tau_stop must be positive");
  if (recovery_tie_tolerance && !(*recovery_tie_tolerance >= 0.0)) {
    throw ConfigError("recovery tie tolerance must be nonnegative");
  }
  if (local_box) local_box->validate();
  inner.validate();
}

namespace {

void check_compatible(const Problem& problem, const Barrier& barrier,
                      const AuxiliaryFunction& phi, const MbmConfig& config) {
  const Problem& bp = barrier.problem();
  if (bp.n() != problem.n() || bp.m() != problem.m() || bp.p() != problem.p()) {
    throw ConfigError("barrier was built for a problem of different shape");
  }
  if (phi.dimension() != problem.m()) {
    throw ConfigError("auxiliary function dimension does not match the number of objectives");
  }
  if (config.mode == Mode::Strong && phi.monotonicity() != Monotonicity::SIncreasing) {
    throw ConfigError("strong mode requires an s-increasing auxiliary function, got " +
                      phi.describe());
  }
}

/// min |G a|^2 over the face of the simplex spanned by `subset` (bitmask).
std::optional<Vector> face_minimizer(const Matrix& g, unsigned subset) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    if (subset & (1u << j)) cols.push_back(j);
  }
  const auto s = static_cast<Eigen::Index>(cols.size());
  Matrix gs(g.rows(), s);
  for (Eigen::Index c = 0; c < s; ++c) gs.col(c) = g.col(cols[static_cast<std::size_t>(c)]);

  Matrix kkt = Matrix::Zero(s + 1, s + 1);
  kkt.topLeftCorner(s, s) = gs.transpose() * gs;
  kkt.block(0, s, s, 1).setOnes();
  kkt.block(s, 0, 1, s).setOnes();
  Vector rhs = Vector::Zero(s + 1);
  rhs[s] = 1.0;
  const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);

  Vector alpha = Vector::Zero(g.cols());
  for (Eigen::Index c = 0; c < s; ++c) {
    if (sol[c] < -1e-12) return std::nullopt;
    alpha[cols[static_cast<std::size_t>(c)]] = std::max(0.0, sol[c]);
  }
  const double total = alpha.sum();
  if (!(total > 0.0)) return std::nullopt;
  return alpha / total;
}

/// Euclidean projection onto the unit simplex.
Vector project_to_simplex(const Vector& v) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

Vector simplex_least_squares(const Matrix& g) {
  const Eigen::Index k = g.cols();
  if (k <= 12) {
    // Every face of a small simplex, keeping the best feasible stationary point.
    Vector best;
    double best_residual = std::numeric_limits<double>::infinity();
    for (unsigned subset = 1; subset < (1u << k); ++subset) {
      const auto alpha = face_minimizer(g, subset);
      if (!alpha) continue;
      const double residual = (g * *alpha).norm();
      if (residual < best_residual - 1e-15) {
        best_residual = residual;
        best = *alpha;
      }
    }
    if (best.size() > 0) return best;
  }
  // Projected gradient for larger active sets.
  const Matrix q = g.transpose() * g;
  const double lipschitz = std::max(q.norm(), 1e-300);
  Vector alpha = Vector::Constant(k, 1.0 / static_cast<double>(k));
  for (int it = 0; it < 20000; ++it) {
    const Vector next = project_to_simplex(alpha - (q * alpha) / lipschitz);
    if ((next - alpha).cwiseAbs().maxCoeff() < 1e-15) {
      alpha = next;
      break;
    }
    alpha = next;
  }
  return alpha;
}

}  // namespace

RecoveredWeights recover_weights(const Problem& problem, const Barrier& barrier,
                                 const AuxiliaryFunction& phi, const Vector& x, double tau,
                                 std::optional<double> tie_tolerance) {
  if (!phi.is_max_type()) {
    throw CapabilityError("weight recovery is defined for max-type auxiliary functions");
  }
  if (!is_strictly_feasible(problem, x)) {
    throw PreconditionError("weight recovery requires a strictly feasible point");
  }
  Vector u = problem.objective(x) + tau * barrier.evaluate(x);
  if (phi.kind() == AuxiliaryKind::ShiftedMax) u += phi.parameters();
  const double top = u.maxCoeff();
  const double tol = tie_tolerance.value_or(1e-6 * (1.0 + std::abs(top)));

  RecoveredWeights out;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    if (top - u[j] <= tol) out.active_set.push_back(static_cast<int>(j));
  }
  const Matrix jac = problem.objective_jacobian(x) + tau * barrier.jacobian(x);
  Matrix g(problem.n(), static_cast<Eigen::Index>(out.active_set.size()));
  for (std::size_t c = 0; c < out.active_set.size(); ++c) {
    g.col(static_cast<Eigen::Index>(c)) = jac.row(out.active_set[c]).transpose();
  }
  const Vector local = simplex_least_squares(g);
  out.alpha = Vector::Zero(problem.m());
  for (std::size_t c = 0; c < out.active_set.size(); ++c) {
    out.alpha[out.active_set[c]] = local[static_cast<Eigen::Index>(c)];
  }
  out.residual = (jac.transpose() * out.alpha).norm();
  return out;
}

RunTrace mbm_run(const Problem& problem, const Barrier& barrier, const AuxiliaryFunction& phi,
                 const Vector& x0, const MbmConfig& config) {
  config.validate();
  check_compatible(problem, barrier, phi, config);
  if (x0.size() != problem.n()) throw InputError("start point has the wrong dimension");
  if (!is_strictly_feasible(problem, x0)) {
    throw PreconditionError("start point is not strictly feasible");
  }
  if (config.local_box) {
    if (config.local_box->lower.size() != problem.n()) {
      throw ConfigError("local box dimension does not match the decision dimension");
    }
    if (!config.local_box->contains_interior(x0)) {
      throw PreconditionError("start point is not in the interior of the local box");
    }
  }

  RunTrace trace;
  trace.x_final = x0;
  trace.accepted_points.push_back(x0);
  Vector previous = x0;
  const IterateHook record = [&trace](int iteration, const Vector& x, double) {
    if (iteration > 0) trace.accepted_points.push_back(x);
  };

  for (int k = 1; k <= config.outer_iterations; ++k) {
    const double tau = config.schedule.value(k - 1);
    const CompositeObjective objective(barrier, phi, tau, config.local_box);
    const Vector& start = config.warm_start ? previous : x0;

    InnerResult inner;
    try {
      inner = minimize(objective, start, config.inner, record);
    } catch (const Error& e) {
      trace.status = RunStatus::InnerFailure;
      trace.failure_reason = e.what();
      return trace;
    }

    TraceRow row;
    row.k = k;
    row.tau = tau;
    row.x = inner.x;
    row.f = problem.objective(inner.x);
    row.b = barrier.evaluate(inner.x);
    row.phi = inner.value;
    row.inner_iterations = inner.iterations;
    row.inner_status = inner.status;
    if (config.recover_weights && phi.is_max_type()) {
      try {
        row.weights = recover_weights(problem, barrier, phi, inner.x, tau,
                                      config.recovery_tie_tolerance);
      } catch (const Error&) {
        row.weights.reset();
      }
    }
    trace.rows.push_back(std::move(row));
    trace.x_final = inner.x;
    trace.phi_limit = inner.value;

    if (inner.status == InnerStatus::Unbounded) {
      trace.status = RunStatus::InnerFailure;
      trace.failure_reason = "unbounded: composite value fell below the divergence threshold";
      return trace;
    }
    const double move = (inner.x - previous).cwiseAbs().maxCoeff();
    previous = inner.x;
    if (k > 1 && move < config.outer_tolerance && tau < config.tau_stop) {
      trace.status = RunStatus::Converged;
      return trace;
    }
  }
  trace.status = RunStatus::OuterBudgetExhausted;
  return trace;
}

RunTrace local_mbm_run(const Problem& problem, const Barrier& barrier,
                       const AuxiliaryFunction& phi, const Vector& x0, const Box& box,
                       MbmConfig config) {
  box.validate();
  config.local_box = box;
  return mbm_run(problem, barrier, phi, x0, config);
}

bool check_phi_monotone_trace(const RunTrace& trace, double slack) {
  for (std::size_t k = 1; k < trace.rows.size(); ++k) {
    if (!(trace.rows[k].phi <= trace.rows[k - 1].phi + slack)) return false;
  }
  return true;
}

SweepStartStrategy fixed_start(Vector x0) {
  return [x0 = std::move(x0)](std::size_t, const AuxiliaryFunction&) {
    return SweepStart{x0, std::nullopt};
  };
}

std::vector<SweepResult> pareto_sweep(const Problem& problem, const Barrier& barrier,
                                      const std::vector<AuxiliaryFunction>& family,
                                      const MbmConfig& config, const SweepStartStrategy& start,
                                      unsigned workers) {
  if (family.empty()) throw InputError("sweep family is empty");
  std::vector<std::optional<SweepResult>> slots(family.size());

  auto run_member = [&](std::size_t i) {
    SweepResult result{i, family[i], RunStatus::InnerFailure, Vector(), Vector(), "", RunTrace{}};
    try {
      const SweepStart s = start(i, family[i]);
      MbmConfig member = config;
      if (s.box) member.local_box = s.box;
      result.trace = mbm_run(problem, barrier, family[i], s.x0, member);
      result.status = result.trace.status;
      result.message = result.trace.failure_reason;
      result.x_final = result.trace.x_final;
      result.f_final = problem.objective(result.x_final);
    } catch (const std::exception& e) {
      result.status = RunStatus::InnerFailure;
      result.message = e.what();
    }
    slots[i] = std::move(result);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(family.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < family.size(); ++i) run_member(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < family.size(); i = next++) run_member(i);
      });
    }
  }

  std::vector<SweepResult> results;
  results.reserve(slots.size());
  for (auto& slot : slots) results.push_back(std::move(*slot));
  return results;
}

}  // namespace mbm
