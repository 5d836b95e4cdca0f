#include "mbm/barrier.hpp"

#include "mbm/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace mbm {

namespace {

constexpr double kSaturation = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_log(BarrierKind kind) { return kind == BarrierKind::LogReplicatedShifted; }

Grouping all_constraints(int m, int p) {
  std::vector<int> every(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) every[static_cast<std::size_t>(i)] = i;
  return Grouping(static_cast<std::size_t>(m), every);
}

}  // namespace

std::string_view to_string(BarrierKind kind) {
  switch (kind) {
    case BarrierKind::InverseAssigned: return "inverse_assigned";
    case BarrierKind::InverseSummedReplicated: return "inverse_summed_replicated";
    case BarrierKind::InverseGrouped: return "inverse_grouped";
    case BarrierKind::LogReplicatedShifted: return "log_replicated_shifted";
  }
  return "unknown";
}

BarrierKind barrier_kind_from_string(std::string_view name) {
  for (auto kind : {BarrierKind::InverseAssigned, BarrierKind::InverseSummedReplicated,
                    BarrierKind::InverseGrouped, BarrierKind::LogReplicatedShifted}) {
    if (to_string(kind) == name) return kind;
  }
  throw InputError("unknown barrier kind '" + std::string(name) + "'");
}

Barrier::Barrier(Problem problem, BarrierKind kind, Grouping groups, double shift)
    : problem_(std::move(problem)), kind_(kind), groups_(std::move(groups)), shift_(shift) {}

double Barrier::term(double g) const {
  const double slack = -g;
  if (slack <= kSaturation) return kInf;
  return is_log(kind_) ? -std::log(slack) : 1.0 / slack;
}

// d(term)/dg: inverse 1/(-g) -> 1/g^2, log -log(-g) -> 1/(-g).
double Barrier::term_derivative(double g) const {
  const double slack = -g;
  if (slack <= kSaturation) return kInf;
  return is_log(kind_) ? 1.0 / slack : 1.0 / (slack * slack);
}

Vector Barrier::evaluate(const Vector& x) const {
  const Vector g = problem_.constraints(x);
  if (!(g.array() < 0.0).all()) {
    throw DomainError("barrier evaluated outside the strict interior of the feasible set");
  }
  return evaluate_from_constraints(g);
}

Vector Barrier::evaluate_from_constraints(const Vector& g) const {
  Vector b(m());
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    double sum = 0.0;
    for (int i : groups_[j]) sum += term(g[i]);
    if (is_log(kind_)) sum -= shift_;
    b[static_cast<Eigen::Index>(j)] = sum;
  }
  return b;
}

Matrix Barrier::jacobian(const Vector& x) const {
  const Vector g = problem_.constraints(x);
  if (!(g.array() < 0.0).all()) {
    throw DomainError("barrier Jacobian evaluated outside the strict interior");
  }
  const Matrix jg = problem_.constraint_jacobian(x);
  Matrix jb = Matrix::Zero(m(), problem_.n());
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    for (int i : groups_[j]) {
      jb.row(static_cast<Eigen::Index>(j)) += term_derivative(g[i]) * jg.row(i);
    }
  }
  return jb;
}

Barrier make_inverse_assigned(const Problem& problem) {
  if (problem.p() > problem.m()) {
    throw ConfigError(
        "inverse_assigned needs p <= m; use inverse_grouped or inverse_summed_replicated");
  }
  Grouping groups(static_cast<std::size_t>(problem.m()));
  for (int i = 0; i < problem.p(); ++i) groups[static_cast<std::size_t>(i)] = {i};
  return Barrier(problem, BarrierKind::InverseAssigned, std::move(groups), 0.0);
}

Barrier make_inverse_summed_replicated(const Problem& problem) {
  return Barrier(problem, BarrierKind::InverseSummedReplicated,
                 all_constraints(problem.m(), problem.p()), 0.0);
}

Barrier make_inverse_grouped(const Problem& problem, const Grouping& grouping) {
  if (static_cast<int>(grouping.size()) != problem.m()) {
    throw ConfigError("grouping must have one (possibly empty) group per objective");
  }
  std::vector<int> seen(static_cast<std::size_t>(problem.p()), 0);
  for (const auto& group : grouping) {
    for (int i : group) {
      if (i < 0 || i >= problem.p()) {
        throw ConfigError("grouping refers to constraint " + std::to_string(i) +
                          " outside 0.." + std::to_string(problem.p() - 1));
      }
      if (seen[static_cast<std::size_t>(i)]++ > 0) {
        throw ConfigError("grouping lists constraint " + std::to_string(i) + " more than once");
      }
    }
  }
  for (int i = 0; i < problem.p(); ++i) {
    if (seen[static_cast<std::size_t>(i)] == 0) {
      throw ConfigError("grouping does not cover constraint " + std::to_string(i));
    }
  }
  return Barrier(problem, BarrierKind::InverseGrouped, grouping, 0.0);
}

Barrier make_log_replicated_shifted(const Problem& problem, double rho) {
  if (!std::isfinite(rho)) throw ConfigError("log barrier shift must be finite");
  return Barrier(problem, BarrierKind::LogReplicatedShifted,
                 all_constraints(problem.m(), problem.p()), rho);
}

double estimate_log_shift(const Problem& problem, std::span<const Vector> samples, double margin) {
  double lowest = kInf;
  for (const Vector& x : samples) {
    const Vector g = problem.constraints(x);
    if (!(g.array() < 0.0).all()) continue;
    double value = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) value -= std::log(-g[i]);
    lowest = std::min(lowest, value);
  }
  if (!std::isfinite(lowest)) {
    throw InputError("estimate_log_shift needs at least one strictly feasible sample");
  }
  return lowest - margin;
}

NonnegativityReport check_nonnegative(const Barrier& barrier, std::span<const Vector> samples) {
  NonnegativityReport report;
  report.min_component = kInf;
  for (const Vector& x : samples) {
    if (!is_strictly_feasible(barrier.problem(), x)) continue;
    const Vector b = barrier.evaluate(x);
    const double low = b.minCoeff();
    report.min_component = std::min(report.min_component, low);
    if (low < 0.0 && report.nonnegative) {
      report.nonnegative = false;
      report.witness = x;
    }
  }
  return report;
}

}  // namespace mbm
