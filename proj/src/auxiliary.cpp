#include "mbm/auxiliary.hpp"

#include "mbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mbm {

std::string_view to_string(AuxiliaryKind kind) {
  switch (kind) {
    case AuxiliaryKind::Max: return "max";
    case AuxiliaryKind::ShiftedMax: return "shifted_max";
    case AuxiliaryKind::WeightedSum: return "weighted_sum";
    case AuxiliaryKind::SumArctan: return "sum_arctan";
    case AuxiliaryKind::LogSumExp: return "log_sum_exp";
  }
  return "unknown";
}

std::string_view to_string(Monotonicity tag) {
  return tag == Monotonicity::WIncreasing ? "w_increasing" : "s_increasing";
}

AuxiliaryKind auxiliary_kind_from_string(std::string_view name) {
  for (auto kind : {AuxiliaryKind::Max, AuxiliaryKind::ShiftedMax, AuxiliaryKind::WeightedSum,
                    AuxiliaryKind::SumArctan, AuxiliaryKind::LogSumExp}) {
    if (to_string(kind) == name) return kind;
  }
  throw InputError("unknown auxiliary function kind '" + std::string(name) + "'");
}

Monotonicity monotonicity_from_string(std::string_view name) {
  if (name == "w_increasing" || name == "weak") return Monotonicity::WIncreasing;
  if (name == "s_increasing" || name == "strong") return Monotonicity::SIncreasing;
  throw InputError("unknown monotonicity '" + std::string(name) + "'");
}

AuxiliaryFunction::AuxiliaryFunction(AuxiliaryKind kind, int dimension, Vector parameters,
                                     double beta)
    : kind_(kind), dimension_(dimension), parameters_(std::move(parameters)), beta_(beta) {
  if (dimension_ < 1) throw ConfigError("auxiliary function dimension must be positive");
  switch (kind_) {
    case AuxiliaryKind::Max:
      monotonicity_ = Monotonicity::WIncreasing;
      dominates_components_ = true;
      break;
    case AuxiliaryKind::ShiftedMax:
      monotonicity_ = Monotonicity::WIncreasing;
      dominates_components_ = (parameters_.array() >= 0.0).all();
      break;
    case AuxiliaryKind::WeightedSum:
      // Zero weights keep only the weak property.
      monotonicity_ = (parameters_.array() > 0.0).all() ? Monotonicity::SIncreasing
                                                        : Monotonicity::WIncreasing;
      dominates_components_ = false;
      break;
    case AuxiliaryKind::SumArctan:
      monotonicity_ = Monotonicity::SIncreasing;
      dominates_components_ = false;
      break;
    case AuxiliaryKind::LogSumExp:
      monotonicity_ = Monotonicity::SIncreasing;
      dominates_components_ = true;
      break;
  }
}

AuxiliaryFunction AuxiliaryFunction::max(int m) {
  return AuxiliaryFunction(AuxiliaryKind::Max, m, Vector(), 0.0);
}

AuxiliaryFunction AuxiliaryFunction::shifted_max(Vector omega) {
  if (!omega.allFinite()) throw ConfigError("shifted_max offsets must be finite");
  const int m = static_cast<int>(omega.size());
  return AuxiliaryFunction(AuxiliaryKind::ShiftedMax, m, std::move(omega), 0.0);
}

AuxiliaryFunction AuxiliaryFunction::weighted_sum(Vector weights) {
  if (!weights.allFinite() || !(weights.array() >= 0.0).all() || !(weights.maxCoeff() > 0.0)) {
    throw ConfigError("weighted_sum weights must be finite, nonnegative and not all zero");
  }
  const int m = static_cast<int>(weights.size());
  return AuxiliaryFunction(AuxiliaryKind::WeightedSum, m, std::move(weights), 0.0);
}

AuxiliaryFunction AuxiliaryFunction::sum_arctan(int m) {
  return AuxiliaryFunction(AuxiliaryKind::SumArctan, m, Vector(), 0.0);
}

AuxiliaryFunction AuxiliaryFunction::log_sum_exp(int m, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("log_sum_exp beta must be positive");
  return AuxiliaryFunction(AuxiliaryKind::LogSumExp, m, Vector(), beta);
}

bool AuxiliaryFunction::is_smooth() const {
  return kind_ != AuxiliaryKind::Max && kind_ != AuxiliaryKind::ShiftedMax;
}

AuxiliaryFunction AuxiliaryFunction::with_tie_tolerance(double tolerance) const {
  if (!(tolerance >= 0.0)) throw ConfigError("tie tolerance must be nonnegative");
  AuxiliaryFunction copy = *this;
  copy.tie_tolerance_ = tolerance;
  return copy;
}

void AuxiliaryFunction::check_dimension(const Vector& u) const {
  if (u.size() != dimension_) {
    std::ostringstream msg;
    msg << describe() << " expects a vector of size " << dimension_ << ", got " << u.size();
    throw InputError(msg.str());
  }
}

double AuxiliaryFunction::evaluate(const Vector& u) const {
  check_dimension(u);
  switch (kind_) {
    case AuxiliaryKind::Max: return u.maxCoeff();
    case AuxiliaryKind::ShiftedMax: return (u + parameters_).maxCoeff();
    case AuxiliaryKind::WeightedSum: {
      // Plain accumulation keeps the result monotone under IEEE rounding.
      double sum = 0.0;
      for (Eigen::Index i = 0; i < u.size(); ++i) sum += parameters_[i] * u[i];
      return sum;
    }
    case AuxiliaryKind::SumArctan: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < u.size(); ++i) sum += std::atan(u[i]);
      return sum;
    }
    case AuxiliaryKind::LogSumExp: {
      const double top = u.maxCoeff();
      if (!std::isfinite(top)) return top;
      // The unshifted form is monotone in floating point; shift only when
      // exp would overflow or underflow.
      if (std::abs(beta_ * top) < 700.0) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < u.size(); ++i) sum += std::exp(beta_ * u[i]);
        // Rounding in exp/log can land an ulp below the largest entry.
        return std::max(std::log(sum) / beta_, top);
      }
      double sum = 0.0;
      for (Eigen::Index i = 0; i < u.size(); ++i) sum += std::exp(beta_ * (u[i] - top));
      return top + std::log(sum) / beta_;
    }
  }
  return 0.0;
}

Vector AuxiliaryFunction::gradient(const Vector& u) const {
  check_dimension(u);
  switch (kind_) {
    case AuxiliaryKind::Max:
    case AuxiliaryKind::ShiftedMax: {
      const Vector shifted = kind_ == AuxiliaryKind::Max ? u : Vector(u + parameters_);
      Eigen::Index active = 0;
      const double top = shifted.maxCoeff(&active);
      for (Eigen::Index i = 0; i < shifted.size(); ++i) {
        if (i != active && top - shifted[i] <= tie_tolerance_) {
          throw TieError("max-type auxiliary function has tied maximizers; gradient undefined");
        }
      }
      Vector grad = Vector::Zero(u.size());
      grad[active] = 1.0;
      return grad;
    }
    case AuxiliaryKind::WeightedSum: return parameters_;
    case AuxiliaryKind::SumArctan: return (1.0 / (1.0 + u.array().square())).matrix();
    case AuxiliaryKind::LogSumExp: {
      const double top = u.maxCoeff();
      const Eigen::ArrayXd e = (beta_ * (u.array() - top)).exp();
      return (e / e.sum()).matrix();
    }
  }
  return Vector();
}

std::string AuxiliaryFunction::describe() const {
  std::ostringstream out;
  out << to_string(kind_);
  if (parameters_.size() > 0) {
    out << '(';
    for (Eigen::Index i = 0; i < parameters_.size(); ++i) out << (i ? ", " : "") << parameters_[i];
    out << ')';
  } else if (kind_ == AuxiliaryKind::LogSumExp) {
    out << "(beta=" << beta_ << ')';
  }
  return out.str();
}

MonotonicityReport verify_monotonicity(const AuxiliaryFunction& phi, int trials, SamplingBox box,
                                       std::uint64_t seed, std::optional<Monotonicity> claimed) {
  if (trials < 1) throw InputError("verify_monotonicity needs at least one trial");
  if (!(box.upper > box.lower)) throw InputError("sampling box must have positive width");

  MonotonicityReport report;
  report.tested = claimed.value_or(phi.monotonicity());
  const int m = phi.dimension();
  const double width = box.upper - box.lower;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(box.lower, box.upper);
  std::uniform_real_distribution<double> step(1e-4 * width, 0.1 * width);
  std::uniform_int_distribution<int> pick(0, m - 1);

  const bool strong = report.tested == Monotonicity::SIncreasing;
  for (int trial = 0; trial < trials; ++trial) {
    Vector u(m);
    for (int i = 0; i < m; ++i) u[i] = coord(rng);
    // Strong claims alternate between the two pair shapes.
    const char pair_case = (strong && trial % 2 == 1) ? 'b' : 'a';
    Vector delta = Vector::Zero(m);
    if (pair_case == 'a') {
      for (int i = 0; i < m; ++i) delta[i] = step(rng);
    } else {
      delta[pick(rng)] = step(rng);
    }
    const Vector v = u + delta;
    const double phi_u = phi.evaluate(u);
    const double phi_v = phi.evaluate(v);
    ++report.trials;
    if (!(phi_u < phi_v)) {
      report.passed = false;
      report.counterexample = MonotonicityCounterexample{u, v, phi_u, phi_v, pair_case};
      break;
    }
  }
  return report;
}

}  // namespace mbm
