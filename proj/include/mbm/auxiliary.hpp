#pragma once

#include "mbm/problem.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mbm {

enum class AuxiliaryKind { Max, ShiftedMax, WeightedSum, SumArctan, LogSumExp };

/// WIncreasing: u < v => phi(u) < phi(v).
/// SIncreasing: u <= v with one strict coordinate => phi(u) < phi(v).
enum class Monotonicity { WIncreasing, SIncreasing };

std::string_view to_string(AuxiliaryKind kind);
std::string_view to_string(Monotonicity tag);
AuxiliaryKind auxiliary_kind_from_string(std::string_view name);
Monotonicity monotonicity_from_string(std::string_view name);

/// Continuous monotone scalarization phi : R^m -> R.
///
/// Instances come from the named factories below; each carries the
/// monotonicity class it is known to satisfy.
class AuxiliaryFunction {
 public:
  static AuxiliaryFunction max(int m);
  /// max_i (u_i + omega_i)
  static AuxiliaryFunction shifted_max(Vector omega);
  /// sum_i w_i u_i with w >= 0, w != 0. S-increasing when every w_i > 0,
  /// otherwise only w-increasing.
  static AuxiliaryFunction weighted_sum(Vector weights);
  static AuxiliaryFunction sum_arctan(int m);
  /// (1/beta) log sum_i exp(beta u_i), beta > 0.
  static AuxiliaryFunction log_sum_exp(int m, double beta = 100.0);

  AuxiliaryKind kind() const { return kind_; }
  Monotonicity monotonicity() const { return monotonicity_; }
  /// u_i <= phi(u) for every u and i.
  bool dominates_components() const { return dominates_components_; }
  /// True for kinds whose gradient is defined everywhere.
  bool is_smooth() const;
  bool is_max_type() const { return !is_smooth(); }
  int dimension() const { return dimension_; }

  /// Shift (ShiftedMax), weights (WeightedSum), or an empty vector.
  const Vector& parameters() const { return parameters_; }
  double beta() const { return beta_; }

  /// Tolerance under which two maximal entries count as tied (max kinds).
  double tie_tolerance() const { return tie_tolerance_; }
  AuxiliaryFunction with_tie_tolerance(double tolerance) const;

  /// phi(u). Throws InputError on dimension mismatch.
  double evaluate(const Vector& u) const;
  /// Gradient of phi at u. For max kinds, the unit vector of the unique
  /// active index; TieError if the top two entries are within tie_tolerance.
  Vector gradient(const Vector& u) const;

  /// Short description such as "shifted_max(-1, 0)".
  std::string describe() const;

 private:
  AuxiliaryFunction(AuxiliaryKind kind, int dimension, Vector parameters, double beta);
  void check_dimension(const Vector& u) const;

  AuxiliaryKind kind_;
  Monotonicity monotonicity_;
  bool dominates_components_;
  int dimension_;
  Vector parameters_;
  double beta_;
  double tie_tolerance_ = 1e-12;
};

struct SamplingBox {
  double lower = -10.0;
  double upper = 10.0;
};

struct MonotonicityCounterexample {
  Vector u;
  Vector v;
  double phi_u = 0.0;
  double phi_v = 0.0;
  /// 'a': v - u strictly positive; 'b': v - u has exactly one positive entry.
  char pair_case = 'a';
};

struct MonotonicityReport {
  bool passed = true;
  Monotonicity tested;
  int trials = 0;
  std::optional<MonotonicityCounterexample> counterexample;
};

/// Samples `trials` pairs v = u + delta with u uniform in the box and checks
/// the strict inequality required by `claimed` (defaults to the declared tag).
/// Case (a) pairs are always drawn; case (b) pairs only for SIncreasing.
/// Deterministic for a fixed seed.
MonotonicityReport verify_monotonicity(const AuxiliaryFunction& phi, int trials,
                                       SamplingBox box = {}, std::uint64_t seed = 1,
                                       std::optional<Monotonicity> claimed = std::nullopt);

}  // namespace mbm
