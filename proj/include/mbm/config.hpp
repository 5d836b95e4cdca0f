#pragma once

#include "mbm/auxiliary.hpp"
#include "mbm/errors.hpp"
#include "mbm/barrier.hpp"
#include "mbm/inner_solver.hpp"
#include "mbm/mbm.hpp"
#include "mbm/oracles.hpp"
#include "mbm/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mbm {

/// Invalid configuration; path() names the offending field, e.g. "schedule.tau0".
class ConfigFieldError : public ConfigError {
 public:
  ConfigFieldError(std::string path, const std::string& message)
      : ConfigError(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ProblemSpec {
  std::string name = "ex51";
  ProblemParameters params;
};

struct BarrierSpec {
  BarrierKind kind = BarrierKind::InverseSummedReplicated;
  double rho = 0.0;
  Grouping grouping;
};

struct PhiSpec {
  AuxiliaryKind kind = AuxiliaryKind::Max;
  /// omega for shifted_max, weights for weighted_sum; empty otherwise.
  Vector parameters;
  double beta = 100.0;
};

struct GridSpec {
  Vector lower;
  Vector upper;
  std::vector<int> counts;
};

struct SweepSpec {
  AuxiliaryKind kind = AuxiliaryKind::ShiftedMax;
  /// One parameter vector (omega or weights) per family member.
  std::vector<Vector> members;
  double beta = 100.0;
  /// Optional per-member start points; defaults to the run start.
  std::vector<Vector> starts;
  /// When set, member i runs locally on the box start_i +- halfwidth.
  std::optional<double> box_halfwidth;
  /// When set, every final point is classified against this grid.
  std::optional<GridSpec> oracle_grid;
  double oracle_tolerance = 1e-3;
};

struct OutputSpec {
  std::string trace;
  std::string front;
};

/// Everything a `run` or `sweep` invocation needs, as read from a JSON file.
/// The format is documented in docs/config.md.
struct RunConfig {
  ProblemSpec problem;
  BarrierSpec barrier;
  PhiSpec phi;
  PenaltySchedule schedule = PenaltySchedule::geometric(1.0, 0.5);
  Mode mode = Mode::Weak;
  int outer_iterations = 60;
  double outer_tolerance = 1e-8;
  double tau_stop = 1e-8;
  bool warm_start = true;
  InnerSolverConfig inner;
  std::optional<Box> local_box;
  std::optional<Vector> start;
  bool recover_weights = false;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses and validates; throws ConfigFieldError for the first bad field.
RunConfig parse_run_config(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);

Problem build_problem(const RunConfig& config);
Barrier build_barrier(const RunConfig& config, const Problem& problem);
AuxiliaryFunction build_phi(const PhiSpec& spec, int m);
MbmConfig build_mbm_config(const RunConfig& config);
/// Configured start point, else the problem's own strictly feasible start.
Vector resolve_start(const RunConfig& config, const Problem& problem);
std::vector<AuxiliaryFunction> build_family(const SweepSpec& sweep, int m);
Grid build_grid(const GridSpec& spec);

}  // namespace mbm
