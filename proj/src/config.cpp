#include "mbm/config.hpp"

#include "mbm/errors.hpp"

#include <fstream>
#include <set>

namespace mbm {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.count(item.key())) throw ConfigFieldError(join(path, item.key()), "unknown field");
  }
}

const json& require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigFieldError(path.empty() ? "<root>" : path, "expected an object");
  return doc;
}

double read_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ConfigFieldError(path, "expected a number");
  return value.get<double>();
}

int read_int(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ConfigFieldError(path, "expected an integer");
  return value.get<int>();
}

std::string read_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw ConfigFieldError(path, "expected a string");
  return value.get<std::string>();
}

bool read_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw ConfigFieldError(path, "expected true or false");
  return value.get<bool>();
}

Vector read_vector(const json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) throw ConfigFieldError(path, "expected a nonempty array of numbers");
  Vector out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = read_number(value[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

std::vector<Vector> read_vector_list(const json& value, const std::string& path) {
  if (!value.is_array()) throw ConfigFieldError(path, "expected an array of arrays");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(read_vector(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json vector_list_to_json(const std::vector<Vector>& list) {
  json out = json::array();
  for (const auto& v : list) out.push_back(vector_to_json(v));
  return out;
}

template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigFieldError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigFieldError(path, e.what());
  }
}

bool same(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

bool same(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same(a[i], b[i])) return false;
  }
  return true;
}

bool same(const std::optional<Box>& a, const std::optional<Box>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (same(a->lower, b->lower) && same(a->upper, b->upper));
}

bool same(const std::optional<GridSpec>& a, const std::optional<GridSpec>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || (same(a->lower, b->lower) && same(a->upper, b->upper) && a->counts == b->counts);
}

bool same(const std::optional<SweepSpec>& a, const std::optional<SweepSpec>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->kind == b->kind && same(a->members, b->members) && a->beta == b->beta &&
         same(a->starts, b->starts) && a->box_halfwidth == b->box_halfwidth &&
         same(a->oracle_grid, b->oracle_grid) && a->oracle_tolerance == b->oracle_tolerance;
}

const char* phi_parameter_key(AuxiliaryKind kind) {
  switch (kind) {
    case AuxiliaryKind::ShiftedMax: return "omega";
    case AuxiliaryKind::WeightedSum: return "weights";
    default: return nullptr;
  }
}

GridSpec parse_grid(const json& doc, const std::string& path, double* tolerance) {
  require_object(doc, path);
  reject_unknown_keys(doc, path, {"lower", "upper", "counts", "tolerance"});
  GridSpec grid;
  if (!doc.contains("lower") || !doc.contains("upper") || !doc.contains("counts")) {
    throw ConfigFieldError(path, "grid needs lower, upper and counts");
  }
  grid.lower = read_vector(doc["lower"], join(path, "lower"));
  grid.upper = read_vector(doc["upper"], join(path, "upper"));
  const json& counts = doc["counts"];
  if (!counts.is_array()) throw ConfigFieldError(join(path, "counts"), "expected an array of integers");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    grid.counts.push_back(read_int(counts[i], join(path, "counts") + "[" + std::to_string(i) + "]"));
  }
  if (doc.contains("tolerance") && tolerance) {
    *tolerance = read_number(doc["tolerance"], join(path, "tolerance"));
    if (!(*tolerance >= 0.0)) throw ConfigFieldError(join(path, "tolerance"), "must be nonnegative");
  }
  with_path(path, [&] { build_grid(grid).validate(); });
  return grid;
}

SweepSpec parse_sweep(const json& doc, const std::string& path) {
  require_object(doc, path);
  reject_unknown_keys(doc, path,
                      {"kind", "members", "linspace", "beta", "starts", "box_halfwidth", "oracle"});
  SweepSpec sweep;
  if (doc.contains("kind")) {
    sweep.kind = with_path(join(path, "kind"),
                           [&] { return auxiliary_kind_from_string(read_string(doc["kind"], join(path, "kind"))); });
  }
  if (doc.contains("beta")) sweep.beta = read_number(doc["beta"], join(path, "beta"));

  if (doc.contains("members") == doc.contains("linspace")) {
    throw ConfigFieldError(path, "give exactly one of members or linspace");
  }
  if (doc.contains("members")) {
    sweep.members = read_vector_list(doc["members"], join(path, "members"));
  } else {
    const std::string lp = join(path, "linspace");
    const json& ls = require_object(doc["linspace"], lp);
    reject_unknown_keys(ls, lp, {"from", "to", "count"});
    if (!ls.contains("from") || !ls.contains("to") || !ls.contains("count")) {
      throw ConfigFieldError(lp, "linspace needs from, to and count");
    }
    const Vector from = read_vector(ls["from"], join(lp, "from"));
    const Vector to = read_vector(ls["to"], join(lp, "to"));
    const int count = read_int(ls["count"], join(lp, "count"));
    if (from.size() != to.size()) throw ConfigFieldError(join(lp, "to"), "size differs from linspace.from");
    if (count < 0) throw ConfigFieldError(join(lp, "count"), "must be nonnegative");
    for (int i = 0; i < count; ++i) {
      const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      sweep.members.push_back(i == count - 1 && count > 1 ? to : Vector(from + s * (to - from)));
    }
  }
  if (sweep.members.empty()) throw ConfigFieldError(join(path, "members"), "sweep family is empty");

  if (doc.contains("starts")) {
    const std::string sp = join(path, "starts");
    if (doc["starts"].is_object()) {
      // {"from": [...], "to": [...]} spreads the starts evenly over the family.
      const json& s = doc["starts"];
      reject_unknown_keys(s, sp, {"from", "to"});
      if (!s.contains("from") || !s.contains("to")) throw ConfigFieldError(sp, "needs from and to");
      const Vector from = read_vector(s["from"], join(sp, "from"));
      const Vector to = read_vector(s["to"], join(sp, "to"));
      if (from.size() != to.size()) throw ConfigFieldError(join(sp, "to"), "size differs from starts.from");
      const std::size_t count = sweep.members.size();
      for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        sweep.starts.push_back(i + 1 == count && count > 1 ? to : Vector(from + t * (to - from)));
      }
    } else {
      sweep.starts = read_vector_list(doc["starts"], sp);
    }
    if (sweep.starts.size() != sweep.members.size()) {
      throw ConfigFieldError(join(path, "starts"), "needs one start per family member");
    }
  }
  if (doc.contains("box_halfwidth")) {
    const double hw = read_number(doc["box_halfwidth"], join(path, "box_halfwidth"));
    if (!(hw > 0.0)) throw ConfigFieldError(join(path, "box_halfwidth"), "must be positive");
    sweep.box_halfwidth = hw;
  }
  if (doc.contains("oracle")) {
    sweep.oracle_grid = parse_grid(doc["oracle"], join(path, "oracle"), &sweep.oracle_tolerance);
  }
  return sweep;
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.problem.name == b.problem.name && a.problem.params == b.problem.params &&
         a.barrier.kind == b.barrier.kind && a.barrier.rho == b.barrier.rho &&
         a.barrier.grouping == b.barrier.grouping && a.phi.kind == b.phi.kind &&
         same(a.phi.parameters, b.phi.parameters) && a.phi.beta == b.phi.beta &&
         a.schedule == b.schedule && a.mode == b.mode && a.outer_iterations == b.outer_iterations &&
         a.outer_tolerance == b.outer_tolerance && a.tau_stop == b.tau_stop &&
         a.warm_start == b.warm_start && a.inner == b.inner && same(a.local_box, b.local_box) &&
         a.start.has_value() == b.start.has_value() && (!a.start || same(*a.start, *b.start)) &&
         a.recover_weights == b.recover_weights && same(a.sweep, b.sweep) &&
         a.output.trace == b.output.trace && a.output.front == b.output.front;
}

RunConfig parse_run_config(const json& doc) {
  require_object(doc, "");
  reject_unknown_keys(doc, "",
                      {"problem", "barrier", "phi", "schedule", "mode", "outer", "inner",
                       "local_box", "start", "recover_weights", "sweep", "output"});
  RunConfig cfg;

  if (!doc.contains("problem")) throw ConfigFieldError("problem", "missing");
  {
    const json& p = require_object(doc["problem"], "problem");
    reject_unknown_keys(p, "problem", {"name", "params"});
    if (!p.contains("name")) throw ConfigFieldError("problem.name", "missing");
    cfg.problem.name = read_string(p["name"], "problem.name");
    if (p.contains("params")) {
      const json& params = require_object(p["params"], "problem.params");
      for (const auto& item : params.items()) {
        cfg.problem.params[item.key()] = read_number(item.value(), "problem.params." + item.key());
      }
    }
  }
  const Problem problem = with_path("problem", [&] { return build_problem(cfg); });

  if (doc.contains("barrier")) {
    const json& b = require_object(doc["barrier"], "barrier");
    reject_unknown_keys(b, "barrier", {"kind", "rho", "grouping"});
    if (b.contains("kind")) {
      cfg.barrier.kind = with_path("barrier.kind", [&] {
        return barrier_kind_from_string(read_string(b["kind"], "barrier.kind"));
      });
    }
    if (b.contains("rho")) cfg.barrier.rho = read_number(b["rho"], "barrier.rho");
    if (b.contains("grouping")) {
      const json& g = b["grouping"];
      if (!g.is_array()) throw ConfigFieldError("barrier.grouping", "expected an array of index arrays");
      for (std::size_t j = 0; j < g.size(); ++j) {
        const std::string gp = "barrier.grouping[" + std::to_string(j) + "]";
        if (!g[j].is_array()) throw ConfigFieldError(gp, "expected an array of constraint indices");
        std::vector<int> group;
        for (std::size_t i = 0; i < g[j].size(); ++i) {
          group.push_back(read_int(g[j][i], gp + "[" + std::to_string(i) + "]"));
        }
        cfg.barrier.grouping.push_back(std::move(group));
      }
    }
  }
  with_path("barrier", [&] { build_barrier(cfg, problem); });

  if (doc.contains("phi")) {
    const json& p = require_object(doc["phi"], "phi");
    reject_unknown_keys(p, "phi", {"kind", "omega", "weights", "beta"});
    if (p.contains("kind")) {
      cfg.phi.kind = with_path("phi.kind", [&] {
        return auxiliary_kind_from_string(read_string(p["kind"], "phi.kind"));
      });
    }
    const char* key = phi_parameter_key(cfg.phi.kind);
    for (const char* other : {"omega", "weights"}) {
      if (p.contains(other) && (!key || std::string(key) != other)) {
        throw ConfigFieldError(std::string("phi.") + other,
                               "not used by " + std::string(to_string(cfg.phi.kind)));
      }
    }
    if (key) {
      if (!p.contains(key)) throw ConfigFieldError(std::string("phi.") + key, "missing");
      cfg.phi.parameters = read_vector(p[key], std::string("phi.") + key);
    }
    if (p.contains("beta")) cfg.phi.beta = read_number(p["beta"], "phi.beta");
  }
  const AuxiliaryFunction phi = with_path("phi", [&] { return build_phi(cfg.phi, problem.m()); });

  if (doc.contains("schedule")) {
    const json& s = require_object(doc["schedule"], "schedule");
    reject_unknown_keys(s, "schedule", {"rule", "tau0", "sigma"});
    const std::string rule = s.contains("rule") ? read_string(s["rule"], "schedule.rule") : "geometric";
    const double tau0 = s.contains("tau0") ? read_number(s["tau0"], "schedule.tau0") : 1.0;
    const double sigma = s.contains("sigma") ? read_number(s["sigma"], "schedule.sigma") : 0.5;
    if (!(tau0 > 0.0)) throw ConfigFieldError("schedule.tau0", "must be positive");
    if (rule == "geometric") {
      if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigFieldError("schedule.sigma", "must lie in (0, 1)");
      cfg.schedule = PenaltySchedule::geometric(tau0, sigma);
    } else if (rule == "harmonic") {
      if (s.contains("sigma")) throw ConfigFieldError("schedule.sigma", "not used by the harmonic rule");
      cfg.schedule = PenaltySchedule::harmonic(tau0);
    } else {
      throw ConfigFieldError("schedule.rule", "expected geometric or harmonic");
    }
  }

  if (doc.contains("mode")) {
    cfg.mode = with_path("mode", [&] { return mode_from_string(read_string(doc["mode"], "mode")); });
  }
  if (cfg.mode == Mode::Strong && phi.monotonicity() != Monotonicity::SIncreasing) {
    throw ConfigFieldError("mode", "strong mode requires an s-increasing phi");
  }

  if (doc.contains("outer")) {
    const json& o = require_object(doc["outer"], "outer");
    reject_unknown_keys(o, "outer", {"iterations", "tolerance", "tau_stop", "warm_start"});
    if (o.contains("iterations")) cfg.outer_iterations = read_int(o["iterations"], "outer.iterations");
    if (o.contains("tolerance")) cfg.outer_tolerance = read_number(o["tolerance"], "outer.tolerance");
    if (o.contains("tau_stop")) cfg.tau_stop = read_number(o["tau_stop"], "outer.tau_stop");
    if (o.contains("warm_start")) cfg.warm_start = read_bool(o["warm_start"], "outer.warm_start");
    if (cfg.outer_iterations < 1) throw ConfigFieldError("outer.iterations", "must be at least 1");
    if (!(cfg.outer_tolerance > 0.0)) throw ConfigFieldError("outer.tolerance", "must be positive");
    if (!(cfg.tau_stop > 0.0)) throw ConfigFieldError("outer.tau_stop", "must be positive");
  }

  if (doc.contains("inner")) {
    const json& in = require_object(doc["inner"], "inner");
    reject_unknown_keys(in, "inner",
                        {"method", "max_iterations", "step_tolerance", "value_tolerance", "shrink",
                         "safeguard", "armijo"});
    if (in.contains("method")) {
      cfg.inner.method = with_path("inner.method", [&] {
        return inner_method_from_string(read_string(in["method"], "inner.method"));
      });
    }
    if (in.contains("max_iterations")) cfg.inner.max_iterations = read_int(in["max_iterations"], "inner.max_iterations");
    if (in.contains("step_tolerance")) cfg.inner.step_tolerance = read_number(in["step_tolerance"], "inner.step_tolerance");
    if (in.contains("value_tolerance")) cfg.inner.value_tolerance = read_number(in["value_tolerance"], "inner.value_tolerance");
    if (in.contains("shrink")) cfg.inner.shrink = read_number(in["shrink"], "inner.shrink");
    if (in.contains("safeguard")) cfg.inner.safeguard = read_number(in["safeguard"], "inner.safeguard");
    if (in.contains("armijo")) cfg.inner.armijo = read_number(in["armijo"], "inner.armijo");
    // validate() messages already carry the inner.<field> prefix.
    try {
      cfg.inner.validate();
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      const auto colon = msg.find(' ');
      throw ConfigFieldError(msg.substr(0, colon), msg.substr(colon + 1));
    }
  }

  if (doc.contains("local_box")) {
    const json& b = require_object(doc["local_box"], "local_box");
    reject_unknown_keys(b, "local_box", {"lower", "upper"});
    if (!b.contains("lower") || !b.contains("upper")) throw ConfigFieldError("local_box", "needs lower and upper");
    Box box{read_vector(b["lower"], "local_box.lower"), read_vector(b["upper"], "local_box.upper")};
    with_path("local_box", [&] { box.validate(); });
    if (box.lower.size() != problem.n()) throw ConfigFieldError("local_box", "dimension differs from the problem");
    cfg.local_box = std::move(box);
  }

  if (doc.contains("start")) {
    cfg.start = read_vector(doc["start"], "start");
    if (cfg.start->size() != problem.n()) throw ConfigFieldError("start", "dimension differs from the problem");
    if (!is_strictly_feasible(problem, *cfg.start)) throw ConfigFieldError("start", "not strictly feasible");
  }
  if (cfg.local_box && !cfg.local_box->contains_interior(resolve_start(cfg, problem))) {
    throw ConfigFieldError("start", "must lie in the interior of local_box");
  }

  if (doc.contains("recover_weights")) cfg.recover_weights = read_bool(doc["recover_weights"], "recover_weights");

  if (doc.contains("sweep")) {
    cfg.sweep = parse_sweep(doc["sweep"], "sweep");
    with_path("sweep", [&] { build_family(*cfg.sweep, problem.m()); });
    for (std::size_t i = 0; i < cfg.sweep->starts.size(); ++i) {
      const Vector& s = cfg.sweep->starts[i];
      if (s.size() != problem.n() || !is_strictly_feasible(problem, s)) {
        throw ConfigFieldError("sweep.starts[" + std::to_string(i) + "]", "not a strictly feasible point");
      }
    }
    if (cfg.sweep->oracle_grid && cfg.sweep->oracle_grid->lower.size() != problem.n()) {
      throw ConfigFieldError("sweep.oracle", "dimension differs from the problem");
    }
  }

  if (doc.contains("output")) {
    const json& o = require_object(doc["output"], "output");
    reject_unknown_keys(o, "output", {"trace", "front"});
    if (o.contains("trace")) cfg.output.trace = read_string(o["trace"], "output.trace");
    if (o.contains("front")) cfg.output.front = read_string(o["front"], "output.front");
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json doc;
  doc["problem"]["name"] = cfg.problem.name;
  doc["problem"]["params"] = json::object();
  for (const auto& [k, v] : cfg.problem.params) doc["problem"]["params"][k] = v;

  doc["barrier"]["kind"] = std::string(to_string(cfg.barrier.kind));
  doc["barrier"]["rho"] = cfg.barrier.rho;
  if (!cfg.barrier.grouping.empty()) doc["barrier"]["grouping"] = cfg.barrier.grouping;

  doc["phi"]["kind"] = std::string(to_string(cfg.phi.kind));
  if (const char* key = phi_parameter_key(cfg.phi.kind)) doc["phi"][key] = vector_to_json(cfg.phi.parameters);
  doc["phi"]["beta"] = cfg.phi.beta;

  doc["schedule"]["rule"] = std::string(to_string(cfg.schedule.rule()));
  doc["schedule"]["tau0"] = cfg.schedule.tau0();
  if (cfg.schedule.rule() == PenaltySchedule::Rule::Geometric) doc["schedule"]["sigma"] = cfg.schedule.sigma();

  doc["mode"] = std::string(to_string(cfg.mode));
  doc["outer"] = {{"iterations", cfg.outer_iterations},
                  {"tolerance", cfg.outer_tolerance},
                  {"tau_stop", cfg.tau_stop},
                  {"warm_start", cfg.warm_start}};
  doc["inner"] = {{"method", std::string(to_string(cfg.inner.method))},
                  {"max_iterations", cfg.inner.max_iterations},
                  {"step_tolerance", cfg.inner.step_tolerance},
                  {"value_tolerance", cfg.inner.value_tolerance},
                  {"shrink", cfg.inner.shrink},
                  {"safeguard", cfg.inner.safeguard},
                  {"armijo", cfg.inner.armijo}};
  if (cfg.local_box) {
    doc["local_box"] = {{"lower", vector_to_json(cfg.local_box->lower)},
                        {"upper", vector_to_json(cfg.local_box->upper)}};
  }
  if (cfg.start) doc["start"] = vector_to_json(*cfg.start);
  doc["recover_weights"] = cfg.recover_weights;

  if (cfg.sweep) {
    json s;
    s["kind"] = std::string(to_string(cfg.sweep->kind));
    s["members"] = vector_list_to_json(cfg.sweep->members);
    s["beta"] = cfg.sweep->beta;
    if (!cfg.sweep->starts.empty()) s["starts"] = vector_list_to_json(cfg.sweep->starts);
    if (cfg.sweep->box_halfwidth) s["box_halfwidth"] = *cfg.sweep->box_halfwidth;
    if (cfg.sweep->oracle_grid) {
      s["oracle"] = {{"lower", vector_to_json(cfg.sweep->oracle_grid->lower)},
                     {"upper", vector_to_json(cfg.sweep->oracle_grid->upper)},
                     {"counts", cfg.sweep->oracle_grid->counts},
                     {"tolerance", cfg.sweep->oracle_tolerance}};
    }
    doc["sweep"] = std::move(s);
  }
  doc["output"] = {{"trace", cfg.output.trace}, {"front", cfg.output.front}};
  return doc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFieldError("<file>", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigFieldError("<file>", std::string("malformed JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

Problem build_problem(const RunConfig& config) {
  return registry_get(config.problem.name, config.problem.params).problem;
}

Barrier build_barrier(const RunConfig& config, const Problem& problem) {
  switch (config.barrier.kind) {
    case BarrierKind::InverseAssigned: return make_inverse_assigned(problem);
    case BarrierKind::InverseSummedReplicated: return make_inverse_summed_replicated(problem);
    case BarrierKind::InverseGrouped: return make_inverse_grouped(problem, config.barrier.grouping);
    case BarrierKind::LogReplicatedShifted: return make_log_replicated_shifted(problem, config.barrier.rho);
  }
  throw ConfigError("unknown barrier kind");
}

AuxiliaryFunction build_phi(const PhiSpec& spec, int m) {
  const auto check_size = [&] {
    if (spec.parameters.size() != m) {
      throw ConfigError("parameter vector needs " + std::to_string(m) + " entries");
    }
  };
  switch (spec.kind) {
    case AuxiliaryKind::Max: return AuxiliaryFunction::max(m);
    case AuxiliaryKind::ShiftedMax: check_size(); return AuxiliaryFunction::shifted_max(spec.parameters);
    case AuxiliaryKind::WeightedSum: check_size(); return AuxiliaryFunction::weighted_sum(spec.parameters);
    case AuxiliaryKind::SumArctan: return AuxiliaryFunction::sum_arctan(m);
    case AuxiliaryKind::LogSumExp: return AuxiliaryFunction::log_sum_exp(m, spec.beta);
  }
  throw ConfigError("unknown auxiliary kind");
}

MbmConfig build_mbm_config(const RunConfig& config) {
  MbmConfig out;
  out.mode = config.mode;
  out.schedule = config.schedule;
  out.outer_iterations = config.outer_iterations;
  out.outer_tolerance = config.outer_tolerance;
  out.tau_stop = config.tau_stop;
  out.local_box = config.local_box;
  out.inner = config.inner;
  out.warm_start = config.warm_start;
  out.recover_weights = config.recover_weights;
  return out;
}

Vector resolve_start(const RunConfig& config, const Problem& problem) {
  if (config.start) return *config.start;
  if (problem.strictly_feasible_start()) return *problem.strictly_feasible_start();
  throw ConfigFieldError("start", "problem has no built-in start point; supply one");
}

std::vector<AuxiliaryFunction> build_family(const SweepSpec& sweep, int m) {
  std::vector<AuxiliaryFunction> family;
  for (const Vector& params : sweep.members) {
    family.push_back(build_phi(PhiSpec{sweep.kind, params, sweep.beta}, m));
  }
  return family;
}

Grid build_grid(const GridSpec& spec) { return Grid{spec.lower, spec.upper, spec.counts}; }

}  // namespace mbm
