// Acceptance checks for the barrier method. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.

#include "mbm/auxiliary.hpp"
#include "mbm/barrier.hpp"
#include "mbm/inner_solver.hpp"
#include "mbm/mbm.hpp"
#include "mbm/oracles.hpp"
#include "mbm/problem.hpp"

#include "../test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mbm;
using namespace mbm::test;

namespace {

struct Run {
  std::string label;
  const Problem* problem;
  AuxiliaryFunction phi;
  RunTrace trace;
};

// Everything produced by criteria 1 to 3 plus the randomized disk runs.
struct Ledger {
  Problem ex51 = make_ex51(9.0);
  Problem ex52 = make_ex52();
  Problem disk = make_disk2d();
  std::vector<Run> runs;
  std::vector<WeightingResult> weighting;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body,
            double budget_seconds = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0 && seconds >= budget_seconds) {
    o.pass = false;
    o.detail += "; over the time budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%s) [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome iterate_law(Ledger& L) {
  MbmConfig config;
  config.schedule = PenaltySchedule::harmonic(1.0);
  config.outer_iterations = 100;
  config.outer_tolerance = 1e-3;
  config.tau_stop = 0.0101;
  config.inner.method = InnerMethod::NelderMead;
  const AuxiliaryFunction phi = AuxiliaryFunction::max(2);
  RunTrace trace = mbm_run(L.ex51, make_inverse_summed_replicated(L.ex51), phi, vec({2.0}), config);

  double worst = 0.0;
  for (int k : {1, 4, 25, 100}) {
    if (static_cast<int>(trace.rows.size()) < k) return {false, "trace stops at k=" + std::to_string(trace.rows.size())};
    worst = std::max(worst, std::abs(trace.rows[k - 1].x[0] - 1.0 / std::sqrt(double(k))));
  }
  const double last = trace.rows.size() >= 100 ? trace.rows[99].x[0] : NAN;
  L.runs.push_back({"ex51 max", &L.ex51, phi, std::move(trace)});
  return {worst <= 1e-4 && last < 0.11, "max error " + fmt(worst) + ", x^100 = " + fmt(last)};
}

Outcome weighting_failure(Ledger& L) {
  const double fraction = weighting_failure_fraction(L.ex51, 101, vec({1.0}), 5000, &L.weighting);
  int wrong = 0;
  for (const WeightingResult& r : L.weighting) {
    const double a1 = r.alpha[0];
    if (a1 >= 0.899 && a1 <= 0.901) continue;
    const WeightingOutcome want = a1 < 0.9 ? WeightingOutcome::Unbounded : WeightingOutcome::Minimizer;
    if (r.outcome != want) ++wrong;
  }
  return {wrong == 0 && std::abs(fraction - 0.90) <= 0.02 && L.weighting.size() == 101,
          "failure fraction " + fmt(fraction) + ", " + std::to_string(wrong) + " misreported"};
}

Outcome front_retrieval(Ledger& L) {
  std::vector<AuxiliaryFunction> family;
  for (int i = 0; i <= 20; ++i) family.push_back(AuxiliaryFunction::shifted_max(vec({-2.0 + 0.1 * i, 0.0})));
  MbmConfig config;
  config.schedule = PenaltySchedule::geometric(1.0, 0.5);
  config.outer_iterations = 40;
  const SweepStartStrategy around = [](std::size_t, const AuxiliaryFunction& phi) {
    const double target = -phi.parameters()[0] / 2.0;
    return SweepStart{vec({target + 0.1}), Box{vec({target - 0.2}), vec({target + 0.4})}};
  };
  const auto results = pareto_sweep(L.ex52, make_inverse_summed_replicated(L.ex52), family, config, around, 4);

  double worst = 0.0;
  std::vector<double> xs;
  for (const SweepResult& r : results) {
    if (r.x_final.size() != 1) return {false, "member " + std::to_string(r.index) + " failed: " + r.message};
    worst = std::max(worst, std::abs(r.x_final[0] + r.phi.parameters()[0] / 2.0));
    xs.push_back(r.x_final[0]);
    L.runs.push_back({"ex52 alpha " + fmt(r.phi.parameters()[0]), &L.ex52, r.phi, r.trace});
  }
  std::sort(xs.begin(), xs.end());
  double gap = std::max(xs.front() - 0.0, 1.0 - xs.back());
  for (std::size_t i = 1; i < xs.size(); ++i) gap = std::max(gap, xs[i] - xs[i - 1]);
  return {worst <= 1e-3 && gap <= 0.06 && xs.size() == 21,
          "max |x + alpha/2| " + fmt(worst) + ", max gap " + fmt(gap)};
}

AuxiliaryFunction random_s_increasing(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: {
      const double w = 0.1 + 0.8 * u(rng);
      return AuxiliaryFunction::weighted_sum(vec({w, 1.0 - w}));
    }
    case 1:
      return AuxiliaryFunction::sum_arctan(2);
    default:
      return AuxiliaryFunction::log_sum_exp(2, 1.0 + 9.0 * u(rng));
  }
}

Outcome phi_monotone(Ledger& L) {
  std::mt19937_64 rng(20261015);
  MbmConfig config;
  config.schedule = PenaltySchedule::geometric(1.0, 0.5);
  config.outer_iterations = 80;
  config.outer_tolerance = 1e-7;
  const Barrier barrier = make_inverse_summed_replicated(L.disk);
  for (int i = 0; i < 10; ++i) {
    const Vector x0 = random_interior(L.disk, rng, -0.9, 0.9);
    const AuxiliaryFunction phi = random_s_increasing(rng);
    L.runs.push_back({"disk2d " + phi.describe(), &L.disk, phi, mbm_run(L.disk, barrier, phi, x0, config)});
  }
  int bad = 0;
  std::string first;
  for (const Run& r : L.runs) {
    if (!check_phi_monotone_trace(r.trace, 1e-8)) {
      if (bad++ == 0) first = r.label;
    }
  }
  return {bad == 0, std::to_string(L.runs.size()) + " traces, " + std::to_string(bad) + " increasing" +
                        (bad ? " (first: " + first + ")" : "")};
}

Outcome nondominance(Ledger& L) {
  const GridImage line51 = evaluate_feasible(L.ex51, Grid::line(0.0, 10.0, 501));
  const GridImage line52 = evaluate_feasible(L.ex52, Grid::line(-2.0, 3.0, 501));
  const GridImage square = evaluate_feasible(L.disk, Grid::cube(2, -1.0, 1.0, 201));
  int checked = 0;
  int bad = 0;
  std::string first;
  for (const Run& r : L.runs) {
    if (r.trace.status != RunStatus::Converged) continue;
    const GridImage& image = r.problem == &L.ex51 ? line51 : r.problem == &L.ex52 ? line52 : square;
    const Classification c = classify_point(*r.problem, r.trace.x_final, image, 1e-3);
    const bool ok = r.phi.monotonicity() == Monotonicity::SIncreasing ? c == Classification::ApproxPareto
                                                                       : c != Classification::Dominated;
    ++checked;
    if (!ok && bad++ == 0) first = r.label + " is " + std::string(to_string(c));
  }
  return {bad == 0 && checked > 0,
          std::to_string(checked) + " converged runs classified, " + std::to_string(bad) + " violations" +
              (bad ? " (first: " + first + ")" : "")};
}

Outcome weight_recovery(Ledger& L) {
  MbmConfig config;
  config.schedule = PenaltySchedule::geometric(1.0, 0.5);
  config.outer_iterations = 40;
  config.recover_weights = true;
  const AuxiliaryFunction phi = AuxiliaryFunction::shifted_max(vec({-1.0, 0.0}));
  const RunTrace trace = local_mbm_run(L.ex52, make_inverse_summed_replicated(L.ex52), phi, vec({0.3}),
                                       Box{vec({0.2}), vec({0.8})}, config);
  if (trace.rows.empty() || !trace.rows.back().weights) return {false, "no weights recovered"};
  const TraceRow& last = trace.rows.back();
  const Vector& a = last.weights->alpha;
  const double err = (a - vec({0.5, 0.5})).cwiseAbs().maxCoeff();
  return {last.tau <= 1e-6 && err <= 0.02 && last.weights->residual <= 1e-4,
          "tau " + fmt(last.tau) + ", alpha (" + fmt(a[0]) + ", " + fmt(a[1]) + "), residual " +
              fmt(last.weights->residual)};
}

Outcome monotonicity_contracts() {
  struct Case {
    AuxiliaryFunction phi;
    SamplingBox box;
  };
  const std::vector<Case> catalog = {
      {AuxiliaryFunction::max(2), {}},
      {AuxiliaryFunction::max(3), {}},
      {AuxiliaryFunction::shifted_max(vec({-1.0, 0.0})), {}},
      {AuxiliaryFunction::shifted_max(vec({0.3, -2.0, 1.5})), {}},
      {AuxiliaryFunction::weighted_sum(vec({0.5, 0.5})), {}},
      {AuxiliaryFunction::weighted_sum(vec({0.2, 0.3, 0.5})), {}},
      {AuxiliaryFunction::weighted_sum(vec({1.0, 0.0})), {}},
      {AuxiliaryFunction::sum_arctan(2), {}},
      {AuxiliaryFunction::sum_arctan(3), {}},
      {AuxiliaryFunction::log_sum_exp(2, 1.0), {}},
      {AuxiliaryFunction::log_sum_exp(3, 1.0), {}},
      {AuxiliaryFunction::log_sum_exp(2, 100.0), {-0.1, 0.1}},
  };
  int failed = 0;
  std::uint64_t seed = 1;
  for (const Case& c : catalog) {
    if (!verify_monotonicity(c.phi, 10000, c.box, seed++).passed) ++failed;
  }
  const MonotonicityReport max_s =
      verify_monotonicity(AuxiliaryFunction::max(2), 10000, {}, 7, Monotonicity::SIncreasing);
  std::string pair = "none";
  if (max_s.counterexample) {
    std::ostringstream s;
    s << "u=(" << max_s.counterexample->u.transpose() << ") v=(" << max_s.counterexample->v.transpose() << ")";
    pair = s.str();
  }
  return {failed == 0 && !max_s.passed && max_s.counterexample.has_value(),
          std::to_string(catalog.size() - failed) + "/" + std::to_string(catalog.size()) +
              " contracts hold; max as s-increasing fails at " + pair};
}

Outcome feasibility(const Ledger& L) {
  std::size_t points = 0;
  std::size_t bad = 0;
  for (const Run& r : L.runs) {
    for (const Vector& x : r.trace.accepted_points) {
      ++points;
      if ((r.problem->constraints(x).array() >= 0.0).any()) ++bad;
    }
  }
  for (const WeightingResult& w : L.weighting) {
    ++points;
    if ((L.ex51.constraints(w.x).array() >= 0.0).any()) ++bad;
  }
  return {bad == 0 && points > 0,
          std::to_string(points) + " accepted points, " + std::to_string(bad) + " on or outside the boundary"};
}

// Interior point with every constraint at least `margin` from zero.
Vector deep_interior(const Problem& p, std::mt19937_64& rng, double lo, double hi, double margin) {
  for (;;) {
    const Vector x = random_interior(p, rng, lo, hi);
    if ((p.constraints(x).array() <= -margin).all()) return x;
  }
}

Outcome gradient_check(const Ledger& L) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> tau_dist(1e-3, 1.0);
  struct Target {
    const Problem* p;
    double lo;
    double hi;
  };
  const std::vector<Target> targets = {{&L.ex51, 0.0, 5.0}, {&L.ex52, -1.9, 3.0}, {&L.disk, -1.0, 1.0}};
  int checks = 0;
  int bad = 0;
  double worst = 0.0;
  for (const Target& t : targets) {
    const int m = t.p->m();
    const std::vector<AuxiliaryFunction> smooth = {
        AuxiliaryFunction::weighted_sum(Vector::Constant(m, 1.0 / m)),
        AuxiliaryFunction::sum_arctan(m),
        AuxiliaryFunction::log_sum_exp(m, 1.0),
        AuxiliaryFunction::log_sum_exp(m, 100.0),
    };
    const std::vector<Barrier> barriers = {make_inverse_assigned(*t.p), make_inverse_summed_replicated(*t.p),
                                           make_log_replicated_shifted(*t.p, -10.0)};
    for (const AuxiliaryFunction& phi : smooth) {
      for (const Barrier& b : barriers) {
        for (int i = 0; i < 20; ++i) {
          const Vector x = deep_interior(*t.p, rng, t.lo, t.hi, 0.05);
          const CompositeObjective obj(b, phi, tau_dist(rng));
          const Vector g = composite_gradient(obj, x);
          const Vector fd = central_gradient([&](const Vector& y) { return evaluate_composite(obj, y); }, x, 1e-6);
          for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double rel = std::abs(g[j] - fd[j]) / std::max(1.0, std::abs(fd[j]));
            worst = std::max(worst, rel);
            if (rel > 1e-5) ++bad;
          }
          ++checks;
        }
      }
    }
  }
  return {bad == 0, std::to_string(checks) + " points, worst relative error " + fmt(worst)};
}

}  // namespace

int main() {
  Ledger L;
  report(1, "ex51 iterate law", [&] { return iterate_law(L); }, 5.0);
  report(2, "weighting method failure on ex51", [&] { return weighting_failure(L); }, 10.0);
  report(3, "ex52 front retrieval by local sweep", [&] { return front_retrieval(L); }, 30.0);
  report(4, "phi nonincreasing along traces", [&] { return phi_monotone(L); });
  report(5, "final points are nondominated", [&] { return nondominance(L); });
  report(6, "weight recovery on ex52", [&] { return weight_recovery(L); });
  report(7, "monotonicity contracts", [] { return monotonicity_contracts(); });
  report(8, "iterates stay strictly feasible", [&] { return feasibility(L); });
  report(9, "composite gradient against finite differences", [&] { return gradient_check(L); });
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
