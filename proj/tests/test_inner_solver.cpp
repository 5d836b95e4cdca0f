#include "mbm/errors.hpp"
#include "mbm/inner_solver.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <atomic>
#include <limits>

using namespace mbm;
using mbm::test::vec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CompositeObjective ex51_composite(double tau) {
  return CompositeObjective(make_inverse_summed_replicated(make_ex51(9.0)), AuxiliaryFunction::max(2), tau);
}

struct Recorder {
  std::vector<Vector> points;
  std::vector<double> values;
  IterateHook hook() {
    return [this](int, const Vector& x, double v) {
      points.push_back(x);
      values.push_back(v);
    };
  }
};

}  // namespace

TEST_CASE("composite values") {
  const auto c = ex51_composite(0.25);
  CHECK(evaluate_composite(c, vec({0.5})) == doctest::Approx(1.0));
  CHECK(evaluate_composite(c, vec({-1.0})) == kInf);
  CHECK(evaluate_composite(c, vec({0.0})) == kInf);
  CHECK(c.penalized(vec({0.5})).isApprox(vec({1.0, -4.0})));

  const CompositeObjective log52(make_log_replicated_shifted(make_ex52(), 0.0),
                                 AuxiliaryFunction::shifted_max(vec({0.0, 0.0})), 1.0);
  CHECK(evaluate_composite(log52, vec({-1.0})) == doctest::Approx(4.0));

  const CompositeObjective boxed(make_inverse_summed_replicated(make_ex52()),
                                 AuxiliaryFunction::max(2), 1.0, Box{vec({0.2}), vec({0.8})});
  CHECK(std::isfinite(evaluate_composite(boxed, vec({0.5}))));
  CHECK(evaluate_composite(boxed, vec({0.8})) == kInf);
  CHECK(evaluate_composite(boxed, vec({0.1})) == kInf);
  CHECK_FALSE(boxed.admissible(vec({0.2})));
}

TEST_CASE("composite construction checks") {
  const Barrier b = make_inverse_summed_replicated(make_ex52());
  CHECK_THROWS_AS(CompositeObjective(b, AuxiliaryFunction::max(2), 0.0), ConfigError);
  CHECK_THROWS_AS(CompositeObjective(b, AuxiliaryFunction::max(2), -1.0), ConfigError);
  CHECK_THROWS_AS(CompositeObjective(b, AuxiliaryFunction::max(3), 1.0), ConfigError);
  CHECK_THROWS_AS(CompositeObjective(b, AuxiliaryFunction::max(2), 1.0, Box{vec({0.0, 0.0}), vec({1.0, 1.0})}),
                  ConfigError);
  CHECK_THROWS_AS(CompositeObjective(b, AuxiliaryFunction::max(2), 1.0, Box{vec({0.5}), vec({0.5})}), ConfigError);
  CHECK_THROWS_AS((Box{vec({0.0}), vec({kInf})}.validate()), ConfigError);
}

TEST_CASE("composite gradient") {
  // d/dt [t + 1/(4t)] vanishes at t = 1/2.
  CHECK(composite_gradient(ex51_composite(0.25), vec({0.5}))[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(composite_gradient(ex51_composite(0.25), vec({1.0}))[0] == doctest::Approx(0.75));

  const Problem disk = make_disk2d();
  const Barrier b = make_inverse_summed_replicated(disk);
  const CompositeObjective first(b, AuxiliaryFunction::weighted_sum(vec({1.0, 0.0})), 0.3);
  const Vector x = vec({0.2, -0.4});
  const Vector expected = disk.objective_jacobian(x).row(0).transpose() + 0.3 * b.jacobian(x).row(0).transpose();
  CHECK(composite_gradient(first, x).isApprox(expected, 1e-12));

  CHECK_THROWS_AS(composite_gradient(ex51_composite(0.25), vec({1e-13})), DomainError);
  CHECK_THROWS_AS(composite_gradient(ex51_composite(0.25), vec({-1.0})), DomainError);
  // max(t + tau/t, -9t + tau/t) never ties for t > 0; shift the second entry to force one.
  const CompositeObjective tied(make_inverse_summed_replicated(make_ex51(9.0)),
                                AuxiliaryFunction::shifted_max(vec({0.0, 5.0})), 0.25);
  CHECK_THROWS_AS(composite_gradient(tied, vec({0.5})), TieError);
}

TEST_CASE("composite gradient matches difference quotients on every registry problem") {
  std::mt19937_64 rng(99);
  for (const auto& name : registry_names()) {
    const Problem p = registry_get(name).problem;
    const std::vector<AuxiliaryFunction> smooth = {AuxiliaryFunction::weighted_sum(vec({0.3, 0.7})),
                                                   AuxiliaryFunction::sum_arctan(2),
                                                   AuxiliaryFunction::log_sum_exp(2, 5.0)};
    for (const auto& phi : smooth) {
      const CompositeObjective c(make_inverse_summed_replicated(p), phi, 0.1);
      int tested = 0;
      while (tested < 20) {
        const Vector x = test::random_interior(p, rng, -1.5, 3.0);
        if (p.constraints(x).maxCoeff() > -0.05) continue;
        ++tested;
        const Vector g = composite_gradient(c, x);
        const Vector fd = test::central_gradient([&](const Vector& y) { return evaluate_composite(c, y); }, x, 1e-7);
        for (int j = 0; j < p.n(); ++j) CHECK(test::close_rel(g[j], fd[j], 1e-5, 1e-3));
      }
    }
  }
}

TEST_CASE("ex51 subproblems reproduce t = k^(-1/2)") {
  for (int k : {1, 4, 25, 100}) {
    CAPTURE(k);
    const InnerSolverConfig config;
    const InnerResult r = minimize(ex51_composite(1.0 / k), vec({2.0}), config);
    CHECK(r.status == InnerStatus::Converged);
    CHECK(std::abs(r.x[0] - 1.0 / std::sqrt(k)) <= 10 * config.step_tolerance);
  }
  const InnerResult r4 = minimize(ex51_composite(0.25), vec({2.0}));
  CHECK(r4.x[0] == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(r4.value <= evaluate_composite(ex51_composite(0.25), vec({2.0})));
}

TEST_CASE("ex52 shifted max with a tiny penalty") {
  const CompositeObjective c(make_inverse_summed_replicated(make_ex52()),
                             AuxiliaryFunction::shifted_max(vec({-1.0, 0.0})), 1e-6);
  const InnerResult r = minimize(c, vec({-1.0}));
  CHECK(std::abs(r.x[0] - 0.5) <= 1e-3);
}

TEST_CASE("gradient method on smooth composites") {
  InnerSolverConfig config;
  config.method = InnerMethod::GradientBacktracking;
  // Weighted sum 0.5 (t^2 + 1) + 0.5 (t - 1)^2 is minimized at t = 1/2.
  const CompositeObjective c(make_inverse_summed_replicated(make_ex52()),
                             AuxiliaryFunction::weighted_sum(vec({0.5, 0.5})), 1e-8);
  const InnerResult r = minimize(c, vec({-1.5}), config);
  CHECK(r.status == InnerStatus::Converged);
  CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-5));

  // On the disk the weighted sum (1, 1) is minimized at -(1, 1)/sqrt(2), up to the barrier offset.
  const CompositeObjective d(make_inverse_summed_replicated(make_disk2d()),
                             AuxiliaryFunction::weighted_sum(vec({1.0, 1.0})), 1e-8);
  const InnerResult rd = minimize(d, vec({0.0, 0.0}), config);
  CHECK(rd.x.isApprox(Vector::Constant(2, -1.0 / std::sqrt(2.0)), 1e-3));
  CHECK(is_strictly_feasible(make_disk2d(), rd.x));
}

TEST_CASE("accepted points stay strictly feasible with nonincreasing values") {
  const Problem disk = make_disk2d();
  const std::vector<AuxiliaryFunction> phis = {AuxiliaryFunction::max(2), AuxiliaryFunction::log_sum_exp(2),
                                               AuxiliaryFunction::sum_arctan(2),
                                               AuxiliaryFunction::weighted_sum(vec({0.2, 0.8}))};
  for (const auto& phi : phis) {
    for (auto method : {InnerMethod::GradientBacktracking, InnerMethod::NelderMead}) {
      if (method == InnerMethod::GradientBacktracking && !phi.is_smooth()) continue;
      for (double tau : {1.0, 1e-3, 1e-7}) {
        InnerSolverConfig config;
        config.method = method;
        Recorder rec;
        const CompositeObjective c(make_inverse_summed_replicated(disk), phi, tau);
        const InnerResult r = minimize(c, vec({0.3, 0.1}), config, rec.hook());
        REQUIRE(rec.points.size() >= 2);
        for (std::size_t i = 0; i < rec.points.size(); ++i) {
          CHECK(is_strictly_feasible(disk, rec.points[i]));
          if (i > 0) CHECK(rec.values[i] <= rec.values[i - 1]);
        }
        CHECK(is_strictly_feasible(disk, r.x));
        CHECK(r.value == doctest::Approx(rec.values.back()));
      }
    }
  }
}

TEST_CASE("gradient steps never evaluate the objective outside the interior") {
  static std::atomic<int> outside{0};
  outside = 0;
  const Problem counted(
      1, 2, 1,
      [](const Vector& x) {
        if (x[0] <= 0.0) ++outside;
        return vec({x[0], -9.0 * x[0] + x[0] * x[0]});
      },
      [](const Vector& x) { return vec({-x[0]}); }, {}, {}, vec({1.0}));
  InnerSolverConfig config;
  config.method = InnerMethod::GradientBacktracking;
  for (double tau : {1.0, 1e-2, 1e-4, 1e-8}) {
    const CompositeObjective c(make_inverse_summed_replicated(counted),
                               AuxiliaryFunction::weighted_sum(vec({0.95, 0.05})), tau);
    minimize(c, vec({5.0}), config);
  }
  CHECK(outside == 0);
}

TEST_CASE("box restriction") {
  const Box box{vec({0.2}), vec({0.8})};
  const CompositeObjective c(make_inverse_summed_replicated(make_ex52()),
                             AuxiliaryFunction::shifted_max(vec({0.0, 0.0})), 1e-6, box);
  // The unrestricted minimizer t = 0 lies outside, so the solution hugs the lower face.
  Recorder rec;
  const InnerResult r = minimize(c, vec({0.5}), {}, rec.hook());
  CHECK(r.x[0] > 0.2);
  CHECK(r.x[0] < 0.2 + 1e-3);
  for (const auto& x : rec.points) CHECK(box.contains_interior(x));
  CHECK_THROWS_AS(minimize(c, vec({0.9})), PreconditionError);
}

TEST_CASE("preconditions and configuration") {
  CHECK_THROWS_AS(minimize(ex51_composite(1.0), vec({-1.0})), PreconditionError);
  CHECK_THROWS_AS(minimize(ex51_composite(1.0), vec({0.0})), PreconditionError);
  CHECK_THROWS_AS(minimize(ex51_composite(1.0), vec({1e-301})), PreconditionError);  // saturated barrier

  InnerSolverConfig bad;
  bad.shrink = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.safeguard = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.step_tolerance = 0.0;
  CHECK_THROWS_AS(minimize(ex51_composite(1.0), vec({1.0}), bad), ConfigError);

  CHECK(resolve_method(InnerMethod::Auto, AuxiliaryFunction::max(2)) == InnerMethod::NelderMead);
  CHECK(resolve_method(InnerMethod::Auto, AuxiliaryFunction::sum_arctan(2)) == InnerMethod::GradientBacktracking);
  CHECK(resolve_method(InnerMethod::NelderMead, AuxiliaryFunction::sum_arctan(2)) == InnerMethod::NelderMead);
  CHECK(inner_method_from_string(to_string(InnerMethod::GradientBacktracking)) == InnerMethod::GradientBacktracking);
  CHECK_THROWS_AS(inner_method_from_string("bfgs"), InputError);
}

TEST_CASE("unbounded composites and iteration limits") {
  InnerSolverConfig config;
  config.method = InnerMethod::GradientBacktracking;
  const CompositeObjective unbounded(make_inverse_summed_replicated(make_ex51(9.0)),
                                     AuxiliaryFunction::weighted_sum(vec({0.5, 0.5})), 1e-8);
  CHECK(minimize(unbounded, vec({1.0}), config).status == InnerStatus::Unbounded);

  config.max_iterations = 2;
  const InnerResult r = minimize(ex51_composite(1e-4), vec({50.0}), config);
  CHECK(r.status == InnerStatus::IterationLimit);
  CHECK(r.iterations == 2);
}

TEST_CASE("minimize is deterministic") {
  const CompositeObjective c(make_inverse_summed_replicated(make_disk2d()), AuxiliaryFunction::max(2), 1e-3);
  const InnerResult a = minimize(c, vec({0.1, 0.2}));
  const InnerResult b = minimize(c, vec({0.1, 0.2}));
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}
