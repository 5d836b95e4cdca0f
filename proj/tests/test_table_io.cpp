#include "mbm/errors.hpp"
#include "mbm/table_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <fstream>

using namespace mbm;
using mbm::test::vec;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("mbm_table_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("numbers keep 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-1.0 / 3.0) == "-0.33333333333333331");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> exp(-300, 300);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::ldexp(mant(rng), exp(rng));
    CHECK(parse_number(format_number(v)) == v);
  }
  CHECK_THROWS_AS(parse_number(""), InputError);
  CHECK_THROWS_AS(parse_number("1.5x"), InputError);
  CHECK_THROWS_AS(parse_number("abc"), InputError);
  CHECK(parse_number("2.5\r") == 2.5);
}

TEST_CASE("csv text round trip") {
  Table t;
  t.header = {"a", "b,c", "d"};
  t.rows = {{"1", "x \"y\"", ""}, {"2", "", "z"}};
  const Table back = parse_csv(to_csv(t));
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("d") == 2);
  CHECK_THROWS_AS(back.column("e"), LookupError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), InputError);
  CHECK_THROWS_AS(parse_csv(""), InputError);
}

TEST_CASE("atomic writes replace whole files") {
  const auto dir = scratch("atomic");
  const auto path = dir / "nested" / "out.csv";
  Table t;
  t.header = {"x1"};
  t.rows = {{"1"}};
  write_csv_atomic(path, t);
  t.rows.push_back({"2"});
  write_csv_atomic(path, t);
  CHECK(read_csv(path).rows.size() == 2);
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(path.parent_path())) {
    (void)entry;
    ++files;
  }
  CHECK(files == 1);  // no temporary left behind
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace table re-evaluates to the recorded phi") {
  const Problem p = make_ex52();
  const Barrier b = make_inverse_summed_replicated(p);
  const auto phi = AuxiliaryFunction::shifted_max(vec({-1.0, 0.0}));
  MbmConfig config;
  config.outer_iterations = 40;
  config.recover_weights = true;
  const RunTrace trace = local_mbm_run(p, b, phi, vec({0.3}), Box{vec({0.2}), vec({0.8})}, config);

  const auto dir = scratch("trace");
  write_csv_atomic(dir / "trace.csv", trace_table(trace, p.n(), p.m()));
  const Table t = read_csv(dir / "trace.csv");
  CHECK(t.header.front() == "k");
  CHECK(t.rows.size() == trace.rows.size());
  CHECK(t.numbered_columns("x").size() == 1);
  CHECK(t.numbered_columns("f").size() == 2);
  CHECK(t.numbered_columns("alpha").size() == 2);

  const auto xs = read_points(t, p.n());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double tau = parse_number(t.rows[i][t.column("tau")]);
    const double recorded = parse_number(t.rows[i][t.column("phi")]);
    const double again = phi.evaluate(p.objective(xs[i]) + tau * b.evaluate(xs[i]));
    CHECK(std::abs(again - recorded) <= 1e-12 * std::max(1.0, std::abs(recorded)));
    CHECK(xs[i] == trace.rows[i].x);
    CHECK_FALSE(t.rows[i][t.column("alpha1")].empty());
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("weights columns stay blank when not recovered") {
  const Problem p = make_ex51();
  MbmConfig config;
  config.outer_iterations = 3;
  const RunTrace trace = mbm_run(p, make_inverse_summed_replicated(p), AuxiliaryFunction::sum_arctan(2), vec({1.0}), config);
  const Table t = trace_table(trace, 1, 2);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][t.column("alpha1")].empty());
  CHECK(t.rows[0][t.column("kkt_residual")].empty());
  CHECK(t.rows[0].size() == t.header.size());
}

TEST_CASE("front table has one row per member") {
  const Problem p = make_ex52();
  std::vector<AuxiliaryFunction> family;
  for (double a : {-1.0, -0.5, 0.0}) family.push_back(AuxiliaryFunction::shifted_max(vec({a, 0.0})));
  const auto results = pareto_sweep(p, make_inverse_summed_replicated(p), family, MbmConfig{}, fixed_start(vec({0.5})));
  const Table t = front_table(results, 1, 2, {Classification::ApproxPareto, std::nullopt});
  CHECK(t.header == std::vector<std::string>{"index", "p1", "p2", "x1", "f1", "f2", "status", "classification"});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][t.column("p1")] == "-1");
  CHECK(t.rows[0][t.column("classification")] == "ApproxPareto");
  CHECK(t.rows[1][t.column("classification")].empty());
  CHECK(t.rows[2][t.column("status")] == "converged");
}
