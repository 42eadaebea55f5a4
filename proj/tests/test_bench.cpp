#include <cstdlib>

#include "doctest.h"
#include "fastbfgs/bench.hpp"
#include "fastbfgs/errors.hpp"

using namespace fastbfgs;

namespace {

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

BenchReport synthetic(RunStatus status, long nfg) {
  BenchReport r;
  r.max_nfg = 1000;
  r.version = "test";
  r.timestamp = "2000-01-01T00:00:00Z";
  r.rows.push_back({"ARWHEAD", 1024, Variant::fast_b, 8, nfg, status, 1e-6, 0.25});
  return r;
}

}  // namespace

TEST_CASE("problem requests") {
  const ProblemRequest a = parse_problem_request("ARWHEAD");
  CHECK(a.name == "ARWHEAD");
  CHECK(a.n == 0);
  const ProblemRequest b = parse_problem_request("EG2@500");
  CHECK(b.name == "EG2");
  CHECK(b.n == 500);
  CHECK_THROWS_AS(parse_problem_request("EG2@"), ConfigError);
  CHECK_THROWS_AS(parse_problem_request("EG2@-3"), ConfigError);
  CHECK_THROWS_AS(parse_problem_request("EG2@12x"), ConfigError);
  CHECK_THROWS_AS(parse_problem_request("@12"), ConfigError);
}

TEST_CASE("paper preset covers the core problems") {
  const BenchSpec spec = paper_preset();
  CHECK(spec.problems.size() == 14);
  CHECK(spec.variants.size() == 5);
  CHECK(spec.memories == std::vector<int>{8});
  CHECK_NOTHROW(validate(spec));
}

TEST_CASE("validation rejects bad grids before running") {
  BenchSpec spec;
  spec.variants = all_variants();
  spec.problems = {{"NOPE", 0}};
  CHECK_THROWS_AS(validate(spec), NameError);
  spec.problems = {{"SROSENBR", 999}};
  CHECK_THROWS_AS(validate(spec), DimensionError);
  spec.problems = {{"ARWHEAD", 10000}};
  CHECK_THROWS_AS(validate(spec), CapacityError);
  spec.variants = {Variant::lbfgs};
  CHECK_NOTHROW(validate(spec));
  spec.memories = {0};
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec.memories = {8};
  spec.tol = -1.0;
  CHECK_THROWS_AS(validate(spec), ConfigError);
  CHECK_THROWS_AS(run_suite(spec), ConfigError);
}

TEST_CASE("ARWHEAD with all variants gives five rows in order") {
  BenchSpec spec;
  spec.problems = {{"ARWHEAD", 1024}};
  spec.variants = all_variants();
  const BenchReport r = run_suite(spec);
  REQUIRE(r.rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(r.rows[i].variant == all_variants()[i]);
    CHECK(r.rows[i].n == 1024);
    CHECK(r.rows[i].m == 8);
  }
  CHECK(r.rows[4].status == RunStatus::converged);
  CHECK(r.rows[4].nfg <= 3 * 16);
}

TEST_CASE("BDEXP with fast-a at three memories") {
  BenchSpec spec;
  spec.problems = {{"BDEXP", 1024}};
  spec.variants = {Variant::fast_a};
  spec.memories = {2, 4, 8};
  const BenchReport r = run_suite(spec);
  REQUIRE(r.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.rows[i].m == spec.memories[i]);
    CHECK(r.rows[i].status == RunStatus::converged);
  }
}

TEST_CASE("an empty grid gives an empty report") {
  BenchSpec spec;
  spec.variants = all_variants();
  const BenchReport r = run_suite(spec);
  CHECK(r.rows.empty());
  CHECK(count_lines(emit_csv(r)) == 1);
}

TEST_CASE("row order does not depend on the number of workers") {
  BenchSpec spec;
  spec.problems = {{"TOINTGSS", 1000}, {"ARWHEAD", 1024}, {"BDEXP", 1024}};
  spec.variants = {Variant::lbfgs, Variant::fast_b};
  spec.memories = {2, 8};
  const BenchReport serial = run_suite(spec);
  spec.jobs = 4;
  const BenchReport parallel = run_suite(spec);
  REQUIRE(serial.rows.size() == 12);
  REQUIRE(parallel.rows.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(serial.rows[i].problem == parallel.rows[i].problem);
    CHECK(serial.rows[i].variant == parallel.rows[i].variant);
    CHECK(serial.rows[i].m == parallel.rows[i].m);
    CHECK(serial.rows[i].nfg == parallel.rows[i].nfg);
  }
  CHECK(serial.rows[0].problem == "TOINTGSS");
  CHECK(serial.rows[0].m == 2);
  CHECK(serial.rows[2].m == 8);
}

TEST_CASE("SUBSPACE_BENCH_THREADS overrides the requested worker count") {
  ::unsetenv("SUBSPACE_BENCH_THREADS");
  CHECK(resolve_jobs(3) == 3);
  CHECK(resolve_jobs(0) == 1);
  ::setenv("SUBSPACE_BENCH_THREADS", "5", 1);
  CHECK(resolve_jobs(3) == 5);
  ::setenv("SUBSPACE_BENCH_THREADS", "junk", 1);
  CHECK(resolve_jobs(3) == 3);
  ::unsetenv("SUBSPACE_BENCH_THREADS");
}

TEST_CASE("csv output") {
  const BenchReport r = synthetic(RunStatus::converged, 17);
  const std::string csv = emit_csv(r);
  CHECK(count_lines(csv) == 2);
  CHECK(csv.rfind("problem,n,variant,m,nfg,status,gnorm,seconds\r\n", 0) == 0);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].problem == "ARWHEAD");
  CHECK(rows[0].n == 1024);
  CHECK(rows[0].variant == Variant::fast_b);
  CHECK(rows[0].m == 8);
  CHECK(rows[0].nfg == 17);
  CHECK(rows[0].status == RunStatus::converged);
  CHECK(rows[0].gnorm == 1e-6);
  CHECK(rows[0].seconds == 0.25);

  BenchReport quoted = r;
  quoted.rows[0].problem = "odd, \"name\"";
  CHECK(parse_csv(emit_csv(quoted))[0].problem == "odd, \"name\"");
  CHECK_THROWS_AS(parse_csv("wrong,header\r\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv(std::string("problem,n,variant,m,nfg,status,gnorm,seconds\nX,1,gd,1,x,converged,0,0\n")),
                  ConfigError);
}

TEST_CASE("markdown cells") {
  CHECK(emit_markdown(synthetic(RunStatus::converged, 17)).find("| 17 |") != std::string::npos);
  CHECK(emit_markdown(synthetic(RunStatus::budget_exhausted, 1000)).find("| >1000 |") != std::string::npos);
  CHECK(emit_markdown(synthetic(RunStatus::line_search_failure, 40)).find("| -- |") != std::string::npos);
  const std::string md = emit_markdown(synthetic(RunStatus::converged, 17));
  CHECK(md.find("fast-b (m=8)") != std::string::npos);
  CHECK(md.find("| ARWHEAD | 1024 |") != std::string::npos);
  CHECK(parse_format("markdown") == Format::markdown);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}
