#include "hleray/io.hpp"
#include "hleray/parallel.hpp"
#include "hleray/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace hleray;

TEST_CASE("number formatting") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(std::stod(format_double(25.0 / 68.0)) == 25.0 / 68.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  nlohmann::ordered_json j;
  j["x"] = std::numeric_limits<double>::infinity();
  j["y"] = 1.5;
  CHECK(dump_json(j, -1) == "{\"x\":\"inf\",\"y\":1.5}");
  CHECK(csv_row({"a", "1", "b"}) == "a,1,b");
}

TEST_CASE("parallel_map keeps input order and rethrows") {
  std::vector<int> xs(100);
  for (int i = 0; i < 100; ++i) xs[i] = i;
  const auto ys = parallel_map(xs, [](int x) { return x * x; }, 4);
  for (int i = 0; i < 100; ++i) CHECK(ys[i] == i * i);
  CHECK_THROWS_AS(parallel_map(
                      xs,
                      [](int x) {
                        if (x == 37) throw std::runtime_error("boom");
                        return x;
                      },
                      3),
                  std::runtime_error);
  CHECK(parallel_map(std::vector<int>{}, [](int x) { return x; }).empty());
}

TEST_CASE("verify suites") {
  VerifyConfig cfg;
  const VerifySummary ok = run_verify(cfg, {"identity", "interval"});
  CHECK(ok.passed());
  REQUIRE(ok.suites.size() == 2);
  CHECK(ok.suites[0].name == "identity");
  cfg.perturb = 1e-6;
  const SuiteResult bad = run_suite("identity", cfg);
  CHECK_FALSE(bad.passed());
  CHECK_FALSE(bad.failures.empty());
  CHECK(to_json(bad)["passed"] == false);
  CHECK_THROWS(run_suite("nope", cfg));
}
