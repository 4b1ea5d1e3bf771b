#include <random>
#include <vector>

#include "afsim/metrics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace afsim;

namespace {

CustomerStats stats(std::uint64_t green, std::uint64_t yellow, std::uint64_t red, double duration) {
  CustomerStats s;
  s.delivered_bytes = {green, yellow, red};
  s.duration_s = duration;
  return s;
}

}  // namespace

TEST_CASE("utilization") {
  // 12.8 kbps for 100 s is 160000 bytes.
  CHECK(reserved_rate_utilization(stats(160'000, 0, 0, 100), 12'800) == doctest::Approx(1.0));
  const double bound = 1.0 + 32.0 * 576 * 8 / (12'800.0 * 100);
  CHECK(bound == doctest::Approx(1.1152));
  CHECK(reserved_rate_utilization(stats(160'000 + 32 * 576, 0, 0, 100), 12'800) == doctest::Approx(bound));
  CHECK_THROWS_AS(reserved_rate_utilization(stats(1, 0, 0, 100), 0), MetricError);
  CHECK_THROWS_AS(reserved_rate_utilization(stats(1, 0, 0, 0), 12'800), MetricError);
}

TEST_CASE("excess throughput") {
  CHECK(excess_throughput(stats(1000, 0, 0, 10)) == 0.0);
  CHECK(excess_throughput(stats(1000, 0, 500, 10)) == doctest::Approx(400.0));
  CHECK(excess_throughput(stats(1000, 250, 250, 10)) == doctest::Approx(400.0));
  CHECK(green_throughput(stats(1000, 250, 250, 10)) == doctest::Approx(800.0));
}

TEST_CASE("fairness examples") {
  std::vector<double> equal(10, 3.5);
  CHECK(fairness_index(equal) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> lone(10, 0.0);
  lone[4] = 7.0;
  CHECK(fairness_index(lone) == doctest::Approx(0.1).epsilon(1e-12));
  std::vector<double> ramp{1, 2, 3};
  CHECK(fairness_index(ramp) == doctest::Approx(36.0 / 42.0).epsilon(1e-12));
  std::vector<double> zeros(10, 0.0);
  CHECK(fairness_index(zeros) == 0.0);
  CHECK_THROWS_AS(fairness_index(std::vector<double>{}), MetricError);
  CHECK_THROWS_AS(fairness_index(std::vector<double>{1, -1}), MetricError);
}

TEST_CASE("property: fairness lies in [1/n, 1], is scale invariant and matches direct evaluation") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + gen() % 12;
    std::vector<double> x(n);
    for (auto& v : x) v = u(gen);
    const double f = fairness_index(x);
    REQUIRE(f >= 1.0 / static_cast<double>(n) - 1e-12);
    REQUIRE(f <= 1.0 + 1e-12);
    REQUIRE(f == doctest::Approx(oracle::jain(x)).epsilon(1e-12));
    for (double c : {1e-3, 1.0, 1e6}) {
      std::vector<double> y = x;
      for (auto& v : y) v *= c;
      REQUIRE(fairness_index(y) == doctest::Approx(f).epsilon(1e-12));
    }
  }
}
