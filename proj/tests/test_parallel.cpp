#include <doctest.h>

#include <numeric>
#include <stdexcept>
#include <vector>

#include "corrmine/parallel.hpp"

TEST_SUITE_BEGIN("parallel");

TEST_CASE("per-index results do not depend on the worker count") {
  const std::size_t count = 1000;
  auto run = [&](int threads) {
    std::vector<double> slots(count, 0.0);
    corrmine::parallel_for(count, threads,
                           [&](std::size_t i) { slots[i] = static_cast<double>(i * i); });
    return slots;
  };
  const auto serial = run(1);
  CHECK(run(2) == serial);
  CHECK(run(8) == serial);
  CHECK(std::accumulate(serial.begin(), serial.end(), 0.0) > 0.0);
}

TEST_CASE("exceptions from workers reach the caller") {
  CHECK_THROWS_AS(corrmine::parallel_for(100, 4,
                                         [](std::size_t i) {
                                           if (i == 37) throw std::runtime_error("boom");
                                         }),
                  std::runtime_error);
}

TEST_CASE("resolve_threads") {
  CHECK(corrmine::resolve_threads(3) == 3);
  CHECK(corrmine::resolve_threads(0) >= 1);
  CHECK(corrmine::resolve_threads(-1) >= 1);
}

TEST_SUITE_END();
