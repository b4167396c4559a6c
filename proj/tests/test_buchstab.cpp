#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "psq/buchstab.hpp"

using namespace psq::buchstab;

namespace {
const BuchstabTable& table10() {
  static BuchstabTable t = build_table(10.0, 1e-4);
  return t;
}
}  // namespace

TEST_SUITE("buchstab") {

TEST_CASE("closed form branch is exact") {
  const auto& tab = table10();
  CHECK(eval_w(tab, 1.25) == 0.8);
  CHECK(eval_w(tab, 1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(eval_w(tab, 2.0) == 0.5);
}

TEST_CASE("second unit interval matches t*w = 1 + log(t-1)") {
  const auto& tab = table10();
  CHECK(std::abs(eval_w(tab, 3.0) - (1 + std::log(2.0)) / 3.0) < 1e-6);
  CHECK(std::abs(eval_w(tab, 2.5) - (1 + std::log(1.5)) / 2.5) < 1e-6);
  for (double t : {2.1, 2.25, 2.75, 2.9})
    CHECK(std::abs(eval_w(tab, t) - (1 + std::log(t - 1)) / t) < 1e-6);
}

TEST_CASE("long-range value approaches the classical limit") {
  const auto& tab = table10();
  CHECK(std::abs(eval_w(tab, 10.0) - w_limit) < 1e-3);
  // oscillation decay on [8, 10]
  double worst = 0;
  for (double t = 8.0; t <= 10.0; t += 0.01)
    worst = std::max(worst, std::abs(eval_w(tab, t) - w_limit));
  CHECK(worst <= 1e-3);
}

TEST_CASE("envelope beyond t = 2") {
  const auto& tab = table10();
  for (std::int64_t j = 2 * tab.n_per_unit; j <= tab.last_index(); ++j) {
    CHECK(tab.w_at(j) >= 0.49);
    CHECK(tab.w_at(j) <= 0.62);
  }
}

TEST_CASE("grid increments bounded by K * step (K = 1)") {
  const auto& tab = table10();
  for (std::int64_t j = 0; j < tab.last_index(); ++j)
    CHECK(std::abs(tab.w_at(j + 1) - tab.w_at(j)) <= 1.0 * tab.step);
}

TEST_CASE("finite difference of u recovers the delayed term") {
  const auto& tab = table10();
  const double h = tab.step;
  auto u = [&](std::int64_t j) {
    return (1.0 + static_cast<double>(j) * h) * tab.w_at(j);
  };
  for (std::int64_t j = tab.n_per_unit + 1; j < tab.last_index();
       j += tab.n_per_unit / 7) {
    double fd = (u(j + 1) - u(j - 1)) / (2 * h);
    double t = 1.0 + static_cast<double>(j) * h;
    CHECK(std::abs(fd - eval_w(tab, t - 1)) <= 10 * h);
  }
}

TEST_CASE("halving the step moves the endpoint by at most 4*step^2") {
  for (double step : {1e-2, 5e-3, 1e-3}) {
    auto coarse = build_table(6.0, step);
    auto fine = build_table(6.0, step / 2);
    double delta = std::abs(eval_w(coarse, 6.0) - eval_w(fine, 6.0));
    CHECK(delta <= 4 * step * step);
  }
}

TEST_CASE("build_table validation") {
  CHECK_THROWS_AS(build_table(1.5, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(build_table(25.0, 1e-4), std::invalid_argument);
  CHECK_THROWS_AS(build_table(10.0, 1e-7), std::invalid_argument);
  CHECK_THROWS_AS(build_table(10.0, 0.1), std::invalid_argument);
}

TEST_CASE("eval_w domain") {
  const auto& tab = table10();
  CHECK_THROWS_AS(eval_w(tab, 1.0), std::domain_error);
  CHECK_THROWS_AS(eval_w(tab, 0.5), std::domain_error);
  CHECK_THROWS_AS(eval_w(tab, 10.0001), std::domain_error);
  CHECK(eval_w_extended(tab, 50.0) == w_limit);
  CHECK(eval_w_extended(tab, 3.0) == eval_w(tab, 3.0));
}

TEST_CASE("integer grid alignment and t_max snapping") {
  auto tab = build_table(5.0, 1e-3);
  CHECK(tab.n_per_unit == 1000);
  CHECK(tab.t_max == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(tab.last_index() == 4000);
  // grid point at t = 2 must carry the exact closed-form value
  CHECK(tab.w_at(tab.n_per_unit) == 0.5);
}

}  // TEST_SUITE
