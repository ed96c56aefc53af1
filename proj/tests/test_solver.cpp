#include <doctest.h>

#include <cmath>
#include <random>

#include "fdde/core.hpp"
#include "fdde/errors.hpp"
#include "fdde/solver.hpp"
#include "oracles.hpp"

using namespace fdde;

namespace {

ModelParams linear(double alpha, double tau, double delta, double q) { return {alpha, tau, delta, 0, 0, q}; }

SolverConfig cfg(double h, double t_end) {
  SolverConfig c;
  c.h = h;
  c.t_end = t_end;
  return c;
}

double ml_error_at_one(double h) {
  const TimeSeries ts = integrate(linear(0.8, 0, 0, -1), History::constant(1.0), cfg(h, 1.0));
  const double exact = mittag_leffler_1p(0.8, -1.0);
  return std::abs(ts.samples.back() - exact) / exact;
}

}  // namespace

TEST_CASE("grid layout") {
  const TimeSeries ts = integrate(linear(0.9, 0, 0, -1), History::constant(1.0), cfg(0.1, 1.0));
  CHECK(ts.size() == 11);
  CHECK(ts.time(10) == doctest::Approx(1.0));
  CHECK(ts.samples[0] == 1.0);
  CHECK_FALSE(ts.diverged);
}

TEST_CASE("commensurate step") {
  CHECK(commensurate_step(0.0, 0.01) == 0.01);
  CHECK(commensurate_step(1.0, 0.01) == doctest::Approx(0.01));
  CHECK(0.333 / commensurate_step(0.333, 0.01) == doctest::Approx(33.0));
  CHECK(commensurate_step(0.003, 0.01) == doctest::Approx(0.003));
  const TimeSeries ts = integrate(linear(1, 0.333, -1, 0), History::constant(1.0), cfg(0.01, 2.0));
  CHECK(ts.step_adjusted());
  CHECK(ts.requested_h == 0.01);
}

TEST_CASE("invalid configurations") {
  CHECK_THROWS_AS(integrate(linear(1, 0, 0, -1), History::constant(1), cfg(0.0, 1)), ConfigError);
  CHECK_THROWS_AS(integrate(linear(1, 0, 0, -1), History::constant(1), cfg(0.1, -1)), ConfigError);
  CHECK_THROWS_AS(integrate(linear(1.5, 0, 0, -1), History::constant(1), cfg(0.1, 1)), ValidationError);
  const History short_hist = History::sampled({{-0.5, 1.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(integrate(linear(1, 1.0, -1, 0), short_hist, cfg(0.1, 1)), ConfigError);
  CHECK_THROWS_AS(reference_rk4(linear(0.9, 1.0, -1, 0), History::constant(1), cfg(0.1, 1)), ConfigError);
}

TEST_CASE("classical limit follows exp(-t)") {
  const TimeSeries ts = integrate(linear(1, 0.7, 0, -1), History::constant(1.0), cfg(1e-3, 5.0));
  double worst = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) worst = std::max(worst, std::abs(ts.samples[k] - std::exp(-ts.time(k))));
  CHECK(worst <= 1e-4);
}

TEST_CASE("Mittag-Leffler function") {
  for (double z : {-5.0, -2.0, -0.3, 0.0, 1.0, 4.9}) CHECK(mittag_leffler_1p(1.0, z) == doctest::Approx(std::exp(z)).epsilon(1e-12));
  CHECK(mittag_leffler_1p(0.37, 0.0) == 1.0);
  // E_{1/2}(-1) = e erfc(1)
  CHECK(mittag_leffler_1p(0.5, -1.0) == doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-12));
  for (double a : {0.3, 0.5, 0.8, 0.95})
    CHECK(std::abs(mittag_leffler_1p(a, -1.0) - oracle::mittag_leffler_minus_one(a)) <= 1e-8);
  CHECK_THROWS_AS(mittag_leffler_1p(0.5, 5.5), DomainError);
  CHECK_THROWS_AS(mittag_leffler_1p(1.2, 1.0), DomainError);
}

TEST_CASE("fractional relaxation matches Mittag-Leffler with order above 1.5") {
  const double e4 = ml_error_at_one(4e-3), e2 = ml_error_at_one(2e-3), e1 = ml_error_at_one(1e-3);
  CHECK(e1 <= 1e-4);
  CHECK(std::log2(e4 / e2) >= 1.5);
  CHECK(std::log2(e2 / e1) >= 1.5);
}

TEST_CASE("stable X1 set decays toward zero") {
  const ModelParams m{0.95, 0.8, 2, 1, 1, -3};
  const TimeSeries ts = integrate(m, History::constant(0.2), cfg(0.01, 100));
  CHECK_FALSE(ts.diverged);
  CHECK(oracle::max_abs_dev(ts.samples, 0.8, 0.0) < 1e-2);
}

TEST_CASE("equilibrium histories stay put") {
  const ModelParams m{0.9, 0.5, 3, 1, 1, -2};
  for (const auto& e : equilibria(m)) {
    const TimeSeries ts = integrate(m, History::constant(e.value), cfg(0.01, 50));
    CHECK(oracle::max_abs_dev(ts.samples, 0.0, e.value) <= 1e-6);
  }
  const TimeSeries zero = reference_rk4({1, 1, 2, 1, 1, 1}, History::constant(0), cfg(0.01, 20));
  CHECK(oracle::max_abs_dev(zero.samples, 0.0, 0.0) == 0.0);
}

TEST_CASE("odd symmetry when p = 0") {
  const ModelParams m{0.85, 0.6, 1.5, 0.7, 0, -0.4};
  const History up = History::sampled({{-0.6, 0.3}, {-0.4, -0.1}, {-0.2, 0.2}, {0.0, 0.5}});
  const History down = History::sampled({{-0.6, -0.3}, {-0.4, 0.1}, {-0.2, -0.2}, {0.0, -0.5}});
  const TimeSeries a = integrate(m, up, cfg(0.01, 30)), b = integrate(m, down, cfg(0.01, 30));
  REQUIRE(a.size() == b.size());
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a.samples[k] + b.samples[k]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("divergence truncates and flags") {
  const TimeSeries ts = integrate({1, 0.5, 1, -1, 0, 0}, History::constant(1), cfg(0.01, 10));
  CHECK(ts.diverged);
  CHECK(ts.size() < 1001);
  for (double x : ts.samples) CHECK(std::abs(x) <= 1e8);
}

TEST_CASE("unstable X1 is left behind under the reference integrator") {
  const TimeSeries ts = reference_rk4({1, 0.5, 2, 1, 1, 1}, History::constant(0.1), cfg(0.01, 50));
  CHECK(oracle::max_abs_dev(ts.samples, 0.8, 0.0) > 0.1);
}

TEST_CASE("delayed linear equation agrees across integrators") {
  const ModelParams m = linear(1, 1, -1, 0);
  const TimeSeries rk = reference_rk4(m, History::constant(1), cfg(1e-3, 10));
  const TimeSeries abm = integrate(m, History::constant(1), cfg(1e-3, 10));
  REQUIRE(rk.size() == abm.size());
  double worst = 0;
  bool sign_change = false;
  for (std::size_t k = 0; k < rk.size(); ++k) {
    worst = std::max(worst, std::abs(rk.samples[k] - abm.samples[k]));
    sign_change = sign_change || rk.samples[k] < 0;
  }
  CHECK(worst <= 1e-4);
  CHECK(sign_change);
  // method of steps on [0, 1]: x = 1 - t
  CHECK(rk.samples[500] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("integrate and reference_rk4 agree at alpha = 1 on random stable draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 20; ++i) {
    // delta + q < 0 and delta >= q: zero is stable for every delay
    const double q = -1.0 - 2.0 * u(rng);
    const double delta = q + (-2.0 * q - 0.2) * u(rng);
    const ModelParams m{1.0, 0.2 + 1.5 * u(rng), delta, 2 * u(rng) - 1, 2 * u(rng) - 1, q};
    const History h = History::constant(0.2 * u(rng) - 0.1);
    const TimeSeries a = integrate(m, h, cfg(0.01, 10)), b = reference_rk4(m, h, cfg(0.01, 10));
    REQUIRE(a.size() == b.size());
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a.samples[k] - b.samples[k]));
    CHECK(worst <= 1e-3);
  }
}

TEST_CASE("memory window is opt-in") {
  const ModelParams m = linear(0.8, 0, 0, -1);
  SolverConfig c = cfg(0.01, 20);
  const TimeSeries full = integrate(m, History::constant(1), c);
  c.memory_window = 5.0;
  const TimeSeries cut = integrate(m, History::constant(1), c);
  CHECK(full.samples[400] == cut.samples[400]);
  CHECK(full.samples.back() != cut.samples.back());
}

TEST_CASE("bit reproducible") {
  const ModelParams m{0.95, 1.7, 5, 2, 0.01, -2};
  const TimeSeries a = integrate(m, History::constant(1.3), cfg(0.01, 40));
  const TimeSeries b = integrate(m, History::constant(1.3), cfg(0.01, 40));
  CHECK(a.samples == b.samples);
}
