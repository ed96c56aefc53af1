#include <doctest.h>

#include <cmath>
#include <random>

#include "fdde/core.hpp"
#include "fdde/errors.hpp"
#include "oracles.hpp"

using namespace fdde;

namespace {

ModelParams model(double delta, double eps, double p, double q) { return {1.0, 0.0, delta, eps, p, q}; }

std::vector<double> equilibria_by_bisection(const ModelParams& m) {
  auto f = [&](double x) { return rhs(m, x, x); };
  const double r = 2.0 + std::abs(m.delta + m.q) + std::abs(m.p) + 10.0 / std::max(std::abs(m.epsilon), 1e-3);
  return oracle::all_roots(f, -r, r, 200001);
}

double find(const std::vector<Equilibrium>& es, Branch b) {
  for (const auto& e : es)
    if (e.branch == b) return e.value;
  FAIL("branch missing");
  return NAN;
}

}  // namespace

TEST_CASE("rhs by direct substitution") {
  CHECK(rhs(model(7, 3, 2, -1), 0, 0) == 0.0);
  CHECK(rhs(model(2, 1, 1, 1), 1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  // delayed and current arguments enter separately
  CHECK(rhs(model(2, 0, 0, 0), 5, 1) == doctest::Approx(2.0));
  CHECK(rhs(model(0, 0, 1, 0), 3, 100) == doctest::Approx(-9.0));
}

TEST_CASE("validate rejects bad params") {
  ModelParams m = model(1, 1, 1, 1);
  CHECK_NOTHROW(validate(m));
  m.alpha = 0.0;
  CHECK_THROWS_AS(validate(m), ValidationError);
  m.alpha = 1.01;
  CHECK_THROWS_AS(validate(m), ValidationError);
  m.alpha = 0.5;
  m.tau = -0.1;
  CHECK_THROWS_AS(validate(m), ValidationError);
  m.tau = 0.1;
  m.q = NAN;
  CHECK_THROWS_AS(validate(m), ValidationError);
}

TEST_CASE("equilibria of the chaos set match bisection") {
  const ModelParams m = model(5, 2, 0.01, -2);
  const auto es = equilibria(m);
  REQUIRE(es.size() == 3);
  const auto roots = equilibria_by_bisection(m);
  REQUIRE(roots.size() == 3);
  CHECK(find(es, Branch::X1) == 0.0);
  CHECK(find(es, Branch::X2) == doctest::Approx(roots[2]).epsilon(1e-12));
  CHECK(find(es, Branch::X3) == doctest::Approx(roots[0]).epsilon(1e-12));
  // the verified value, not the misprinted 1.22725
  CHECK(find(es, Branch::X2) == doctest::Approx(1.2222474).epsilon(1e-7));
  CHECK(std::abs(rhs(m, find(es, Branch::X2), find(es, Branch::X2))) <= 1e-9);
}

TEST_CASE("equilibria examples") {
  const auto es = equilibria(model(3, 1, 1, -2));
  REQUIRE(es.size() == 3);
  CHECK(find(es, Branch::X2) == doctest::Approx(0.618034).epsilon(1e-6));
  CHECK(find(es, Branch::X3) == doctest::Approx(-1.618034).epsilon(1e-6));

  const auto none = equilibria(model(0, 1, 0, -1));
  REQUIRE(none.size() == 1);
  CHECK(none[0].branch == Branch::X1);

  // eps = 0 leaves one nonzero root (delta + q) / p
  const auto lin = equilibria(model(3, 0, 2, 1));
  REQUIRE(lin.size() == 2);
  CHECK(lin[1].value == doctest::Approx(2.0));

  // double root at the existence boundary is reported once
  const auto twin = equilibria(model(-0.25, 1, 1, 0));
  REQUIRE(twin.size() == 2);
  CHECK(twin[1].value == doctest::Approx(-0.5));
}

TEST_CASE("equilibria satisfy f(x,x)=0 and agree with bisection on random draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const ModelParams m = model(u(rng), u(rng), u(rng), u(rng));
    if (std::abs(m.epsilon) < 0.05) continue;
    const auto es = equilibria(m);
    const auto roots = equilibria_by_bisection(m);
    REQUIRE(es.size() == roots.size());
    for (const auto& e : es) {
      CHECK(std::abs(rhs(m, e.value, e.value)) <= 1e-12 * std::max(1.0, std::pow(std::abs(e.value), 3)) * 10);
      bool matched = false;
      for (double r : roots) matched = matched || std::abs(r - e.value) <= 1e-9 * std::max(1.0, std::abs(r));
      CHECK(matched);
    }
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("symmetric equilibria when p = 0") {
  const auto es = equilibria(model(3, 2, 0, 1));
  REQUIRE(es.size() == 3);
  CHECK(find(es, Branch::X2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(find(es, Branch::X3) == doctest::Approx(-std::sqrt(2.0)));
}

TEST_CASE("linearize matches central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 200; ++i) {
    const ModelParams m = model(u(rng), u(rng), u(rng), u(rng));
    for (const auto& e : equilibria(m)) {
      const double h = 1e-6, x = e.value;
      const double fd_a = (rhs(m, x + h, x) - rhs(m, x - h, x)) / (2 * h);
      const double fd_b = (rhs(m, x, x + h) - rhs(m, x, x - h)) / (2 * h);
      const LinearCoeffs lc = linearize(m, x);
      CHECK(std::abs(lc.a - fd_a) <= 1e-5 * std::max(1.0, std::abs(fd_a)));
      CHECK(std::abs(lc.b - fd_b) <= 1e-5 * std::max(1.0, std::abs(fd_b)));
    }
  }
}

TEST_CASE("linearize examples") {
  const LinearCoeffs at0 = linearize(model(4, 3, 2, -7), 0.0);
  CHECK(at0.a == -7.0);
  CHECK(at0.b == 4.0);
  const LinearCoeffs flat = linearize(model(4, 0, 0, -7), 2.5);
  CHECK(flat.a == -7.0);
  CHECK(flat.b == 4.0);

  const ModelParams m = model(5, 2, 0.01, -2);
  const LinearCoeffs x2 = linearize(m, find(equilibria(m), Branch::X2));
  CHECK(x2.a < 0);
  CHECK(x2.b < x2.a);
}

TEST_CASE("a + b closed form") {
  const ModelParams m = model(3, 1, 1, -2);
  const LinearCoeffs lc = linearize(m, find(equilibria(m), Branch::X2));
  CHECK(std::abs(a_plus_b_closed_form(m) - (lc.a + lc.b)) <= 1e-12);
  CHECK(a_plus_b_closed_form(model(2, 1.5, 0.7, -2)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(a_plus_b_closed_form(model(-2, 1, 3, 1)) > 0.0);
  CHECK_THROWS_AS(a_plus_b_closed_form(model(0, 1, 0, -1)), DomainError);
  CHECK_THROWS_AS(a_plus_b_closed_form(model(1, 0, 1, 1)), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  int n = 0;
  while (n < 1000) {
    const ModelParams r = model(u(rng), u(rng), u(rng), u(rng));
    if (r.epsilon == 0.0 || discriminant(r) < 0.0) continue;
    const LinearCoeffs c = linearize(r, find(equilibria(r), Branch::X2));
    CHECK(std::abs(a_plus_b_closed_form(r) - (c.a + c.b)) <= 1e-10 * std::max(1.0, std::abs(c.a) + std::abs(c.b)));
    ++n;
  }
}

TEST_CASE("discriminant clamps tiny negatives") {
  CHECK(discriminant(model(1e-15, 1, 0, -2e-15)) == 0.0);
  CHECK(discriminant(model(0, 1, 0, -1)) < 0.0);
}

TEST_CASE("history functions") {
  const History c = History::constant(0.3);
  CHECK(c(-5.0) == 0.3);
  CHECK(c.is_constant());
  CHECK_NOTHROW(c.check_covers(100.0));

  const History s = History::sampled({{-1.0, 0.0}, {-0.5, 0.5}, {-0.25, 0.75}, {0.0, 1.0}});
  CHECK(s(-1.0) == doctest::Approx(0.0));
  CHECK(s(-0.5) == doctest::Approx(0.5));
  CHECK(s(-0.75) == doctest::Approx(0.25));
  CHECK(s(0.0) == doctest::Approx(1.0));
  CHECK_NOTHROW(s.check_covers(1.0));
  CHECK_THROWS_AS(s.check_covers(2.0), ConfigError);

  const History two = History::sampled({{-2.0, 2.0}, {0.0, 0.0}});
  CHECK(two(-1.0) == doctest::Approx(1.0));

  CHECK_THROWS(History::sampled({{0.0, 1.0}, {0.0, 2.0}}));
  CHECK_THROWS(History::sampled({{0.0, 1.0}}));
}
