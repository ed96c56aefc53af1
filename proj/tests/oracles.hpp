#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// every sign change of f on [lo, hi] at resolution n, refined by bisection
inline std::vector<double> all_roots(const std::function<double(double)>& f, double lo, double hi, int n) {
  std::vector<double> roots;
  double x0 = lo, f0 = f(lo);
  if (f0 == 0.0) roots.push_back(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo + (hi - lo) * i / n;
    const double f1 = f(x1);
    if (f1 == 0.0)
      roots.push_back(x1);
    else if (f0 != 0.0 && (f0 < 0) != (f1 < 0))
      roots.push_back(bisect(f, x0, x1));
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

// E_alpha(-1) from the Laplace-type integral
//   E_a(-1) = int_0^inf e^{-r} sin(a pi) r^{a-1} / (pi (r^{2a} + 2 r^a cos(a pi) + 1)) dr, 0 < a < 1,
// after the substitution u = r^a.
inline double mittag_leffler_minus_one(double a) {
  const double s = std::sin(a * std::numbers::pi), c = std::cos(a * std::numbers::pi);
  auto f = [&](double u) { return std::exp(-std::pow(u, 1.0 / a)) / (u * u + 2.0 * u * c + 1.0); };
  boost::math::quadrature::exp_sinh<double> integrator;
  return s / (std::numbers::pi * a) * integrator.integrate(f, 1e-14);
}

// x' = a x(t) + b x(t - tau): first crossing for b < -|a|
inline double classical_crossing(double a, double b) { return std::acos(-a / b) / std::sqrt(b * b - a * a); }

inline double max_abs_dev(const std::vector<double>& x, double from_frac, double centre) {
  double m = 0.0;
  for (std::size_t k = static_cast<std::size_t>(from_frac * x.size()); k < x.size(); ++k)
    m = std::max(m, std::abs(x[k] - centre));
  return m;
}

}  // namespace oracle
