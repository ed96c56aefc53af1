#include "fdde/solver.hpp"

#include <cmath>
#include <sstream>

#include "fdde/errors.hpp"

namespace fdde {

namespace {

void check_config(const SolverConfig& c) {
  if (!(c.h > 0.0) || !std::isfinite(c.h)) throw ConfigError("step h must be positive and finite");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) throw ConfigError("t_end must be positive and finite");
  if (c.t_end < c.h) throw ConfigError("t_end must be at least one step");
  if (!(c.divergence_threshold > 0.0)) throw ConfigError("divergence threshold must be positive");
  if (c.memory_window && !(*c.memory_window > 0.0))
    throw ConfigError("memory window must be positive");
}

std::size_t delay_steps(double tau, double h) {
  if (tau == 0.0) return 0;
  return static_cast<std::size_t>(std::llround(tau / h));
}

std::size_t step_count(double t_end, double h) {
  return static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
}

bool escaped(double x, double threshold) { return !std::isfinite(x) || std::abs(x) > threshold; }

}  // namespace

double commensurate_step(double tau, double h) {
  if (tau == 0.0) return h;
  const double m = std::max(1.0, std::round(tau / h));
  return tau / m;
}

TimeSeries integrate(const ModelParams& params, const History& history, const SolverConfig& config) {
  validate(params);
  check_config(config);
  history.check_covers(params.tau);

  const double h = commensurate_step(params.tau, config.h);
  const std::size_t m = delay_steps(params.tau, h);
  const std::size_t n_steps = step_count(config.t_end, h);
  const double alpha = params.alpha;

  TimeSeries out;
  out.h = h;
  out.requested_h = config.h;
  std::vector<double>& x = out.samples;
  x.reserve(n_steps + 1);
  std::vector<double> f;
  f.reserve(n_steps + 1);

  // Delayed state at grid index k.
  auto delayed = [&](std::size_t k) {
    if (k >= m) return x[k - m];
    return history((static_cast<double>(k) - static_cast<double>(m)) * h);
  };

  x.push_back(history(0.0));
  if (escaped(x[0], config.divergence_threshold)) {
    x.clear();
    out.diverged = true;
    return out;
  }
  f.push_back(rhs(params, x[0], delayed(0)));

  // Product-rectangle (predictor) and product-trapezoid (corrector) weights,
  // indexed by the distance d = n - j between current step and summand.
  std::vector<double> pw(n_steps + 2), pw1(n_steps + 3);
  for (std::size_t k = 0; k < pw.size(); ++k) pw[k] = std::pow(static_cast<double>(k), alpha);
  for (std::size_t k = 0; k < pw1.size(); ++k) pw1[k] = std::pow(static_cast<double>(k), alpha + 1.0);
  std::vector<double> bw(n_steps + 1), aw(n_steps + 1);
  for (std::size_t d = 0; d <= n_steps; ++d) {
    bw[d] = pw[d + 1] - pw[d];
    aw[d] = pw1[d + 2] + pw1[d] - 2.0 * pw1[d + 1];
  }

  const double c_pred = std::pow(h, alpha) / std::tgamma(alpha + 1.0);
  const double c_corr = std::pow(h, alpha) / std::tgamma(alpha + 2.0);
  const std::size_t window =
      config.memory_window ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(*config.memory_window / h)))
                           : n_steps + 1;

  for (std::size_t n = 0; n < n_steps; ++n) {
    const std::size_t j0 = (n + 1 > window) ? n + 1 - window : 0;
    double sp = 0.0;
    double sc = 0.0;
    if (j0 == 0) {
      const double nd = static_cast<double>(n);
      sp = bw[n] * f[0];
      sc = (pw1[n] - (nd - alpha) * pw[n + 1]) * f[0];
    }
    for (std::size_t j = std::max<std::size_t>(j0, 1); j <= n; ++j) {
      sp += bw[n - j] * f[j];
      sc += aw[n - j] * f[j];
    }
    const double x_pred = x[0] + c_pred * sp;
    const double xd_pred = (m == 0) ? x_pred : delayed(n + 1);
    const double x_next = x[0] + c_corr * (rhs(params, x_pred, xd_pred) + sc);
    if (escaped(x_next, config.divergence_threshold)) {
      out.diverged = true;
      return out;
    }
    x.push_back(x_next);
    f.push_back(rhs(params, x_next, (m == 0) ? x_next : delayed(n + 1)));
  }
  return out;
}

TimeSeries reference_rk4(const ModelParams& params, const History& history, const SolverConfig& config) {
  validate(params);
  if (params.alpha != 1.0) {
    std::ostringstream os;
    os << "reference_rk4 integrates the classical alpha = 1 limit only, got alpha = " << params.alpha;
    throw ConfigError(os.str());
  }
  check_config(config);
  history.check_covers(params.tau);

  const double h = commensurate_step(params.tau, config.h);
  const std::size_t m = delay_steps(params.tau, h);
  const std::size_t n_steps = step_count(config.t_end, h);
  const double tau = params.tau;

  TimeSeries out;
  out.h = h;
  out.requested_h = config.h;
  std::vector<double>& x = out.samples;
  std::vector<double> slope;
  x.reserve(n_steps + 1);
  slope.reserve(n_steps + 1);

  // Solution at time s <= t_n (already computed region or history).
  auto past = [&](double s) {
    if (s <= 0.0) return history(s);
    const double u = s / h;
    // s <= t_n - tau + h/2 keeps j + 1 inside the computed samples.
    auto j = std::min(static_cast<std::size_t>(std::floor(u)), x.size() - 2);
    const double w = u - static_cast<double>(j);
    // Cubic Hermite basis on [t_j, t_{j+1}].
    const double w2 = w * w, w3 = w2 * w;
    const double h00 = 2 * w3 - 3 * w2 + 1, h10 = w3 - 2 * w2 + w;
    const double h01 = -2 * w3 + 3 * w2, h11 = w3 - w2;
    return h00 * x[j] + h10 * h * slope[j] + h01 * x[j + 1] + h11 * h * slope[j + 1];
  };
  auto lagged = [&](std::size_t k) {
    if (k >= m) return x[k - m];
    return history((static_cast<double>(k) - static_cast<double>(m)) * h);
  };

  x.push_back(history(0.0));
  slope.push_back(rhs(params, x[0], m == 0 ? x[0] : lagged(0)));

  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(n) * h;
    const double xn = x[n];
    double k1, k2, k3, k4;
    if (m == 0) {
      k1 = rhs(params, xn, xn);
      const double y2 = xn + 0.5 * h * k1;
      k2 = rhs(params, y2, y2);
      const double y3 = xn + 0.5 * h * k2;
      k3 = rhs(params, y3, y3);
      const double y4 = xn + h * k3;
      k4 = rhs(params, y4, y4);
    } else {
      const double d0 = lagged(n);
      const double dh = past(t + 0.5 * h - tau);
      const double d1 = lagged(n + 1);
      k1 = rhs(params, xn, d0);
      k2 = rhs(params, xn + 0.5 * h * k1, dh);
      k3 = rhs(params, xn + 0.5 * h * k2, dh);
      k4 = rhs(params, xn + h * k3, d1);
    }
    const double x_next = xn + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (escaped(x_next, config.divergence_threshold)) {
      out.diverged = true;
      return out;
    }
    x.push_back(x_next);
    slope.push_back(rhs(params, x_next, m == 0 ? x_next : lagged(n + 1)));
  }
  return out;
}

double mittag_leffler_1p(double alpha, double z) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("Mittag-Leffler order must lie in (0, 1]");
  if (!std::isfinite(z) || std::abs(z) > 5.0)
    throw DomainError("Mittag-Leffler series is only validated for |z| <= 5");
  if (z == 0.0) return 1.0;

  constexpr int kMaxTerms = 20000;
  const double log_abs_z = std::log(std::abs(z));
  // Neumaier-compensated sum of z^k / Gamma(alpha k + 1).
  double sum = 1.0;
  double comp = 0.0;
  double prev_abs = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    const double arg = alpha * k + 1.0;
    double term;
    if (arg < 170.0) {
      term = std::pow(z, k) / std::tgamma(arg);
    } else {
      term = std::exp(k * log_abs_z - std::lgamma(arg));
      if (z < 0.0 && (k % 2 == 1)) term = -term;
    }
    if (!std::isfinite(term)) throw DomainError("Mittag-Leffler series overflowed");
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    const double abs_term = std::abs(term);
    if (abs_term < prev_abs && abs_term <= 1e-17 * std::abs(sum + comp)) return sum + comp;
    prev_abs = abs_term;
  }
  throw DomainError("Mittag-Leffler series did not converge");
}

}  // namespace fdde
