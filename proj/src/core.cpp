#include "fdde/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

// pchip in Boost 1.74 calls unqualified isnan
#include <math.h>
#include <boost/math/interpolators/pchip.hpp>

#include "fdde/errors.hpp"

namespace fdde {

namespace {

constexpr double kDiscriminantClamp = 1e-14;

bool all_finite(const ModelParams& m) {
  return std::isfinite(m.alpha) && std::isfinite(m.tau) && std::isfinite(m.delta) &&
         std::isfinite(m.epsilon) && std::isfinite(m.p) && std::isfinite(m.q);
}

}  // namespace

void validate(const ModelParams& params) {
  if (!all_finite(params)) throw ValidationError("model parameters must be finite");
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0, 1], got " << params.alpha;
    throw ValidationError(os.str());
  }
  if (params.tau < 0.0) {
    std::ostringstream os;
    os << "tau must be non-negative, got " << params.tau;
    throw ValidationError(os.str());
  }
}

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::X1: return "X1";
    case Branch::X2: return "X2";
    case Branch::X3: return "X3";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// History

History::History(std::variant<Constant, Sampled> kind) : kind_(std::move(kind)) {}

History History::constant(double value) { return History(Constant{value}); }

History History::sampled(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw ConfigError("sampled history needs at least two points");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first))
      throw ConfigError("sampled history times must be strictly increasing");
  }
  History h(Sampled{points});
  if (points.size() >= 4) {
    std::vector<double> ts, xs;
    ts.reserve(points.size());
    xs.reserve(points.size());
    for (const auto& [t, x] : points) {
      ts.push_back(t);
      xs.push_back(x);
    }
    boost::math::interpolators::pchip<std::vector<double>> spline(std::move(ts), std::move(xs));
    h.interp_ = [spline](double t) { return spline(t); };
  } else {
    h.interp_ = [pts = std::move(points)](double t) {
      auto hi = std::upper_bound(pts.begin(), pts.end(), t,
                                 [](double v, const auto& pt) { return v < pt.first; });
      if (hi == pts.begin()) return pts.front().second;
      if (hi == pts.end()) return pts.back().second;
      auto lo = hi - 1;
      double w = (t - lo->first) / (hi->first - lo->first);
      return (1.0 - w) * lo->second + w * hi->second;
    };
  }
  return h;
}

double History::operator()(double t) const {
  if (const auto* c = std::get_if<Constant>(&kind_)) return c->value;
  const auto& pts = std::get<Sampled>(kind_).points;
  // Clamp to the sampled range; the grid is required to cover [-tau, 0].
  t = std::clamp(t, pts.front().first, pts.back().first);
  return interp_(t);
}

void History::check_covers(double tau) const {
  if (is_constant()) return;
  const auto& pts = std::get<Sampled>(kind_).points;
  const double slack = 1e-12 * std::max(1.0, tau);
  if (pts.front().first > -tau + slack || pts.back().first < -slack) {
    std::ostringstream os;
    os << "sampled history spans [" << pts.front().first << ", " << pts.back().first
       << "] but must cover [" << -tau << ", 0]";
    throw ConfigError(os.str());
  }
}

// ---------------------------------------------------------------------------
// Model

double rhs(const ModelParams& m, double x, double x_delayed) {
  return m.delta * x_delayed - m.epsilon * x_delayed * x_delayed * x_delayed - m.p * x * x + m.q * x;
}

double discriminant(const ModelParams& m) {
  double d = m.p * m.p + 4.0 * m.epsilon * (m.delta + m.q);
  if (d < 0.0 && d >= -kDiscriminantClamp) d = 0.0;
  return d;
}

std::vector<Equilibrium> equilibria(const ModelParams& m) {
  std::vector<Equilibrium> out{{0.0, Branch::X1}};
  auto push_unique = [&out](double v, Branch b) {
    for (const auto& e : out) {
      if (std::abs(e.value - v) <= 1e-15 * std::max(1.0, std::abs(v))) return;
    }
    out.push_back({v, b});
  };

  if (m.epsilon == 0.0) {
    // (delta + q) x - p x^2 = 0
    const double s = m.delta + m.q;
    if (s != 0.0 && m.p != 0.0) push_unique(s / m.p, Branch::X2);
    return out;
  }

  const double d = discriminant(m);
  if (d < 0.0) return out;
  const double r = std::sqrt(d);
  push_unique((-m.p + r) / (2.0 * m.epsilon), Branch::X2);
  push_unique((-m.p - r) / (2.0 * m.epsilon), Branch::X3);
  return out;
}

LinearCoeffs linearize(const ModelParams& m, double x_star) {
  return {-2.0 * m.p * x_star + m.q, m.delta - 3.0 * m.epsilon * x_star * x_star};
}

double a_plus_b_closed_form(const ModelParams& m) {
  if (m.epsilon == 0.0) throw DomainError("a + b closed form needs epsilon != 0");
  const double d = discriminant(m);
  if (d < 0.0) throw DomainError("a + b closed form needs p^2 + 4 epsilon (delta + q) >= 0");
  const double r = std::sqrt(d);
  return r * (m.p - r) / (2.0 * m.epsilon);
}

}  // namespace fdde
