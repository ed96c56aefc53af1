#include "fdde/region.hpp"

#include <cmath>
#include <sstream>

#include "fdde/errors.hpp"

namespace fdde::region {

namespace {

constexpr double kCurveTol = 1e-9;

void check_positive(double p, double eps) {
  if (!(p > 0.0) || !(eps > 0.0) || !std::isfinite(p) || !std::isfinite(eps)) {
    std::ostringstream os;
    os << "region geometry needs p > 0 and epsilon > 0, got p = " << p << ", epsilon = " << eps;
    throw DomainError(os.str());
  }
}

double q2_of(double p, double eps) { return 9.0 * p * p / (16.0 * eps); }
double q3_of(double p, double eps) { return -p * p / eps; }

// sqrt(9p^4 - 16 p^2 q eps); the radicand is zero at q2 and rounding can push
// it slightly negative there.
double curve_root(double p, double q, double eps) {
  const double r = 9.0 * p * p * p * p - 16.0 * p * p * q * eps;
  if (r < 0.0) {
    if (r > -1e-12 * 9.0 * p * p * p * p) return 0.0;
    std::ostringstream os;
    os << "q = " << q << " lies beyond q2 = " << q2_of(p, eps);
    throw DomainError(os.str());
  }
  return std::sqrt(r);
}

}  // namespace

std::string_view code(Label l) {
  switch (l) {
    case Label::A_DelayDependent: return "A";
    case Label::B_StableAllTau: return "B";
    case Label::Ci_DelayDependent: return "CI";
    case Label::Cii_StableAllTau: return "CII";
    case Label::Unstable_NoPositiveSum: return "UNS";
    case Label::NoRealEquilibrium: return "NOEQ";
    case Label::OnBifurcationCurve: return "CURVE";
  }
  return "?";
}

Label label_from_code(std::string_view c) {
  for (Label l : {Label::A_DelayDependent, Label::B_StableAllTau, Label::Ci_DelayDependent, Label::Cii_StableAllTau,
                  Label::Unstable_NoPositiveSum, Label::NoRealEquilibrium, Label::OnBifurcationCurve}) {
    if (code(l) == c) return l;
  }
  throw DomainError("unknown region code: " + std::string(c));
}

double g1(double p, double q, double eps) {
  check_positive(p, eps);
  return (15.0 * p * p - 16.0 * q * eps + 5.0 * curve_root(p, q, eps)) / (8.0 * eps);
}

double g2(double p, double q, double eps) {
  check_positive(p, eps);
  if (q < q3_of(p, eps)) {
    std::ostringstream os;
    os << "g2 is only a bifurcation curve for q >= q3 = " << q3_of(p, eps) << ", got " << q;
    throw DomainError(os.str());
  }
  return (15.0 * p * p - 16.0 * q * eps - 5.0 * curve_root(p, q, eps)) / (8.0 * eps);
}

double g1_slope(double p, double q, double eps) {
  check_positive(p, eps);
  return -2.0 - 5.0 * p * p / curve_root(p, q, eps);
}

double g2_slope(double p, double q, double eps) {
  check_positive(p, eps);
  return -2.0 + 5.0 * p * p / curve_root(p, q, eps);
}

Landmarks landmarks(double p, double eps) {
  check_positive(p, eps);
  const double p2 = p * p;
  return {11.0 * p2 / (64.0 * eps), 5.0 * p2 / (16.0 * eps), q2_of(p, eps),
          q3_of(p, eps),            30.0 * p2 / (8.0 * eps), -p2 / (32.0 * eps)};
}

Label classify_region(double p, double eps, double q, double delta) {
  check_positive(p, eps);
  if (p * p + 4.0 * eps * (delta + q) < 0.0) return Label::NoRealEquilibrium;

  const double q2 = q2_of(p, eps);
  if (std::abs(delta + q) <= kCurveTol) return Label::OnBifurcationCurve;
  const bool has_g1 = q <= q2;
  const bool in_strip = q >= 0.0 && q <= q2;  // where g2 bounds a stable region
  const double upper = has_g1 ? g1(p, q, eps) : 0.0;
  const double lower = in_strip ? g2(p, q, eps) : 0.0;
  if (has_g1 && std::abs(delta - upper) <= kCurveTol) return Label::OnBifurcationCurve;
  if (in_strip && std::abs(delta - lower) <= kCurveTol) return Label::OnBifurcationCurve;

  if (delta < -q) return Label::Unstable_NoPositiveSum;
  if (!has_g1) return Label::A_DelayDependent;
  if (q < 0.0) return delta < upper ? Label::B_StableAllTau : Label::A_DelayDependent;
  if (delta < lower) return Label::Ci_DelayDependent;
  if (delta < upper) return Label::Cii_StableAllTau;
  return Label::Ci_DelayDependent;
}

Grid sample_grid(double p, double eps, double q_min, double q_max, double delta_min, double delta_max,
                 std::size_t nq, std::size_t ndelta) {
  check_positive(p, eps);
  if (!std::isfinite(q_min) || !std::isfinite(q_max) || !std::isfinite(delta_min) || !std::isfinite(delta_max))
    throw ConfigError("grid ranges must be finite");
  if (!(q_min < q_max) || !(delta_min < delta_max)) throw ConfigError("grid ranges must be non-empty");
  if (nq < 2 || ndelta < 2) throw ConfigError("grid needs at least two points per axis");

  Grid g;
  g.q.resize(nq);
  g.delta.resize(ndelta);
  auto fill = [](std::vector<double>& v, double lo, double hi) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    v.back() = hi;
  };
  fill(g.q, q_min, q_max);
  fill(g.delta, delta_min, delta_max);
  g.labels.reserve(nq * ndelta);
  for (std::size_t j = 0; j < ndelta; ++j) {
    for (std::size_t i = 0; i < nq; ++i) g.labels.push_back(classify_region(p, eps, g.q[i], g.delta[j]));
  }
  return g;
}

}  // namespace fdde::region
