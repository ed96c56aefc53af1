#include "fdde/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "fdde/errors.hpp"

namespace fdde {

namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    std::ostringstream os;
    os << "alpha must lie in (0, 1], got " << alpha;
    throw DomainError(os.str());
  }
}

std::complex<double> frac_power_imag(double omega, double alpha) {
  return std::polar(std::pow(omega, alpha), alpha * kPi / 2.0);
}

}  // namespace

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::StableAllDelays: return "StableAllDelays";
    case VerdictKind::UnstableAllDelays: return "UnstableAllDelays";
    case VerdictKind::DelayDependent: return "DelayDependent";
  }
  return "?";
}

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::X1_UnstablePositiveSum: return "X1_UnstablePositiveSum";
    case Theorem::X1_StableAllDelays: return "X1_StableAllDelays";
    case Theorem::X1_DelayDependent: return "X1_DelayDependent";
    case Theorem::X2_StableAllDelays: return "X2_StableAllDelays";
    case Theorem::X2_DelayDependentPosP: return "X2_DelayDependentPosP";
    case Theorem::X2_UnstablePosEpsPosP: return "X2_UnstablePosEpsPosP";
    case Theorem::X2_UnstableNegEpsPosP: return "X2_UnstableNegEpsPosP";
    case Theorem::X2_DelayDependentNegP: return "X2_DelayDependentNegP";
    case Theorem::X2_UnstableNegEpsNegP: return "X2_UnstableNegEpsNegP";
  }
  return "?";
}

StabilityVerdict classify_linear(double a, double b, double alpha) {
  check_alpha(alpha);
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("linear coefficients must be finite");
  if (std::abs(b + std::abs(a)) <= kBoundaryTol || std::abs(b + a) <= kBoundaryTol) {
    std::ostringstream os;
    os.precision(17);
    os << "(a, b) = (" << a << ", " << b << ") lies on a stability boundary";
    throw BoundaryError(os.str());
  }
  StabilityVerdict v;
  if (b < -std::abs(a)) {
    v.kind = VerdictKind::DelayDependent;
    v.tau_star = crit_delay(a, b, alpha);
  } else if (b > -a) {
    v.kind = VerdictKind::UnstableAllDelays;
  } else {
    // Remaining open set: a < 0 and a < b < -a.
    v.kind = VerdictKind::StableAllDelays;
  }
  return v;
}

double crit_delay(double a, double b, double alpha) {
  check_alpha(alpha);
  if (!(b < -std::abs(a))) {
    std::ostringstream os;
    os << "critical delay needs b < -|a|, got a = " << a << ", b = " << b;
    throw DomainError(os.str());
  }
  const double c = std::cos(alpha * kPi / 2.0);
  const double s = std::sin(alpha * kPi / 2.0);
  const double radicand = b * b - a * a * s * s;
  if (radicand < 0.0) throw DomainError("critical delay radicand is negative");
  const double root = std::sqrt(radicand);

  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    const double modulus = a * c + sign * root;  // omega^alpha at the crossing
    if (!(modulus > 0.0)) continue;
    const double cosine = std::clamp((modulus * c - a) / b, -1.0, 1.0);
    const double tau = std::acos(cosine) / std::pow(modulus, 1.0 / alpha);
    if (tau > 0.0 && tau < best) best = tau;
  }
  if (!std::isfinite(best)) throw DomainError("no admissible branch for the critical delay");
  return best;
}

double characteristic_residual(double a, double b, double alpha, double omega, double tau) {
  const std::complex<double> lhs = frac_power_imag(omega, alpha);
  const std::complex<double> rhs = a + b * std::polar(1.0, -omega * tau);
  return std::abs(lhs - rhs);
}

CrossingPoint crossing_oracle(double a, double b, double alpha) {
  check_alpha(alpha);
  if (!(b < -std::abs(a))) throw DomainError("crossing oracle needs b < -|a|");

  // Modulus condition |(i w)^alpha - a|^2 - b^2 = 0.
  auto modulus_gap = [&](double w) { return std::norm(frac_power_imag(w, alpha) - a) - b * b; };

  const double w_max = 2.0 * std::pow(std::abs(a) + std::abs(b), 1.0 / alpha);
  constexpr int kScan = 4000;
  std::vector<double> roots;
  double w_prev = 0.0;
  double g_prev = modulus_gap(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double w = w_max * static_cast<double>(i) / kScan;
    const double g = modulus_gap(w);
    if (g == 0.0) {
      roots.push_back(w);
    } else if ((g_prev < 0.0) != (g < 0.0) && g_prev != 0.0) {
      double lo = w_prev, hi = w;
      const bool lo_negative = g_prev < 0.0;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if ((modulus_gap(mid) < 0.0) == lo_negative)
          lo = mid;
        else
          hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    w_prev = w;
    g_prev = g;
  }

  CrossingPoint best{0.0, std::numeric_limits<double>::infinity()};
  for (double w : roots) {
    if (!(w > 0.0)) continue;
    // e^{-i w tau} = ((i w)^alpha - a) / b
    const std::complex<double> target = (frac_power_imag(w, alpha) - a) / b;
    double phase = -std::arg(target);
    if (phase <= 0.0) phase += 2.0 * kPi;
    const double tau = phase / w;
    if (tau < best.tau) best = {w, tau};
  }
  if (!std::isfinite(best.tau)) throw NoCrossingError("no imaginary-axis crossing found");
  const double residual = characteristic_residual(a, b, alpha, best.omega, best.tau);
  if (residual > 1e-9 * std::max(1.0, std::abs(a) + std::abs(b))) {
    std::ostringstream os;
    os << "crossing residual " << residual << " exceeds tolerance";
    throw NoCrossingError(os.str());
  }
  return best;
}

std::optional<TheoremMatch> matching_theorem(const ModelParams& m, Branch branch) {
  const double d = m.delta, e = m.epsilon, p = m.p, q = m.q;
  using enum VerdictKind;
  if (branch == Branch::X1) {
    if (d + q > 0.0) return TheoremMatch{Theorem::X1_UnstablePositiveSum, UnstableAllDelays};
    if (d + q < 0.0 && d >= q) return TheoremMatch{Theorem::X1_StableAllDelays, StableAllDelays};
    if (d + q < 0.0 && d < q) return TheoremMatch{Theorem::X1_DelayDependent, DelayDependent};
    return std::nullopt;
  }
  if (branch != Branch::X2) return std::nullopt;
  if (e > 0.0 && p > 0.0) {
    if (0.0 < -q && -q < d && d < -2.0 * q) return TheoremMatch{Theorem::X2_StableAllDelays, StableAllDelays};
    if (d < -p * p / (32.0 * e) && q + d > 0.0)
      return TheoremMatch{Theorem::X2_DelayDependentPosP, DelayDependent};
    if (q + d < 0.0) return TheoremMatch{Theorem::X2_UnstablePosEpsPosP, UnstableAllDelays};
  }
  if (e < 0.0 && p > 0.0 && q + d < 0.0) return TheoremMatch{Theorem::X2_UnstableNegEpsPosP, UnstableAllDelays};
  if (e > 0.0 && p < 0.0 && d <= 3.0 * p * p / (4.0 * e) && q > (-p * p - 4.0 * d * e) / (4.0 * e))
    return TheoremMatch{Theorem::X2_DelayDependentNegP, DelayDependent};
  if (e < 0.0 && p < 0.0 && d + q < 0.0) return TheoremMatch{Theorem::X2_UnstableNegEpsNegP, UnstableAllDelays};
  return std::nullopt;
}

StabilityVerdict classify_equilibrium(const ModelParams& params, const Equilibrium& eq) {
  check_alpha(params.alpha);
  const LinearCoeffs lc = linearize(params, eq.value);
  StabilityVerdict v = classify_linear(lc.a, lc.b, params.alpha);
  if (auto match = matching_theorem(params, eq.branch)) {
    if (match->implies != v.kind) {
      std::ostringstream os;
      os << to_string(match->id) << " predicts " << to_string(match->implies) << " but (a, b) = (" << lc.a
         << ", " << lc.b << ") classifies as " << to_string(v.kind);
      throw ConsistencyError(os.str());
    }
    v.theorem = match->id;
  }
  return v;
}

}  // namespace fdde
