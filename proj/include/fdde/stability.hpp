#pragma once

#include <optional>
#include <string_view>

#include "fdde/core.hpp"

namespace fdde {

enum class VerdictKind { StableAllDelays, UnstableAllDelays, DelayDependent };

/// Named stability statements for X1 and X2 of the cubic model.
enum class Theorem {
  X1_UnstablePositiveSum,   // delta + q > 0
  X1_StableAllDelays,       // delta + q < 0, delta >= q
  X1_DelayDependent,        // delta + q < 0, delta < q
  X2_StableAllDelays,       // eps > 0, p > 0, 0 < -q < delta < -2q
  X2_DelayDependentPosP,    // eps > 0, p > 0, delta < -p^2/(32 eps), q + delta > 0
  X2_UnstablePosEpsPosP,    // eps > 0, p > 0, q + delta < 0
  X2_UnstableNegEpsPosP,    // eps < 0, p > 0, q + delta < 0
  X2_DelayDependentNegP,    // eps > 0, p < 0, delta <= 3p^2/(4 eps), q > (-p^2 - 4 delta eps)/(4 eps)
  X2_UnstableNegEpsNegP,    // eps < 0, p < 0, delta + q < 0
};

std::string_view to_string(VerdictKind k);
std::string_view to_string(Theorem t);

struct StabilityVerdict {
  VerdictKind kind = VerdictKind::StableAllDelays;
  std::optional<double> tau_star;  ///< present iff kind == DelayDependent
  /// Theorem predicate that produced the verdict; empty when only the general
  /// linear classifier applied.
  std::optional<Theorem> theorem;
};

struct CrossingPoint {
  double omega = 0.0;
  double tau = 0.0;
};

/// Three-way classification of D^alpha xi = a xi + b xi(t - tau):
///   b < -|a|              delay dependent, with tau_star = crit_delay
///   b > -a                unstable for every tau
///   a < 0 and a < b < -a  stable for every tau
/// Throws BoundaryError within 1e-12 of b = -|a| or b = -a, DomainError for
/// alpha outside (0, 1].
StabilityVerdict classify_linear(double a, double b, double alpha);

/// Smallest delay at which a root pair of s^alpha = a + b e^{-s tau} reaches
/// the imaginary axis. Closed form in the crossing modulus
/// M = a cos(alpha pi/2) +- sqrt(b^2 - a^2 sin^2(alpha pi/2)):
///   tau = arccos((M cos(alpha pi/2) - a) / b) / M^(1/alpha).
/// Throws DomainError unless b < -|a|.
double crit_delay(double a, double b, double alpha);

/// Independent route to the crossing: scans |(i w)^alpha - a| = |b| for w > 0,
/// bisects each sign change, and recovers tau from the phase of
/// ((i w)^alpha - a) / b. Returns the crossing with the smallest tau.
/// Throws NoCrossingError if none is found.
CrossingPoint crossing_oracle(double a, double b, double alpha);

/// |(i w)^alpha - a - b e^{-i w tau}|.
double characteristic_residual(double a, double b, double alpha, double omega, double tau);

/// Linear verdict for `eq`, cross-checked against every matching theorem
/// predicate. Throws ConsistencyError if a predicate disagrees with the
/// general classifier; propagates BoundaryError.
StabilityVerdict classify_equilibrium(const ModelParams& params, const Equilibrium& eq);

/// The theorem predicate that holds for (params, branch), if any. The
/// predicates of each branch are mutually exclusive; X3 has none.
struct TheoremMatch {
  Theorem id;
  VerdictKind implies;
};
std::optional<TheoremMatch> matching_theorem(const ModelParams& params, Branch branch);

}  // namespace fdde
