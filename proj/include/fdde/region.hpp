#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace fdde {

/// Stability regions of X2 in the (q, delta) plane for epsilon > 0, p > 0.
///
/// The boundaries are a + b = 0, i.e. delta = -q, and a - b = 0 with a <= 0,
/// which splits into the two branches
///   g1 = (15p^2 - 16 q eps + 5 sqrt(9p^4 - 16 p^2 q eps)) / (8 eps),  q <= q2
///   g2 = (15p^2 - 16 q eps - 5 sqrt(9p^4 - 16 p^2 q eps)) / (8 eps),  q3 <= q <= q2
/// meeting at q2 = 9p^2/(16 eps).
namespace region {

struct Landmarks {
  double q0;      ///< minimum of g2, 11p^2/(64 eps)
  double q1;      ///< second zero of g2, 5p^2/(16 eps)
  double q2;      ///< meeting point of g1 and g2, 9p^2/(16 eps)
  double q3;      ///< left end of g2, -p^2/eps
  double delta0;  ///< g1(0) = 30p^2/(8 eps)
  double delta1;  ///< g2(q0) = -p^2/(32 eps)
};

enum class Label {
  A_DelayDependent,
  B_StableAllTau,
  Ci_DelayDependent,
  Cii_StableAllTau,
  Unstable_NoPositiveSum,
  NoRealEquilibrium,
  OnBifurcationCurve,
};

/// Short code used in CSV output: A, B, CI, CII, UNS, NOEQ, CURVE.
std::string_view code(Label l);
/// Inverse of code(); throws DomainError on an unknown code.
Label label_from_code(std::string_view c);

double g1(double p, double q, double eps);
double g2(double p, double q, double eps);
/// dg1/dq = -2 - 5p^2 / sqrt(9p^4 - 16 p^2 q eps); valid for q < q2.
double g1_slope(double p, double q, double eps);
/// dg2/dq = -2 + 5p^2 / sqrt(9p^4 - 16 p^2 q eps); valid for q < q2.
double g2_slope(double p, double q, double eps);

Landmarks landmarks(double p, double eps);

/// Region of the point (q, delta). Points within 1e-9 (in delta) of a
/// boundary curve are reported as OnBifurcationCurve.
Label classify_region(double p, double eps, double q, double delta);

struct Grid {
  std::vector<double> q;      ///< nq lattice values, ascending
  std::vector<double> delta;  ///< ndelta lattice values, ascending
  /// Row-major with q varying fastest: labels[i_delta * nq + i_q].
  std::vector<Label> labels;

  Label at(std::size_t iq, std::size_t idelta) const { return labels[idelta * q.size() + iq]; }
};

Grid sample_grid(double p, double eps, double q_min, double q_max, double delta_min, double delta_max,
                 std::size_t nq, std::size_t ndelta);

}  // namespace region
}  // namespace fdde
