#pragma once

#include <functional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fdde {

/// Constants of D^alpha x(t) = delta x(t-tau) - epsilon x(t-tau)^3 - p x(t)^2 + q x(t).
struct ModelParams {
  double alpha = 1.0;  ///< derivative order, 0 < alpha <= 1
  double tau = 0.0;    ///< delay, >= 0
  double delta = 0.0;
  double epsilon = 0.0;
  double p = 0.0;
  double q = 0.0;
};

/// Throws ValidationError unless alpha in (0,1], tau >= 0 and every field is finite.
void validate(const ModelParams& params);

enum class Branch { X1, X2, X3 };

std::string_view to_string(Branch b);

struct Equilibrium {
  double value = 0.0;
  Branch branch = Branch::X1;
};

/// Coefficients of the local linearization D^alpha xi = a xi(t) + b xi(t - tau).
struct LinearCoeffs {
  double a = 0.0;
  double b = 0.0;
};

/// Initial function phi on [-tau, 0].
class History {
 public:
  struct Constant {
    double value;
  };
  struct Sampled {
    std::vector<std::pair<double, double>> points;  // (t, x), strictly increasing t
  };

  static History constant(double value);
  /// `points` must be strictly increasing in t and cover [-tau, 0] for the
  /// delay it is used with. Four or more points use monotone cubic (PCHIP)
  /// interpolation, two or three fall back to linear.
  static History sampled(std::vector<std::pair<double, double>> points);

  double operator()(double t) const;

  bool is_constant() const { return std::holds_alternative<Constant>(kind_); }
  const std::variant<Constant, Sampled>& kind() const { return kind_; }

  /// Throws ConfigError when a sampled grid does not cover [-tau, 0].
  void check_covers(double tau) const;

 private:
  explicit History(std::variant<Constant, Sampled> kind);

  std::variant<Constant, Sampled> kind_;
  std::function<double(double)> interp_;
};

/// Right-hand side f(x, x_delayed) of the model.
double rhs(const ModelParams& params, double x, double x_delayed);

/// Steady states sorted X1, X2, X3. X1 = 0 is always present.
std::vector<Equilibrium> equilibria(const ModelParams& params);

/// Partial derivatives of rhs at (x_star, x_star).
LinearCoeffs linearize(const ModelParams& params, double x_star);

/// a + b at the X2 branch, written in terms of the model constants only:
/// sqrt(D) (p - sqrt(D)) / (2 epsilon) with D = p^2 + 4 epsilon (delta + q).
/// Throws DomainError when D < 0 or epsilon == 0.
double a_plus_b_closed_form(const ModelParams& params);

/// p^2 + 4 epsilon (delta + q), with values in [-1e-14, 0) clamped to 0.
double discriminant(const ModelParams& params);

}  // namespace fdde
