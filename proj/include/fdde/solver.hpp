#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fdde/core.hpp"

namespace fdde {

/// Uniformly sampled trajectory x(t0 + k h).
struct TimeSeries {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<double> samples;
  /// The run stopped early because |x| exceeded the divergence threshold (or
  /// became non-finite). `samples` then holds only the values before that.
  bool diverged = false;
  /// Step the caller asked for; differs from `h` when the grid was adjusted
  /// to make tau/h an integer.
  double requested_h = 0.0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t k) const { return t0 + static_cast<double>(k) * h; }
  bool step_adjusted() const { return h != requested_h; }
};

struct SolverConfig {
  double h = 0.01;
  double t_end = 100.0;
  double divergence_threshold = 1e8;
  /// Length of the memory window in time units. Empty means full memory.
  /// Truncating the convolution changes the answer (short-memory
  /// approximation); only use it for long exploratory runs.
  std::optional<double> memory_window;
};

/// Step actually used for delay `tau`: the value closest to `h` for which
/// tau / step is an integer. Returns `h` when tau == 0 or tau < h / 2.
double commensurate_step(double tau, double h);

/// Fractional Adams-Bashforth-Moulton predictor-corrector (one corrector
/// pass) for the Caputo FDDE. Delayed values come from the grid itself, or
/// from `history` while t_k - tau <= 0. x(0) = history(0).
///
/// Convolution sums run sequentially over j = 0..n in ascending order, so
/// results are bit-reproducible.
///
/// Throws ConfigError on an invalid grid and ValidationError on bad params.
TimeSeries integrate(const ModelParams& params, const History& history, const SolverConfig& config);

/// Classical RK4 with the method of steps for alpha == 1. Delayed values
/// inside a step come from cubic Hermite interpolation of the stored
/// solution and its slopes. Throws ConfigError when alpha != 1.
TimeSeries reference_rk4(const ModelParams& params, const History& history, const SolverConfig& config);

/// One-parameter Mittag-Leffler function E_alpha(z) by term-ratio-stopped
/// power series. Throws DomainError for |z| > 5 or alpha outside (0, 1].
double mittag_leffler_1p(double alpha, double z);

}  // namespace fdde
