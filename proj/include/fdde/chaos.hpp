#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fdde/core.hpp"
#include "fdde/solver.hpp"

namespace fdde::chaos {

struct BifurcationPoint {
  double tau = 0.0;
  std::vector<double> extrema;  ///< post-transient local maxima and minima, ascending
  bool diverged = false;
};

/// Delay embedding and neighbour-tracking settings for max_lyapunov.
struct EmbeddingConfig {
  int dim = 3;
  int lag = 1;             ///< samples
  int theiler_window = 3;  ///< neighbours closer than this in time are excluded
  int evolve_steps = 5;    ///< samples advanced between separation measurements
  double replacement_threshold = 0.0;  ///< separation that triggers a neighbour replacement
};

/// Strict 3-point local maxima and minima, returned sorted ascending.
std::vector<double> local_extrema(std::span<const double> series);

/// Number of groups in sorted values when neighbours closer than `tol` merge.
std::size_t count_clusters(std::span<const double> sorted_values, double tol = 1e-3);

/// Default initial value for scans: x2* + 0.1. Throws DomainError when X2
/// does not exist.
double default_history_value(const ModelParams& params);

/// Integrates once per delay value (params.tau is ignored), drops the leading
/// `transient_fraction` of each run and collects its local extrema. A run
/// that diverges yields an empty, flagged point. Delays are processed in
/// parallel; output order follows `taus`.
std::vector<BifurcationPoint> bifurcation_scan(const ModelParams& params, std::span<const double> taus,
                                               const SolverConfig& config, double transient_fraction,
                                               std::optional<double> history_value = std::nullopt);

/// First local minimum of the 16-bin auto mutual information (samples shared
/// linearly between neighbouring bins). Falls back to
/// the first lag where the autocorrelation drops below 1/e when no minimum
/// occurs up to length/10. Returns 1 when the lag-1 mutual information is
/// already at the level expected for independent samples.
/// Throws SeriesTooShort below 1000 samples, DegenerateSeries for a constant series.
int estimate_lag(std::span<const double> series);

/// dim 3, lag from estimate_lag, Theiler window lag * dim, 5 evolve steps and
/// a replacement threshold of 10% of the series range.
EmbeddingConfig default_embedding(std::span<const double> series);

/// Largest Lyapunov exponent from a scalar series by fixed-evolution-time
/// neighbour tracking: embed, follow a fiducial point and its nearest
/// neighbour for `evolve_steps`, accumulate ln(d_after / d_before), and pick a
/// replacement neighbour (smallest angular deviation within the threshold)
/// once the separation exceeds `replacement_threshold`. Result is in inverse
/// time units of `dt`.
/// Throws SeriesTooShort below 2000 samples, DegenerateSeries for a constant
/// series, ConfigError for an unusable embedding.
double max_lyapunov(std::span<const double> series, const EmbeddingConfig& config, double dt);

struct LyapunovEstimate {
  double tau = 0.0;
  double mle = 0.0;
  bool diverged = false;
  EmbeddingConfig embedding;
};

/// Integrate at params.tau, drop the transient, estimate the exponent with
/// default_embedding. A diverged run returns diverged = true and mle = +inf.
LyapunovEstimate lyapunov_for_delay(const ModelParams& params, const SolverConfig& config,
                                    double transient_fraction, std::optional<double> history_value = std::nullopt);

}  // namespace fdde::chaos
