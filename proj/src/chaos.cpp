#include "fdde/chaos.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "fdde/errors.hpp"

namespace fdde::chaos {

namespace {

constexpr int kBins = 16;
constexpr double kMaxReplacementAngle = 0.3;  // radians

void check_variance(std::span<const double> s) {
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  if (!(*hi > *lo)) throw DegenerateSeries("series has zero variance");
}

double series_range(std::span<const double> s) {
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return *hi - *lo;
}

std::span<const double> post_transient(const std::vector<double>& samples, double transient_fraction) {
  const auto skip = static_cast<std::size_t>(std::floor(transient_fraction * static_cast<double>(samples.size())));
  return std::span<const double>(samples).subspan(std::min(skip, samples.size()));
}

void check_transient(double transient_fraction) {
  if (!(transient_fraction >= 0.0 && transient_fraction < 1.0))
    throw ConfigError("transient fraction must lie in [0, 1)");
}

// Row-major delay vectors.
class Embedding {
 public:
  Embedding(std::span<const double> s, int dim, int lag) : dim_(dim) {
    const std::size_t span = static_cast<std::size_t>(dim - 1) * static_cast<std::size_t>(lag);
    count_ = s.size() > span ? s.size() - span : 0;
    data_.resize(count_ * static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < count_; ++i)
      for (int k = 0; k < dim; ++k) data_[i * dim + k] = s[i + static_cast<std::size_t>(k) * lag];
  }

  std::size_t size() const { return count_; }

  double distance(std::size_t i, std::size_t j) const {
    double acc = 0.0;
    for (int k = 0; k < dim_; ++k) {
      const double d = data_[i * dim_ + k] - data_[j * dim_ + k];
      acc += d * d;
    }
    return std::sqrt(acc);
  }

  // Cosine of the angle between (Y_a - Y_i) and (Y_b - Y_i).
  double cosine(std::size_t i, std::size_t a, std::size_t b) const {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int k = 0; k < dim_; ++k) {
      const double u = data_[a * dim_ + k] - data_[i * dim_ + k];
      const double v = data_[b * dim_ + k] - data_[i * dim_ + k];
      dot += u * v;
      na += u * u;
      nb += v * v;
    }
    if (na == 0.0 || nb == 0.0) return -1.0;
    return dot / std::sqrt(na * nb);
  }

 private:
  int dim_;
  std::size_t count_ = 0;
  std::vector<double> data_;
};

// Each sample is shared linearly between the two nearest bin centres. Hard
// binning of a finely sampled periodic signal gives a jagged MI curve with
// spurious minima.
struct SoftBin {
  int lower;
  double upper_weight;
};

std::vector<SoftBin> soft_bins(std::span<const double> series, double lo, double hi) {
  const double width = (hi - lo) / kBins;
  std::vector<SoftBin> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double u = std::clamp((series[i] - lo) / width - 0.5, 0.0, static_cast<double>(kBins - 1));
    const int k = std::min(static_cast<int>(u), kBins - 2);
    out[i] = {k, u - k};
  }
  return out;
}

double mutual_information(const std::vector<SoftBin>& bins, std::size_t lag) {
  const std::size_t n = bins.size() - lag;
  std::vector<double> joint(kBins * kBins, 0.0), px(kBins, 0.0), py(kBins, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const SoftBin a = bins[i], b = bins[i + lag];
    const double wa[2] = {1.0 - a.upper_weight, a.upper_weight}, wb[2] = {1.0 - b.upper_weight, b.upper_weight};
    for (int da = 0; da < 2; ++da) {
      px[a.lower + da] += wa[da];
      py[b.lower + da] += wb[da];
      for (int db = 0; db < 2; ++db) joint[(a.lower + da) * kBins + b.lower + db] += wa[da] * wb[db];
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  double mi = 0.0;
  for (int a = 0; a < kBins; ++a) {
    for (int b = 0; b < kBins; ++b) {
      const double pab = joint[a * kBins + b] * inv;
      if (pab > 0.0) mi += pab * std::log(pab / (px[a] * inv * py[b] * inv));
    }
  }
  return mi;
}

}  // namespace

std::vector<double> local_extrema(std::span<const double> s) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const bool is_max = s[i] > s[i - 1] && s[i] > s[i + 1];
    const bool is_min = s[i] < s[i - 1] && s[i] < s[i + 1];
    if (is_max || is_min) out.push_back(s[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_clusters(std::span<const double> sorted_values, double tol) {
  if (sorted_values.empty()) return 0;
  std::size_t clusters = 1;
  for (std::size_t i = 1; i < sorted_values.size(); ++i) {
    if (sorted_values[i] - sorted_values[i - 1] > tol) ++clusters;
  }
  return clusters;
}

double default_history_value(const ModelParams& params) {
  for (const auto& e : equilibria(params)) {
    if (e.branch == Branch::X2) return e.value + 0.1;
  }
  throw DomainError("X2 does not exist for these parameters; pass an explicit history value");
}

std::vector<BifurcationPoint> bifurcation_scan(const ModelParams& params, std::span<const double> taus,
                                               const SolverConfig& config, double transient_fraction,
                                               std::optional<double> history_value) {
  check_transient(transient_fraction);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(taus[i] > 0.0)) throw ConfigError("scan delays must be positive");
    if (i > 0 && !(taus[i] > taus[i - 1])) throw ConfigError("scan delays must be strictly ascending");
  }
  const History history = History::constant(history_value ? *history_value : default_history_value(params));

  std::vector<BifurcationPoint> out(taus.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < taus.size(); i = next++) {
      try {
        ModelParams at = params;
        at.tau = taus[i];
        const TimeSeries ts = integrate(at, history, config);
        BifurcationPoint& pt = out[i];
        pt.tau = taus[i];
        pt.diverged = ts.diverged;
        if (!ts.diverged) pt.extrema = local_extrema(post_transient(ts.samples, transient_fraction));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, taus.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

int estimate_lag(std::span<const double> series) {
  if (series.size() < 1000) throw SeriesTooShort("lag estimation needs at least 1000 samples");
  check_variance(series);

  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const auto bins = soft_bins(series, *lo_it, *hi_it);

  const std::size_t max_lag = series.size() / 10;
  // Hard-binned MI of independent samples sits near (B-1)^2 / (2n); soft
  // binning sits lower, so twice that is a safe ceiling.
  const double independence_level =
      2.0 * (kBins - 1) * (kBins - 1) / (2.0 * static_cast<double>(series.size() - 1));
  double prev = mutual_information(bins, 1);
  if (prev <= independence_level) return 1;
  for (std::size_t lag = 2; lag <= max_lag + 1; ++lag) {
    const double cur = mutual_information(bins, lag);
    if (cur > prev) return static_cast<int>(lag - 1);
    prev = cur;
  }

  // No minimum: first 1/e crossing of the autocorrelation.
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < series.size(); ++i) c += (series[i] - mean) * (series[i + lag] - mean);
    if (c / var < std::exp(-1.0)) return static_cast<int>(lag);
  }
  return static_cast<int>(max_lag);
}

EmbeddingConfig default_embedding(std::span<const double> series) {
  EmbeddingConfig cfg;
  cfg.dim = 3;
  cfg.lag = estimate_lag(series);
  cfg.theiler_window = cfg.lag * cfg.dim;
  cfg.evolve_steps = 5;
  cfg.replacement_threshold = 0.1 * series_range(series);
  return cfg;
}

double max_lyapunov(std::span<const double> series, const EmbeddingConfig& cfg, double dt) {
  if (series.size() < 2000) throw SeriesTooShort("Lyapunov estimation needs at least 2000 samples");
  check_variance(series);
  if (cfg.dim < 2 || cfg.lag < 1 || cfg.theiler_window < 0 || cfg.evolve_steps < 1 ||
      !(cfg.replacement_threshold > 0.0) || !(dt > 0.0))
    throw ConfigError("invalid embedding configuration");

  const Embedding emb(series, cfg.dim, cfg.lag);
  const std::size_t n = emb.size();
  const auto evolve = static_cast<std::size_t>(cfg.evolve_steps);
  const auto theiler = static_cast<std::size_t>(cfg.theiler_window);
  if (n < evolve + theiler + 2) throw SeriesTooShort("series too short for this embedding");
  const std::size_t last_start = n - 1 - evolve;  // a point must be evolvable

  auto excluded = [&](std::size_t i, std::size_t j) { return (i > j ? i - j : j - i) <= theiler; };

  auto nearest = [&](std::size_t i) {
    std::size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= last_start; ++j) {
      if (excluded(i, j)) continue;
      const double d = emb.distance(i, j);
      if (d > 0.0 && d < best_d) {
        best_d = d;
        best = j;
      }
    }
    return best;
  };

  // Candidate inside the threshold whose separation vector deviates least in
  // direction from the evolved one; the threshold doubles a few times before
  // falling back to the plain nearest neighbour.
  auto replacement = [&](std::size_t i, std::size_t old_j) {
    double scale = cfg.replacement_threshold;
    for (int attempt = 0; attempt < 4; ++attempt, scale *= 2.0) {
      std::size_t best = n;
      double best_cos = std::cos(kMaxReplacementAngle);
      for (std::size_t j = 0; j <= last_start; ++j) {
        if (excluded(i, j)) continue;
        const double d = emb.distance(i, j);
        if (!(d > 0.0) || d > scale) continue;
        const double c = emb.cosine(i, j, old_j);
        if (c > best_cos) {
          best_cos = c;
          best = j;
        }
      }
      if (best != n) return best;
    }
    return nearest(i);
  };

  std::size_t i = 0;
  std::size_t j = nearest(i);
  if (j == n) throw DegenerateSeries("no neighbour outside the Theiler window");
  double d_before = emb.distance(i, j);
  double log_sum = 0.0;
  double elapsed = 0.0;

  // Invariant at the top of each pass: i and j are both <= last_start.
  while (true) {
    i += evolve;
    j += evolve;
    const double d_after = emb.distance(i, j);
    if (d_after > 0.0) {
      log_sum += std::log(d_after / d_before);
      elapsed += static_cast<double>(evolve) * dt;
    }
    if (i > last_start) break;
    if (d_after > cfg.replacement_threshold || j > last_start || !(d_after > 0.0)) {
      const std::size_t k = replacement(i, j);
      if (k == n) break;
      j = k;
      d_before = emb.distance(i, j);
    } else {
      d_before = d_after;
    }
  }
  if (!(elapsed > 0.0)) throw DegenerateSeries("no separation could be tracked");
  return log_sum / elapsed;
}

LyapunovEstimate lyapunov_for_delay(const ModelParams& params, const SolverConfig& config,
                                    double transient_fraction, std::optional<double> history_value) {
  check_transient(transient_fraction);
  const History history = History::constant(history_value ? *history_value : default_history_value(params));
  const TimeSeries ts = integrate(params, history, config);
  LyapunovEstimate est;
  est.tau = params.tau;
  if (ts.diverged) {
    est.diverged = true;
    est.mle = std::numeric_limits<double>::infinity();
    return est;
  }
  const auto tail = post_transient(ts.samples, transient_fraction);
  est.embedding = default_embedding(tail);
  est.mle = max_lyapunov(tail, est.embedding, ts.h);
  return est;
}

}  // namespace fdde::chaos
