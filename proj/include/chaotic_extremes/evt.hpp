#ifndef CHAOTIC_EXTREMES_EVT_HPP
#define CHAOTIC_EXTREMES_EVT_HPP

// Extreme-value experiments on the stationary process X_n = f_a^n(X_0),
// X_0 ~ G_a: block maxima and their 1/2-Weibull limit, the anti-clustering
// sum D'(u_n), decay of exceedance-indicator correlations, return-depth
// frequencies and a central-limit check for Birkhoff sums.
//
// Every stochastic routine draws replica i from substream(seed, i) and
// reduces integer counters or index-ordered values, so results do not depend
// on the number of threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "errors.hpp"
#include "invariant_measure.hpp"
#include "map_parameter.hpp"
#include "parallel.hpp"
#include "quadratic_core.hpp"
#include "random.hpp"

namespace chaotic_extremes {

/// Limit law of a_n (M_n - 1): H(x) = exp(-sqrt(-x)) for x <= 0, 1 above.
inline double weibull_H(double x) noexcept {
  if (x > 0.0) return 1.0;
  return std::exp(-std::sqrt(-x));
}

/// Inverse of weibull_H on (0, 1].
inline double weibull_H_inverse(double p) {
  detail::require_argument(p > 0.0 && p <= 1.0, "weibull_H_inverse: p must lie in (0, 1]");
  const double l = std::log(p);
  return -(l * l);
}

inline double standard_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double binomial_stderr(double p, std::size_t count) noexcept {
  return count == 0 ? 0.0 : std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(count));
}

/// The 13 abscissae of the reference simulation table, ascending.
inline constexpr std::array<double, 13> table1_grid{-50.0, -30.0, -10.0, -8.0, -5.0, -3.0, -1.0,
                                                    -0.7,  -0.5,  -0.3,  -0.1, -0.01, -0.001};

// ---------------------------------------------------------------------------
// Block maxima

struct MaximaExperiment {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  double a_n = 0.0;
  double b_n = 1.0;
  std::vector<double> normalized;  // a_n (M_n - b_n), in replica order
};

namespace detail {

inline void check_model_matches(const MapParameter& params, const MeasureModel& model) {
  if (params.a() != model.a()) {
    std::ostringstream os;
    os << "measure model was built for a = " << model.a() << " but the map has a = " << params.a();
    throw argument_error(os.str());
  }
}

}  // namespace detail

/// M_n = max{X_0, ..., X_{n-1}} for one stationary start drawn from `g`.
template <class URBG>
double block_maximum(const MapParameter& params, const MeasureModel& model, std::size_t n,
                     URBG& g) {
  double x = model.draw(g);
  double maximum = x;
  auto reseed = [&] { return model.draw(g); };
  for (std::size_t k = 1; k < n; ++k) {
    detail::advance(params, x, reseed);
    maximum = std::max(maximum, x);
  }
  return maximum;
}

/// m independent replicas of a_n (M_n - 1); replica i uses substream(seed, i).
inline MaximaExperiment sample_maxima(const MapParameter& params, const MeasureModel& model,
                                      std::size_t n, std::size_t m, std::uint64_t seed,
                                      unsigned threads = 0) {
  detail::require_argument(n >= 2, "sample_maxima: n must be at least 2");
  detail::require_argument(m >= 1, "sample_maxima: m must be at least 1");
  detail::check_model_matches(params, model);
  const auto norm = normalizer(model, n);

  MaximaExperiment exp;
  exp.n = n;
  exp.m = m;
  exp.seed = seed;
  exp.a_n = norm.a_n;
  exp.b_n = norm.b_n;
  exp.normalized = parallel_map(m, threads, [&](std::size_t i) {
    Engine g = substream(seed, i);
    return norm.a_n * (block_maximum(params, model, n, g) - norm.b_n);
  });
  return exp;
}

/// Fraction of `sample` at or below each point of a sorted grid.
inline std::vector<double> ecdf_at(std::span<const double> sample, std::span<const double> grid) {
  detail::require_argument(std::is_sorted(grid.begin(), grid.end()),
                           "ecdf_at: grid must be sorted ascending");
  detail::require_argument(!sample.empty(), "ecdf_at: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const auto count = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    out.push_back(static_cast<double>(count) / static_cast<double>(sorted.size()));
  }
  return out;
}

inline std::vector<double> ecdf_at(const MaximaExperiment& exp, std::span<const double> grid) {
  return ecdf_at(std::span<const double>(exp.normalized), grid);
}

/// sup_x |F_m(x) - F(x)| for a continuous F, taking both one-sided limits of
/// the empirical step function at every sample point.
template <class Cdf>
double ks_distance(std::span<const double> sample, Cdf&& F) {
  detail::require_argument(!sample.empty(), "ks_distance: empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double m = static_cast<double>(s.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double f = F(s[i]);
    d = std::max({d, std::abs(static_cast<double>(j) / m - f), std::abs(static_cast<double>(i) / m - f)});
    i = j;
  }
  return d;
}

/// Kolmogorov distance of the normalized maxima to H.
inline double ks_distance(const MaximaExperiment& exp) {
  detail::require_argument(exp.normalized.size() >= 10, "ks_distance: need at least 10 replicas");
  return ks_distance(std::span<const double>(exp.normalized), weibull_H);
}

// ---------------------------------------------------------------------------
// Condition D'(u_n)

enum class DprimeMode {
  orbit,          // one orbit per trial, all lags read off it
  strict,         // a fresh start for every (trial, lag) pair
  iid_surrogate,  // X_1, X_2, ... drawn independently from G_a
};

struct DprimeResult {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t lags = 0;  // floor(n/k)
  double tau = 0.0;
  DprimeMode mode = DprimeMode::orbit;
  LevelSpec level;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
  std::uint64_t start_exceedances = 0;
  std::uint64_t joint_exceedances = 0;
  // Exceedances X_j > u_n (j >= 1, genuine map step) whose predecessor is
  // shallower than Theta(n). Always 0 unless floating point misbehaves.
  std::uint64_t deep_return_violations = 0;
  // n floor(n/k) (1 - G(u_n))^2, the value for independent draws.
  double iid_reference = 0.0;
};

namespace detail {

struct DprimeCounts {
  std::uint64_t starts = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::uint64_t violations = 0;
  std::vector<std::uint64_t> per_lag;  // strict mode only

  void merge(const DprimeCounts& o) {
    starts += o.starts;
    sum += o.sum;
    sum_sq += o.sum_sq;
    violations += o.violations;
    if (per_lag.size() < o.per_lag.size()) per_lag.resize(o.per_lag.size());
    for (std::size_t j = 0; j < o.per_lag.size(); ++j) per_lag[j] += o.per_lag[j];
  }
};

inline constexpr std::size_t dprime_chunk = 1u << 14;

}  // namespace detail

/// Monte-Carlo estimate of n sum_{j=1}^{floor(n/k)} P{X_0 > u_n, X_j > u_n}
/// with u_n = G^{-1}(1 - tau/n), from `trials` stationary starts.
///
/// In orbit and surrogate modes the standard error comes from the sample
/// variance of the per-trial joint-exceedance count; in strict mode, where
/// the lags are independent, it is the binomial error summed over lags.
inline DprimeResult dprime_estimate(const MapParameter& params, const MeasureModel& model,
                                    std::size_t n, std::size_t k, double tau, std::size_t trials,
                                    std::uint64_t seed, DprimeMode mode = DprimeMode::orbit,
                                    unsigned threads = 0) {
  detail::require_argument(k >= 2, "dprime_estimate: k must be at least 2");
  detail::require_argument(n >= k, "dprime_estimate: n must be at least k");
  detail::require_argument(trials >= 1'000, "dprime_estimate: need at least 1000 trials");
  detail::check_model_matches(params, model);

  DprimeResult r;
  r.n = n;
  r.k = k;
  r.lags = n / k;
  r.tau = tau;
  r.mode = mode;
  r.trials = trials;
  r.level = level(model, n, tau, params.delta_exp());
  const double u = r.level.u_n;
  const double deep_radius = std::exp(-static_cast<double>(r.level.theta));
  const std::size_t L = r.lags;

  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    detail::DprimeCounts acc;
    if (mode == DprimeMode::strict) acc.per_lag.assign(L, 0);
    for (std::size_t t = begin; t < end; ++t) {
      Engine g = substream(seed, t);
      auto reseed = [&] { return model.draw(g); };
      std::uint64_t y = 0;
      switch (mode) {
        case DprimeMode::orbit: {
          double x = model.draw(g);
          if (!(x > u)) break;
          ++acc.starts;
          for (std::size_t j = 1; j <= L; ++j) {
            const double prev = x;
            const bool restarted = detail::advance(params, x, reseed);
            if (x > u) {
              ++y;
              if (!restarted && !(std::abs(prev) < deep_radius)) ++acc.violations;
            }
          }
          break;
        }
        case DprimeMode::strict: {
          for (std::size_t j = 1; j <= L; ++j) {
            double x = model.draw(g);
            if (!(x > u)) continue;
            ++acc.starts;
            for (std::size_t s = 0; s < j; ++s) detail::advance(params, x, reseed);
            if (x > u) {
              ++y;
              ++acc.per_lag[j - 1];
            }
          }
          break;
        }
        case DprimeMode::iid_surrogate: {
          if (!(model.draw(g) > u)) break;
          ++acc.starts;
          for (std::size_t j = 1; j <= L; ++j) {
            if (model.draw(g) > u) ++y;
          }
          break;
        }
      }
      acc.sum += y;
      acc.sum_sq += y * y;
    }
    return acc;
  };

  detail::DprimeCounts total;
  if (mode == DprimeMode::strict) total.per_lag.assign(L, 0);
  for (const auto& c : parallel_chunks(trials, threads, run_chunk, detail::dprime_chunk)) {
    total.merge(c);
  }

  const double T = static_cast<double>(trials);
  const double nn = static_cast<double>(n);
  r.start_exceedances = total.starts;
  r.joint_exceedances = total.sum;
  r.deep_return_violations = total.violations;
  r.estimate = nn * static_cast<double>(total.sum) / T;
  if (mode == DprimeMode::strict) {
    double var = 0.0;
    for (auto c : total.per_lag) {
      const double p = static_cast<double>(c) / T;
      var += p * (1.0 - p) / T;
    }
    r.stderr_ = nn * std::sqrt(var);
  } else {
    const double mean = static_cast<double>(total.sum) / T;
    const double var =
        std::max(0.0, (static_cast<double>(total.sum_sq) - T * mean * mean) / (T - 1.0));
    r.stderr_ = nn * std::sqrt(var / T);
  }
  const double p = model.upper_tail_at_gap(r.level.tail_gap);
  r.iid_reference = nn * static_cast<double>(L) * p * p;
  return r;
}

// ---------------------------------------------------------------------------
// Exceedance-indicator correlations

struct CorrelationPoint {
  std::size_t lag = 0;
  double p_joint = 0.0;         // P{X_0 > u, X_j > u}
  double p_marginal_sq = 0.0;   // P{X_0 > u}^2
  double corr = 0.0;            // p_joint - p_marginal_sq
  double stderr_ = 0.0;
};

/// C(j) = P{X_0 > u, X_j > u} - P{X_0 > u}^2 for j = 0..j_max.
///
/// The standard error is the delta-method error of the estimator, from the
/// per-trial influence I_0 I_j - 2 p I_0.
inline std::vector<CorrelationPoint> indicator_correlation(const MapParameter& params,
                                                           const MeasureModel& model, double u,
                                                           std::size_t j_max, std::size_t trials,
                                                           std::uint64_t seed,
                                                           unsigned threads = 0) {
  detail::require_argument(u < 1.0, "indicator_correlation: u must be below 1");
  detail::require_argument(j_max >= 1, "indicator_correlation: j_max must be at least 1");
  detail::require_argument(trials >= 1, "indicator_correlation: need at least one trial");
  detail::check_model_matches(params, model);

  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint64_t> joint(j_max + 1, 0);
    for (std::size_t t = begin; t < end; ++t) {
      Engine g = substream(seed, t);
      double x = model.draw(g);
      if (!(x > u)) continue;
      ++joint[0];
      auto reseed = [&] { return model.draw(g); };
      for (std::size_t j = 1; j <= j_max; ++j) {
        detail::advance(params, x, reseed);
        if (x > u) ++joint[j];
      }
    }
    return joint;
  };

  std::vector<std::uint64_t> joint(j_max + 1, 0);
  for (const auto& c : parallel_chunks(trials, threads, run_chunk, detail::dprime_chunk)) {
    for (std::size_t j = 0; j <= j_max; ++j) joint[j] += c[j];
  }

  const double T = static_cast<double>(trials);
  const double p = static_cast<double>(joint[0]) / T;
  std::vector<CorrelationPoint> out;
  out.reserve(j_max + 1);
  for (std::size_t j = 0; j <= j_max; ++j) {
    CorrelationPoint pt;
    pt.lag = j;
    pt.p_joint = static_cast<double>(joint[j]) / T;
    pt.p_marginal_sq = p * p;
    pt.corr = pt.p_joint - pt.p_marginal_sq;
    const double mean_psi = pt.p_joint - 2.0 * p * p;
    const double mean_psi_sq = pt.p_joint * (1.0 - 4.0 * p) + 4.0 * p * p * p;
    pt.stderr_ = std::sqrt(std::max(0.0, mean_psi_sq - mean_psi * mean_psi) / T);
    out.push_back(pt);
  }
  return out;
}

/// Decay rate varsigma from a log-linear fit of |C(j)| over the run of lags
/// j = 1, 2, ... whose correlation exceeds `sigmas` standard errors. Empty
/// when fewer than two lags qualify, i.e. mixing is indistinguishable from
/// immediate.
inline std::optional<double> fit_decay_rate(std::span<const CorrelationPoint> points,
                                            double sigmas = 3.0) {
  std::vector<double> lags, logs;
  for (const auto& pt : points) {
    if (pt.lag == 0) continue;
    if (!(std::abs(pt.corr) > sigmas * pt.stderr_) || pt.corr == 0.0) break;
    lags.push_back(static_cast<double>(pt.lag));
    logs.push_back(std::log(std::abs(pt.corr)));
  }
  if (lags.size() < 2) return std::nullopt;
  return std::exp(least_squares_slope(lags, logs));
}

/// T(n) = ceil(4 log n / log(1/varsigma)).
inline std::size_t turning_time(double varsigma, std::size_t n) {
  detail::require_argument(varsigma > 0.0 && varsigma < 1.0,
                           "turning_time: varsigma must lie in (0, 1)");
  detail::require_argument(n >= 2, "turning_time: n must be at least 2");
  return static_cast<std::size_t>(
      std::ceil(4.0 * std::log(static_cast<double>(n)) / std::log(1.0 / varsigma)));
}

// ---------------------------------------------------------------------------
// Return depths

struct DepthHistogram {
  int theta_min = 0;
  std::size_t trials = 0;
  std::uint64_t critical_count = 0;   // visits to (-delta, delta), any depth
  std::vector<std::uint64_t> counts;  // counts[g] for depth g (below theta_min stays 0)

  double frequency(int gamma) const {
    if (gamma < 0 || static_cast<std::size_t>(gamma) >= counts.size()) return 0.0;
    return static_cast<double>(counts[static_cast<std::size_t>(gamma)]) / static_cast<double>(trials);
  }
  int max_depth() const {
    for (std::size_t g = counts.size(); g-- > 0;) {
      if (counts[g] != 0) return static_cast<int>(g);
    }
    return theta_min - 1;
  }
};

/// mu_2(I_gamma u I_-gamma) = 2 (arcsin e^{-gamma} - arcsin e^{-gamma-1}) / pi.
inline double depth_mass_a2(int gamma) {
  const double g = static_cast<double>(gamma);
  return 2.0 * (std::asin(std::exp(-g)) - std::asin(std::exp(-g - 1.0))) / std::numbers::pi;
}

/// Frequencies of the depth of X_t at a time t uniform in [burn, horizon],
/// over `trials` stationary starts.
inline DepthHistogram depth_histogram(const MapParameter& params, const MeasureModel& model,
                                      int theta_min, std::size_t trials, std::size_t horizon,
                                      std::uint64_t seed, std::size_t burn = 0,
                                      unsigned threads = 0) {
  detail::require_argument(theta_min >= params.delta_exp(),
                           "depth_histogram: theta_min must be at least delta_exp");
  detail::require_argument(burn <= horizon, "depth_histogram: burn must not exceed horizon");
  detail::require_argument(trials >= 1, "depth_histogram: need at least one trial");
  detail::check_model_matches(params, model);

  constexpr std::size_t depth_slots = 64;  // doubles cannot reach depth 64 short of 0
  const double span_len = static_cast<double>(horizon - burn + 1);
  struct Acc {
    std::uint64_t critical = 0;
    std::array<std::uint64_t, depth_slots> counts{};
  };
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    Acc acc;
    for (std::size_t t = begin; t < end; ++t) {
      Engine g = substream(seed, t);
      double x = model.draw(g);
      const auto steps = burn + std::min(static_cast<std::size_t>(uniform_open01(g) * span_len),
                                         horizon - burn);
      auto reseed = [&] { return model.draw(g); };
      for (std::size_t s = 0; s < steps; ++s) detail::advance(params, x, reseed);
      const auto m = depth(x, params);
      if (!m || *m == infinite_depth) continue;
      ++acc.critical;
      if (*m >= theta_min) ++acc.counts[static_cast<std::size_t>(std::min<int>(*m, depth_slots - 1))];
    }
    return acc;
  };

  DepthHistogram h;
  h.theta_min = theta_min;
  h.trials = trials;
  h.counts.assign(depth_slots, 0);
  for (const auto& c : parallel_chunks(trials, threads, run_chunk, detail::dprime_chunk)) {
    h.critical_count += c.critical;
    for (std::size_t g = 0; g < depth_slots; ++g) h.counts[g] += c.counts[g];
  }
  while (h.counts.size() > static_cast<std::size_t>(theta_min) && h.counts.back() == 0) {
    h.counts.pop_back();
  }
  return h;
}

// ---------------------------------------------------------------------------
// Central limit theorem

struct CltResult {
  std::size_t n = 0;
  std::size_t trials = 0;
  double centering = 0.0;  // model mean subtracted from every state
  double mean_of_sums = 0.0;
  double sd_of_sums = 0.0;
  double ks = 0.0;  // distance of the standardized sums to N(0, 1)
  std::vector<double> sums;
};

/// Birkhoff sums S = sum_{i<n} (X_i - E X) over `trials` stationary starts,
/// scaled by their empirical standard deviation and compared with N(0, 1).
inline CltResult clt_check(const MapParameter& params, const MeasureModel& model, std::size_t n,
                           std::size_t trials, std::uint64_t seed, unsigned threads = 0) {
  detail::require_argument(n >= 1'000, "clt_check: n must be at least 1000");
  detail::require_argument(trials >= 1'000, "clt_check: need at least 1000 trials");
  detail::check_model_matches(params, model);

  CltResult r;
  r.n = n;
  r.trials = trials;
  r.centering = model.mean();
  r.sums = parallel_map(trials, threads, [&](std::size_t t) {
    Engine g = substream(seed, t);
    auto reseed = [&] { return model.draw(g); };
    double x = model.draw(g);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) detail::advance(params, x, reseed);
      s += x - r.centering;
    }
    return s;
  });

  double mean = 0.0;
  for (double s : r.sums) mean += s;
  mean /= static_cast<double>(trials);
  double ss = 0.0;
  for (double s : r.sums) ss += (s - mean) * (s - mean);
  r.mean_of_sums = mean;
  r.sd_of_sums = std::sqrt(ss / static_cast<double>(trials - 1));
  if (!(r.sd_of_sums > 0.0)) throw numeric_error("clt_check: Birkhoff sums have zero variance");

  const double sd = r.sd_of_sums;
  r.ks = ks_distance(std::span<const double>(r.sums),
                     [sd](double s) { return standard_normal_cdf(s / sd); });
  return r;
}

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_EVT_HPP
