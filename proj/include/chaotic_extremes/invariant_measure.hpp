#ifndef CHAOTIC_EXTREMES_INVARIANT_MEASURE_HPP
#define CHAOTIC_EXTREMES_INVARIANT_MEASURE_HPP

// The marginal law G_a of the stationary process X_n = f_a^n(X_0).
//
// For a = 2 the invariant density is the arcsine law and every quantity has a
// closed form. For other parameters the law is represented by a sorted
// Birkhoff sample of one long orbit, with the generalized inverse
// G^{-1}(y) = inf{x : G(x) >= y} as quantile.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "map_parameter.hpp"
#include "random.hpp"

namespace chaotic_extremes {

enum class MeasureKind { analytic_a2, empirical };

inline constexpr std::size_t min_empirical_samples = 1'000;
inline constexpr std::size_t recommended_empirical_samples = 10'000;
inline constexpr std::size_t default_burn_in = 1'000;

class MeasureModel {
 public:
  /// The arcsine law G_2(x) = 1/2 + arcsin(x)/pi.
  static MeasureModel analytic_a2() { return MeasureModel(MeasureKind::analytic_a2, 2.0); }

  /// Wraps an already sorted sample. Used by `build_empirical` and by model
  /// import.
  static MeasureModel from_sorted_samples(double a, std::vector<double> samples,
                                          std::size_t burn_in, std::uint64_t seed) {
    detail::require_argument(!samples.empty(), "empirical model needs at least one sample");
    detail::require_argument(std::is_sorted(samples.begin(), samples.end()),
                             "empirical samples must be sorted ascending");
    detail::require_domain(samples.front() >= -1.0 && samples.back() <= 1.0,
                           "empirical samples must lie in [-1, 1]");
    MeasureModel m(MeasureKind::empirical, a);
    m.burn_in_ = burn_in;
    m.seed_ = seed;
    if (samples.size() < recommended_empirical_samples) {
      std::ostringstream os;
      os << "empirical model has only " << samples.size() << " samples (recommended >= "
         << recommended_empirical_samples << ")";
      m.warnings_.push_back(os.str());
    }
    m.samples_ = std::make_shared<const std::vector<double>>(std::move(samples));
    return m;
  }

  MeasureKind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  std::size_t sample_count() const noexcept { return samples_ ? samples_->size() : 0; }
  std::size_t burn_in() const noexcept { return burn_in_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> samples() const noexcept {
    return samples_ ? std::span<const double>(*samples_) : std::span<const double>();
  }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// P{X <= x}.
  double cdf(double x) const {
    detail::require_domain(x >= -1.0 && x <= 1.0, "cdf: x must lie in [-1, 1]");
    if (kind_ == MeasureKind::analytic_a2) {
      if (x > 0.5) return 1.0 - arc_tail(1.0 - x);
      if (x < -0.5) return arc_tail(1.0 + x);
      return 0.5 + std::asin(x) / std::numbers::pi;
    }
    const auto& s = *samples_;
    const auto count = std::upper_bound(s.begin(), s.end(), x) - s.begin();
    return static_cast<double>(count) / static_cast<double>(s.size());
  }

  /// P{X > 1 - s}, evaluated without forming 1 - s for the analytic law.
  double upper_tail_at_gap(double s) const {
    detail::require_domain(s >= 0.0 && s <= 2.0, "upper tail: gap must lie in [0, 2]");
    if (kind_ == MeasureKind::analytic_a2) return arc_tail(s);
    const auto& v = *samples_;
    const double x = 1.0 - s;
    const auto above = v.end() - std::upper_bound(v.begin(), v.end(), x);
    return static_cast<double>(above) / static_cast<double>(v.size());
  }

  /// G^{-1}(y) = inf{x : G(x) >= y}.
  double quantile(double y) const {
    detail::require_argument(y >= 0.0 && y <= 1.0, "quantile: probability must lie in [0, 1]");
    if (kind_ == MeasureKind::analytic_a2) {
      if (y > 0.75) return 1.0 - arc_gap(1.0 - y);
      if (y < 0.25) return -1.0 + arc_gap(y);
      return -std::cos(std::numbers::pi * y);
    }
    const auto& v = *samples_;
    const double scaled = y * static_cast<double>(v.size());
    auto j = static_cast<std::size_t>(std::ceil(scaled));
    while (j > 0 && static_cast<double>(j - 1) >= scaled) --j;
    while (static_cast<double>(j) < scaled) ++j;
    j = std::clamp<std::size_t>(j, 1, v.size());
    return v[j - 1];
  }

  /// 1 - G^{-1}(1 - s), the distance of the (1 - s)-quantile to the right
  /// end of [-1, 1].
  double quantile_gap(double s) const {
    detail::require_argument(s >= 0.0 && s <= 1.0, "quantile gap: s must lie in [0, 1]");
    if (kind_ == MeasureKind::analytic_a2) return arc_gap(s);
    // Smallest j with j/N >= 1 - s is N - floor(sN).
    const auto& v = *samples_;
    const auto N = v.size();
    const auto drop = static_cast<std::size_t>(std::floor(s * static_cast<double>(N)));
    const std::size_t j = drop >= N ? 1 : N - drop;
    return 1.0 - v[j - 1];
  }

  /// Mean of the law; 0 for the symmetric arcsine law.
  double mean() const {
    if (kind_ == MeasureKind::analytic_a2) return 0.0;
    // Kahan summation over the sorted sample.
    double sum = 0.0, comp = 0.0;
    for (double x : *samples_) {
      const double y = x - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return sum / static_cast<double>(samples_->size());
  }

  /// Analytic density 1 / (pi sqrt(1 - x^2)) of the a = 2 law.
  double density(double x) const {
    if (kind_ != MeasureKind::analytic_a2) {
      throw precondition_error("density is only available for the analytic a = 2 law");
    }
    detail::require_domain(x > -1.0 && x < 1.0, "density: x must lie in (-1, 1)");
    return 1.0 / (std::numbers::pi * std::sqrt((1.0 - x) * (1.0 + x)));
  }

  /// Inverse-transform draw from the law.
  template <class URBG>
  double draw(URBG& g) const {
    return quantile(uniform_open01(g));
  }

 private:
  MeasureModel(MeasureKind kind, double a) : kind_(kind), a_(a) {}

  // arccos(1 - s) / pi = 2 arcsin(sqrt(s/2)) / pi.
  static double arc_tail(double s) {
    return 2.0 * std::asin(std::sqrt(0.5 * s)) / std::numbers::pi;
  }
  // 1 - cos(pi s) = 2 sin^2(pi s / 2).
  static double arc_gap(double s) {
    const double h = std::sin(0.5 * std::numbers::pi * s);
    return 2.0 * h * h;
  }

  MeasureKind kind_;
  double a_;
  std::shared_ptr<const std::vector<double>> samples_;
  std::size_t burn_in_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::string> warnings_;
};

inline double cdf(const MeasureModel& model, double x) { return model.cdf(x); }
inline double quantile(const MeasureModel& model, double y) { return model.quantile(y); }

namespace detail {

/// Steps x <- f_a(x). When rounding has absorbed the orbit into a fixed point
/// of the floating-point map (x = 1 rounds onto the fixed point -1 for
/// a = 2), the state is redrawn from `reseed` so that sampling stays
/// stationary. Returns true when a redraw happened.
template <class Reseed>
bool advance(const MapParameter& params, double& x, Reseed&& reseed) {
  const double next = params(x);
  if (next == x) {
    x = reseed();
    return true;
  }
  x = next;
  return false;
}

}  // namespace detail

/// Sorted Birkhoff sample of N states of one orbit, started uniformly on
/// (-1, 1) from the seeded generator and run for burn_in steps first.
/// Deterministic in (params, N, burn_in, seed).
inline MeasureModel build_empirical(const MapParameter& params, std::size_t N,
                                    std::size_t burn_in = default_burn_in, std::uint64_t seed = 0) {
  if (N < min_empirical_samples) {
    std::ostringstream os;
    os << "build_empirical: need at least " << min_empirical_samples << " samples, got " << N;
    throw argument_error(os.str());
  }
  Engine g = substream(seed, 0);
  auto fresh_start = [&] {
    double x = uniform_symmetric(g);
    for (std::size_t i = 0; i < burn_in; ++i) x = params(x);
    return x;
  };
  double x = fresh_start();
  std::vector<double> samples(N);
  for (auto& s : samples) {
    detail::advance(params, x, fresh_start);
    s = x;
  }
  std::sort(samples.begin(), samples.end());
  return MeasureModel::from_sorted_samples(params.a(), std::move(samples), burn_in, seed);
}

/// Two-sided Kolmogorov distance between an empirical model and the
/// analytic a = 2 law.
inline double sup_distance_to_arcsine(const MeasureModel& model) {
  detail::require_argument(model.kind() == MeasureKind::empirical,
                           "sup distance needs an empirical model");
  const auto analytic = MeasureModel::analytic_a2();
  const auto s = model.samples();
  const double N = static_cast<double>(s.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const double g = analytic.cdf(s[i]);
    d = std::max({d, std::abs(static_cast<double>(j) / N - g), std::abs(static_cast<double>(i) / N - g)});
    i = j;
  }
  return d;
}

struct NormalizingConstants {
  double a_n = 0.0;
  double b_n = 1.0;
};

/// a_n = (1 - G^{-1}(1 - 1/n))^{-1}, b_n = 1.
inline NormalizingConstants normalizer(const MeasureModel& model, std::size_t n) {
  detail::require_argument(n >= 2, "normalizer: n must be at least 2");
  const double gap = model.quantile_gap(1.0 / static_cast<double>(n));
  if (!(gap > 0.0)) {
    throw numeric_error("normalizer: quantile G^{-1}(1 - 1/n) equals 1; the model is degenerate");
  }
  return {1.0 / gap, 1.0};
}

/// Exceedance level u_n with n (1 - G(u_n)) ~ tau and the depth threshold
/// Theta(n) = floor(-1/2 log((1 - u_n)/a)) of the returns that precede
/// exceedances.
struct LevelSpec {
  double tau = 0.0;
  std::size_t n = 0;
  double u_n = 0.0;
  double tail_gap = 0.0;  // 1 - u_n, kept separately for precision
  int theta = 0;
  double preimage_halfwidth = 0.0;  // sqrt((1 - u_n)/a)
};

namespace detail {

inline int theta_from_halfwidth(double halfwidth) {
  int theta = static_cast<int>(std::floor(-std::log(halfwidth)));
  // Keep halfwidth <= e^{-theta} in floating point, so that
  // |x| < halfwidth implies depth(x) >= theta.
  while (halfwidth > std::exp(-static_cast<double>(theta))) --theta;
  return theta;
}

}  // namespace detail

/// Level record for a given distance `tail_gap` = 1 - u of the threshold
/// to 1.
inline LevelSpec level_from_gap(double a, std::size_t n, double tau, double tail_gap,
                                int delta_exp = MapParameter::default_delta_exp) {
  if (!(tail_gap > 0.0)) throw numeric_error("level: threshold reaches the right endpoint 1");
  LevelSpec lv;
  lv.tau = tau;
  lv.n = n;
  lv.tail_gap = tail_gap;
  lv.u_n = 1.0 - tail_gap;
  lv.preimage_halfwidth = std::sqrt(tail_gap / a);
  lv.theta = detail::theta_from_halfwidth(lv.preimage_halfwidth);
  if (lv.theta < delta_exp) {
    std::ostringstream os;
    os << "level: n too small for this tau (Theta = " << lv.theta << " < Delta = " << delta_exp
       << ")";
    throw precondition_error(os.str());
  }
  return lv;
}

/// u_n = G^{-1}(1 - tau/n).
inline LevelSpec level(const MeasureModel& model, std::size_t n, double tau,
                       int delta_exp = MapParameter::default_delta_exp) {
  detail::require_argument(tau > 0.0 && tau < static_cast<double>(n),
                           "level: tau must lie in (0, n)");
  return level_from_gap(model.a(), n, tau, model.quantile_gap(tau / static_cast<double>(n)),
                        delta_exp);
}

/// Least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  detail::require_argument(x.size() == y.size() && x.size() >= 2,
                           "least squares needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw numeric_error("least squares: abscissae are all equal");
  return sxy / sxx;
}

inline constexpr std::size_t default_tail_grid_points = 20;

/// Slope of log(1 - G(1 - s)) against log s over a log-spaced grid in
/// [s_min, s_max]; about 1/2 for every parameter in the Benedicks-Carleson
/// set. Empirical grid points with no sample in the tail are left out.
inline double tail_exponent(const MeasureModel& model, double s_min, double s_max,
                            std::size_t points = default_tail_grid_points) {
  detail::require_argument(s_min > 0.0 && s_min < s_max && s_max <= 1.0,
                           "tail_exponent: need 0 < s_min < s_max <= 1");
  detail::require_argument(points >= 2, "tail_exponent: need at least two grid points");
  std::vector<double> xs, ys;
  const double lo = std::log(s_min), hi = std::log(s_max);
  for (std::size_t i = 0; i < points; ++i) {
    const double ls = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double tail = model.upper_tail_at_gap(std::exp(ls));
    if (tail > 0.0) {
      xs.push_back(ls);
      ys.push_back(std::log(tail));
    }
  }
  if (xs.size() < 2) {
    throw numeric_error("tail_exponent: insufficient tail, fewer than two grid points have mass");
  }
  return least_squares_slope(xs, ys);
}

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_INVARIANT_MEASURE_HPP
