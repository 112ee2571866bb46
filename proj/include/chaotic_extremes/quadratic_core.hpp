#ifndef CHAOTIC_EXTREMES_QUADRATIC_CORE_HPP
#define CHAOTIC_EXTREMES_QUADRATIC_CORE_HPP

// Orbits of f_a(x) = 1 - a x^2 on [-1, 1]: the derivative cocycle, return
// depths to the critical region, bound periods, and finite-horizon checks of
// the exponential-growth and basic-assumption conditions.
//
// Everything here runs in double precision. Individual trajectories shadow
// true orbits only for O(50) steps; the statistics built on them are what
// carries meaning.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "map_parameter.hpp"

namespace chaotic_extremes {

/// Depth reported for the critical point itself.
inline constexpr int infinite_depth = std::numeric_limits<int>::max();

enum class ReturnKind { free, bound };

struct BoundPeriod {
  std::size_t length = 0;
  bool capped = false;    // horizon reached before the envelope was left
  bool infinite = false;  // x was the critical point
};

struct ReturnEvent {
  std::size_t time = 0;
  int depth = 0;
  int side = 0;  // sign of the state, 0 only at the critical point
  ReturnKind kind = ReturnKind::free;
  std::optional<BoundPeriod> bound_period;  // set for free returns only
};

/// A finite orbit x_0..x_{n-1}.
///
/// `log_deriv[k]` is log|Df_a^k(x_0)| for k = 0..n, so it has one more entry
/// than `states`. When some state is exactly 0 the cocycle is singular from
/// that index on and the later entries are -infinity.
struct OrbitRecord {
  double x0 = 0.0;
  std::vector<double> states;
  std::vector<double> log_deriv;
  std::optional<std::size_t> singular_from;
  std::vector<ReturnEvent> returns;

  std::size_t size() const noexcept { return states.size(); }
};

struct LogDerivative {
  std::vector<double> values;  // entry k-1 holds log|Df_a^k(x0)|, k = 1..n
  std::optional<std::size_t> singular_from;

  bool singular() const noexcept { return singular_from.has_value(); }
};

namespace detail {

inline void check_orbit_arguments(double x0, std::size_t n) {
  require_domain(x0 >= -1.0 && x0 <= 1.0, "initial state must lie in [-1, 1]");
  require_argument(n >= 1, "orbit length must be at least 1");
}

inline std::vector<double> raw_states(const MapParameter& params, double x0, std::size_t n) {
  std::vector<double> states(n);
  double x = x0;
  for (std::size_t k = 0; k < n; ++k) {
    states[k] = x;
    x = params(x);
  }
  return states;
}

}  // namespace detail

/// Depth m = floor(-log|x|) of a point of the critical region
/// (-e^{-Delta}, e^{-Delta}); empty outside it and `infinite_depth` at 0.
///
/// The rings I_m = (e^{-(m+1)}, e^{-m}] are half-open, so |x| = e^{-m} has
/// depth m. Ring boundaries are the double values std::exp(-m).
inline std::optional<int> depth(double x, const MapParameter& params) {
  detail::require_domain(x >= -1.0 && x <= 1.0, "depth: state must lie in [-1, 1]");
  const double ax = std::abs(x);
  if (!(ax < params.delta())) return std::nullopt;
  if (ax == 0.0) return infinite_depth;
  int m = static_cast<int>(std::floor(-std::log(ax)));
  while (ax > std::exp(-static_cast<double>(m))) --m;
  while (ax <= std::exp(-static_cast<double>(m + 1))) ++m;
  return m;
}

/// Bound period of a return x: the largest p with
/// |f^k(x) - f^k(0)| < e^{-beta k} for all 1 <= k < p.
///
/// The difference d_k = f^k(x) - f^k(0) is propagated through the exact
/// identity f(y) - f(c) = -a d (d + 2c), which keeps its relative precision
/// where the plain parallel iteration would round f(x) to f(0).
inline BoundPeriod bound_period(const MapParameter& params, double x) {
  if (!(std::abs(x) < params.delta())) {
    throw precondition_error("bound_period: x must lie in the critical region");
  }
  if (x == 0.0) return {params.bound_period_cap(), false, true};

  const double a = params.a();
  double c = 0.0;
  double d = x;
  for (std::size_t k = 1; k < params.bound_period_cap(); ++k) {
    d = -a * d * (d + 2.0 * c);
    c = params(c);
    if (!(std::abs(d) < std::exp(-params.beta() * static_cast<double>(k)))) return {k, false, false};
  }
  return {params.bound_period_cap(), true, false};
}

/// Labels every entry to the critical region. A return is bound when it
/// falls inside the window (s, s + p] of the latest free return s with bound
/// period p, and free otherwise.
inline std::vector<ReturnEvent> classify_returns(std::span<const double> states,
                                                 const MapParameter& params) {
  std::vector<ReturnEvent> events;
  bool window_open = false;
  std::size_t window_end = 0;
  for (std::size_t t = 0; t < states.size(); ++t) {
    const auto m = depth(states[t], params);
    if (!m) continue;
    ReturnEvent ev;
    ev.time = t;
    ev.depth = *m;
    ev.side = states[t] > 0.0 ? 1 : (states[t] < 0.0 ? -1 : 0);
    if (window_open && t <= window_end) {
      ev.kind = ReturnKind::bound;
    } else {
      ev.kind = ReturnKind::free;
      ev.bound_period = bound_period(params, states[t]);
      window_open = true;
      window_end = ev.bound_period->infinite ? std::numeric_limits<std::size_t>::max()
                                             : t + ev.bound_period->length;
    }
    events.push_back(ev);
  }
  return events;
}

inline std::vector<ReturnEvent> classify_returns(const OrbitRecord& orbit,
                                                 const MapParameter& params) {
  return classify_returns(std::span<const double>(orbit.states), params);
}

/// Orbit of x0 of length n with cocycle and classified returns.
inline OrbitRecord iterate(const MapParameter& params, double x0, std::size_t n) {
  detail::check_orbit_arguments(x0, n);
  OrbitRecord orbit;
  orbit.x0 = x0;
  orbit.states = detail::raw_states(params, x0, n);
  orbit.log_deriv.resize(n + 1);
  orbit.log_deriv[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (orbit.states[k] == 0.0 && !orbit.singular_from) orbit.singular_from = k;
    orbit.log_deriv[k + 1] = orbit.log_deriv[k] + std::log(params.abs_derivative(orbit.states[k]));
  }
  orbit.returns = classify_returns(orbit, params);
  return orbit;
}

/// log|Df_a^k(x0)| for k = 1..n.
inline LogDerivative log_derivative(const MapParameter& params, double x0, std::size_t n) {
  detail::check_orbit_arguments(x0, n);
  LogDerivative out;
  out.values.reserve(n);
  double x = x0;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (x == 0.0 && !out.singular_from) out.singular_from = k;
    acc += std::log(params.abs_derivative(x));
    out.values.push_back(acc);
    x = params(x);
  }
  return out;
}

/// A stretch [begin, end) of an orbit lying outside every bound window, ending at
/// the free return `end` (or at the end of the orbit when `ends_in_return` is
/// false).
struct FreeSegment {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool ends_in_return = false;

  std::size_t length() const noexcept { return end - begin; }
};

inline std::vector<FreeSegment> free_segments(const OrbitRecord& orbit) {
  std::vector<FreeSegment> out;
  std::size_t begin = 0;
  for (const auto& ev : orbit.returns) {
    if (ev.kind != ReturnKind::free) continue;
    if (ev.time > begin) out.push_back({begin, ev.time, true});
    if (ev.bound_period->infinite) return out;
    begin = std::max(begin, ev.time + ev.bound_period->length + 1);
  }
  if (orbit.size() > begin) out.push_back({begin, orbit.size(), false});
  return out;
}

struct GrowthReport {
  double c = 0.0;
  double alpha = 0.0;
  // Entry n-1 holds the margin at time n.
  std::vector<double> eg_margins;  // log|Df^n(f(0))| - c n
  std::vector<double> ba_margins;  // log|f^n(0)| + alpha sqrt(n)
  std::optional<std::size_t> eg_first_failure;
  std::optional<std::size_t> ba_first_failure;
  std::string caveat;

  bool eg_pass() const noexcept { return !eg_first_failure; }
  bool ba_pass() const noexcept { return !ba_first_failure; }
};

/// Finite-horizon margins of the growth conditions along the critical orbit:
/// |Df^n(f(0))| >= e^{cn} and |f^n(0)| >= e^{-alpha sqrt n} for n = 1..N.
/// A pass exhibits margins in floating point; it does not certify a.
inline GrowthReport verify_growth_conditions(const MapParameter& params, double c, std::size_t N) {
  detail::require_argument(N >= 1, "verify_growth_conditions: N must be at least 1");
  GrowthReport report;
  report.c = c;
  report.alpha = params.alpha();
  report.caveat =
      "heuristic: double-precision orbit of the critical point; pointwise accuracy is lost after "
      "O(50) iterations, so margins are finite-horizon evidence, not a certificate";
  report.eg_margins.reserve(N);
  report.ba_margins.reserve(N);

  double x = params(0.0);  // f(0)
  double log_growth = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    log_growth += std::log(params.abs_derivative(x));
    x = params(x);  // x = f^{n+1}(0)
    const double eg = log_growth - c * static_cast<double>(n);
    report.eg_margins.push_back(eg);
    if (!(eg > 0.0) && !report.eg_first_failure) report.eg_first_failure = n;
  }

  double y = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    y = params(y);
    const double ba = std::log(std::abs(y)) + params.alpha() * std::sqrt(static_cast<double>(n));
    report.ba_margins.push_back(ba);
    if (!(ba > 0.0) && !report.ba_first_failure) report.ba_first_failure = n;
  }
  return report;
}

/// Times t with |x_t| < e^{-theta}.
inline std::vector<std::size_t> deep_return_times(std::span<const double> states, int theta) {
  const double radius = std::exp(-static_cast<double>(theta));
  std::vector<std::size_t> times;
  for (std::size_t t = 0; t < states.size(); ++t) {
    if (std::abs(states[t]) < radius) times.push_back(t);
  }
  return times;
}

/// Consecutive differences of the theta-deep return times of an orbit.
inline std::vector<std::size_t> deep_return_gaps(std::span<const double> states, int theta,
                                                 const MapParameter& params) {
  detail::require_argument(theta >= params.delta_exp(),
                           "deep_return_gaps: theta must be at least delta_exp");
  const auto times = deep_return_times(states, theta);
  std::vector<std::size_t> gaps;
  for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(times[i] - times[i - 1]);
  return gaps;
}

inline std::vector<std::size_t> deep_return_gaps(const OrbitRecord& orbit, int theta,
                                                 const MapParameter& params) {
  return deep_return_gaps(std::span<const double>(orbit.states), theta, params);
}

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_QUADRATIC_CORE_HPP
