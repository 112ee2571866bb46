#ifndef CHAOTIC_EXTREMES_MAP_PARAMETER_HPP
#define CHAOTIC_EXTREMES_MAP_PARAMETER_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace chaotic_extremes {

/// Parameter of the quadratic map f_a(x) = 1 - a x^2 together with the
/// critical-region configuration used for return and bound-period
/// bookkeeping.
///
/// The critical region is (-delta, delta) with delta = exp(-delta_exp). The
/// bound period of a return x is measured against the envelope
/// exp(-beta k); by default beta is tied to alpha as beta = 14 alpha.
class MapParameter {
 public:
  static constexpr int default_delta_exp = 5;
  static constexpr double default_alpha = 0.01;
  static constexpr double beta_per_alpha = 14.0;
  static constexpr std::size_t default_bound_period_cap = 10'000;

  explicit MapParameter(double a, int delta_exp = default_delta_exp,
                        double alpha = default_alpha,
                        std::optional<double> beta = std::nullopt,
                        std::size_t bound_period_cap = default_bound_period_cap)
      : a_(a),
        delta_exp_(delta_exp),
        alpha_(alpha),
        beta_(beta.value_or(beta_per_alpha * alpha)),
        bound_period_cap_(bound_period_cap) {
    if (!(a > 0.0 && a <= 2.0)) {
      std::ostringstream os;
      os << "map parameter a must lie in (0, 2], got " << a;
      throw domain_error(os.str());
    }
    detail::require_argument(delta_exp >= 1, "delta_exp must be a positive integer");
    detail::require_argument(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
    detail::require_argument(beta_ > 0.0 && std::isfinite(beta_), "beta must be positive");
    detail::require_argument(bound_period_cap >= 1, "bound period cap must be at least 1");

    // delta should dominate the distance of a to 2 by an order of magnitude.
    if (a < 2.0 && delta() < 10.0 * (2.0 - a)) {
      std::ostringstream os;
      os << "critical radius exp(-" << delta_exp << ") = " << delta()
         << " is not much larger than 2 - a = " << 2.0 - a;
      warnings_.push_back(os.str());
    }
    if (beta.has_value() && *beta != beta_per_alpha * alpha) {
      warnings_.push_back("beta overrides the default coupling beta = 14 alpha");
    }
  }

  double a() const noexcept { return a_; }
  int delta_exp() const noexcept { return delta_exp_; }
  double delta() const noexcept { return std::exp(-static_cast<double>(delta_exp_)); }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  std::size_t bound_period_cap() const noexcept { return bound_period_cap_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// One application of the map.
  double operator()(double x) const noexcept { return 1.0 - a_ * (x * x); }

  /// |Df_a(x)| = |2 a x|.
  double abs_derivative(double x) const noexcept { return std::abs(2.0 * a_ * x); }

 private:
  double a_;
  int delta_exp_;
  double alpha_;
  double beta_;
  std::size_t bound_period_cap_;
  std::vector<std::string> warnings_;
};

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_MAP_PARAMETER_HPP
