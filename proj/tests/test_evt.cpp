#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "chaotic_extremes/evt.hpp"

using namespace chaotic_extremes;
using Catch::Approx;

namespace {

// For a = 2 the map is conjugate to the doubling map: f(-cos(pi t)) =
// -cos(2 pi t). Maxima of n steps computed on 64 random bits of t, with no
// use of the library's map, normalizer or sampler.
std::vector<double> doubling_map_maxima(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double an = 1.0 / (2.0 * std::pow(std::sin(std::numbers::pi / (2.0 * n)), 2));
  std::vector<double> out;
  out.reserve(m);
  for (std::size_t r = 0; r < m; ++r) {
    const std::uint64_t t = rng();
    double best = -2.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = std::ldexp(static_cast<double>(t << k), -63);
      best = std::max(best, -std::cos(std::numbers::pi * theta));
    }
    out.push_back(an * (best - 1.0));
  }
  return out;
}

double two_sample_ks(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(double(i) / x.size() - double(j) / y.size()));
  }
  return d;
}

}  // namespace

TEST_CASE("Weibull limit law", "[evt][H]") {
  CHECK(weibull_H(0.0) == 1.0);
  CHECK(weibull_H(3.0) == 1.0);
  CHECK(weibull_H(-1.0) == Approx(std::exp(-1.0)));
  CHECK(weibull_H(-4.0) == Approx(std::exp(-2.0)));
  CHECK(weibull_H(-0.01) == Approx(0.904837).epsilon(1e-6));
  for (double p : {1e-9, 0.1, 0.5, 0.9, 1.0}) CHECK(weibull_H(weibull_H_inverse(p)) == Approx(p));
  CHECK_THROWS_AS(weibull_H_inverse(0.0), argument_error);

  CHECK(weibull_H(-1e6) < 1e-300);
  CHECK(weibull_H(-1e-300) == Approx(1.0));

  double prev = 0.0;
  for (double x : table1_grid) {
    REQUIRE(weibull_H(x) > prev);
    prev = weibull_H(x);
  }
}

TEST_CASE("ecdf and Kolmogorov distance", "[evt][stats]") {
  const std::vector<double> sample{3.0, 1.0, 2.0, 2.0};
  const std::vector<double> grid{0.0, 1.0, 1.5, 2.0, 10.0};
  CHECK(ecdf_at(sample, grid) == std::vector<double>{0.0, 0.25, 0.25, 0.75, 1.0});
  const std::vector<double> unsorted{1.0, 0.0};
  CHECK_THROWS_AS(ecdf_at(sample, unsorted), argument_error);
  CHECK_THROWS_AS(ecdf_at(std::vector<double>{}, grid), argument_error);

  const std::vector<double> four{-3.0, -1.0, -0.5, -0.1};
  CHECK(ecdf_at(four, std::vector<double>{-0.9})[0] == 0.5);

  SECTION("inverse-transform sample from H") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    MaximaExperiment exp;
    for (int i = 0; i < 100000; ++i) exp.normalized.push_back(weibull_H_inverse(1.0 - unif(rng)));
    exp.m = exp.normalized.size();
    CHECK(ks_distance(exp) <= 0.01);
    exp.normalized.resize(9);
    exp.m = 9;
    CHECK_THROWS_AS(ks_distance(exp), argument_error);
  }

  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_distance(std::vector<double>{0.5}, uniform) == Approx(0.5));
  CHECK(ks_distance(std::vector<double>{0.25, 0.75}, uniform) == Approx(0.25));

  SECTION("nondecreasing and invariant under permutation") {
    Engine g(4);
    std::vector<double> s(500);
    for (auto& v : s) v = -10.0 * uniform_open01(g);
    std::vector<double> fine;
    for (int i = 0; i <= 200; ++i) fine.push_back(-10.0 + i * 0.05);
    const auto base = ecdf_at(s, fine);
    CHECK(std::is_sorted(base.begin(), base.end()));
    std::shuffle(s.begin(), s.end(), std::mt19937_64(1));
    CHECK(ecdf_at(s, fine) == base);
  }

  SECTION("matches a brute-force scan of both one-sided limits") {
    Engine g(3);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> s(37);
      for (auto& v : s) v = std::round(uniform_open01(g) * 20.0) / 20.0;  // forces ties
      double brute = 0.0;
      for (double x : s) {
        double below = 0.0, at = 0.0;
        for (double y : s) {
          below += y < x;
          at += y <= x;
        }
        brute = std::max({brute, std::abs(below / s.size() - x), std::abs(at / s.size() - x)});
      }
      REQUIRE(ks_distance(s, uniform) == Approx(brute).margin(1e-15));
    }
  }
}

TEST_CASE("sample_maxima", "[evt][maxima]") {
  const MapParameter two(2.0);
  const auto g = MeasureModel::analytic_a2();

  SECTION("normalized maxima are at most 0 for a = 2") {
    const auto exp = sample_maxima(two, g, 500, 2000, 1);
    CHECK(exp.a_n == Approx(normalizer(g, 500).a_n));
    for (double v : exp.normalized) REQUIRE(v <= 0.0);
  }

  SECTION("independent of thread count and of m") {
    const auto one = sample_maxima(two, g, 300, 3000, 17, 1);
    const auto three = sample_maxima(two, g, 300, 3000, 17, 3);
    CHECK(one.normalized == three.normalized);
    const auto prefix = sample_maxima(two, g, 300, 1000, 17, 2);
    CHECK(std::equal(prefix.normalized.begin(), prefix.normalized.end(), one.normalized.begin()));
  }

  SECTION("agrees with the doubling-map conjugacy") {
    const std::size_t n = 40, m = 20000;
    const auto lib = sample_maxima(two, g, n, m, 5);
    const auto oracle = doubling_map_maxima(n, m, 6);
    // two-sample KS critical value at level 1e-3 is 1.95 sqrt(2/m) = 0.0195
    CHECK(two_sample_ks(lib.normalized, oracle) < 0.025);
  }

  SECTION("empirical measure for a < 2 stays below its top sample") {
    const MapParameter p(1.99);
    const auto model = build_empirical(p, 100000, 1000, 3);
    const auto exp = sample_maxima(p, model, 200, 500, 4);
    for (double v : exp.normalized) REQUIRE(std::isfinite(v));
  }

  SECTION("errors") {
    CHECK_THROWS_AS(sample_maxima(MapParameter(1.99), g, 100, 10, 1), argument_error);
    CHECK_THROWS_AS(sample_maxima(two, g, 1, 10, 1), argument_error);
    CHECK_THROWS_AS(sample_maxima(two, g, 10, 0, 1), argument_error);
  }
}

TEST_CASE("dprime_estimate", "[evt][dprime]") {
  const MapParameter two(2.0);
  const auto g = MeasureModel::analytic_a2();
  const std::size_t n = 1000, trials = 200'000;

  SECTION("iid surrogate reproduces n floor(n/k) p^2") {
    for (std::size_t k : {5u, 20u}) {
      const auto r = dprime_estimate(two, g, n, k, 1.0, trials, 9, DprimeMode::iid_surrogate);
      const double p = 1.0 / n;
      CHECK(r.iid_reference == Approx(n * double(n / k) * p * p).epsilon(1e-9));
      CHECK(std::abs(r.estimate - r.iid_reference) <= 3.0 * r.stderr_);
    }
  }

  SECTION("orbit estimate has no shallow exceedances and stays bounded") {
    const auto r5 = dprime_estimate(two, g, n, 5, 1.0, trials, 10);
    const auto r50 = dprime_estimate(two, g, n, 50, 1.0, trials, 10);
    CHECK(r5.deep_return_violations == 0);
    CHECK(r50.deep_return_violations == 0);
    CHECK(r5.level.theta >= two.delta_exp());
    CHECK(r5.estimate <= 2.0 / 5 + 3.0 * r5.stderr_);
    CHECK(r50.estimate <= r5.estimate + 3.0 * r5.stderr_);
    CHECK(r5.stderr_ > 0.0);
  }

  SECTION("strict mode is consistent with orbit mode") {
    const auto orbit = dprime_estimate(two, g, n, 10, 1.0, trials, 11);
    const auto strict = dprime_estimate(two, g, n, 10, 1.0, trials, 12, DprimeMode::strict);
    CHECK(std::abs(orbit.estimate - strict.estimate) <=
          4.0 * std::hypot(orbit.stderr_, strict.stderr_));
  }

  SECTION("thread-count independent") {
    const auto a = dprime_estimate(two, g, n, 10, 1.0, 50'000, 13, DprimeMode::orbit, 1);
    const auto b = dprime_estimate(two, g, n, 10, 1.0, 50'000, 13, DprimeMode::orbit, 4);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_ == b.stderr_);
  }

  SECTION("errors") {
    CHECK_THROWS_AS(dprime_estimate(two, g, n, 1, 1.0, trials, 1), argument_error);
    CHECK_THROWS_AS(dprime_estimate(two, g, 4, 5, 1.0, trials, 1), argument_error);
    CHECK_THROWS_AS(dprime_estimate(two, g, n, 5, 1.0, 999, 1), argument_error);
    CHECK_THROWS_AS(dprime_estimate(two, g, 20, 5, 1.0, trials, 1), precondition_error);
  }
}

TEST_CASE("indicator correlations", "[evt][corr]") {
  const MapParameter two(2.0);
  const auto g = MeasureModel::analytic_a2();
  const double u = g.quantile(0.95);
  const auto pts = indicator_correlation(two, g, u, 30, 400'000, 21);
  REQUIRE(pts.size() == 31);
  CHECK(pts[0].p_joint == Approx(0.05).margin(4 * binomial_stderr(0.05, 400'000)));
  CHECK(pts[0].corr == Approx(pts[0].p_joint * (1 - pts[0].p_joint)).epsilon(1e-12));
  // Deep lags are indistinguishable from independence.
  for (std::size_t j = 20; j <= 30; ++j) CHECK(std::abs(pts[j].corr) <= 5.0 * pts[j].stderr_);

  const auto again = indicator_correlation(two, g, u, 30, 400'000, 21, 3);
  for (std::size_t j = 0; j <= 30; ++j) CHECK(again[j].p_joint == pts[j].p_joint);

  CHECK_THROWS_AS(indicator_correlation(two, g, 1.0, 5, 10, 1), argument_error);
  CHECK_THROWS_AS(indicator_correlation(two, g, u, 0, 10, 1), argument_error);
}

TEST_CASE("decay-rate fit and turning time", "[evt][corr]") {
  std::vector<CorrelationPoint> pts;
  for (std::size_t j = 0; j <= 12; ++j) {
    CorrelationPoint pt;
    pt.lag = j;
    pt.corr = 0.1 * std::pow(0.6, static_cast<double>(j));
    pt.stderr_ = j < 9 ? 1e-9 : 1.0;  // only lags 1..8 are significant
    pts.push_back(pt);
  }
  const auto rate = fit_decay_rate(pts);
  REQUIRE(rate);
  CHECK(*rate == Approx(0.6).epsilon(1e-12));

  pts[2].stderr_ = 1.0;  // run stops after lag 1
  CHECK_FALSE(fit_decay_rate(pts));

  CHECK(turning_time(0.5, 1000) == 40);
  CHECK(turning_time(0.6, 10000) ==
        static_cast<std::size_t>(std::ceil(4 * std::log(1e4) / std::log(1 / 0.6))));
  CHECK_THROWS_AS(turning_time(1.0, 100), argument_error);
  CHECK_THROWS_AS(turning_time(0.5, 1), argument_error);
}

TEST_CASE("depth histogram", "[evt][depth]") {
  const MapParameter two(2.0);
  const auto g = MeasureModel::analytic_a2();

  SECTION("analytic ring masses") {
    for (int gamma = 5; gamma <= 12; ++gamma) {
      const double lo = std::exp(-gamma - 1.0), hi = std::exp(-static_cast<double>(gamma));
      const double oracle = 2.0 * (g.cdf(hi) - g.cdf(lo));
      CHECK(depth_mass_a2(gamma) == Approx(oracle).epsilon(1e-9));
    }
    CHECK(depth_mass_a2(5) == Approx(2.0 / std::numbers::pi * std::exp(-5.0) * (1 - std::exp(-1.0))).epsilon(1e-4));
  }

  SECTION("frequencies match the invariant measure") {
    const std::size_t trials = 1'000'000;
    const auto h = depth_histogram(two, g, 5, trials, 50, 31);
    for (int gamma = 5; gamma <= 8; ++gamma) {
      const double p = depth_mass_a2(gamma);
      CHECK(std::abs(h.frequency(gamma) - p) <= 4.0 * binomial_stderr(p, trials));
    }
    double crit = 0.0;
    for (int gamma = 5; gamma < 60; ++gamma) crit += depth_mass_a2(gamma);
    CHECK(std::abs(double(h.critical_count) / trials - crit) <= 4.0 * binomial_stderr(crit, trials));
    CHECK(h.max_depth() >= 8);
    CHECK(h.frequency(4) == 0.0);
  }

  SECTION("log-frequency falls off like e^-gamma") {
    const auto h = depth_histogram(two, g, 5, 10'000'000, 20, 32);
    std::vector<double> gs, logs;
    for (int gamma = 5; gamma <= 12; ++gamma) {
      REQUIRE(h.counts[static_cast<std::size_t>(gamma)] > 0);
      gs.push_back(gamma);
      logs.push_back(std::log(h.frequency(gamma)));
    }
    const double slope = least_squares_slope(gs, logs);
    CHECK(slope >= -1.1);
    CHECK(slope <= -0.9);
  }

  SECTION("thread-count independent") {
    const auto a = depth_histogram(two, g, 6, 50'000, 20, 2, 0, 1);
    const auto b = depth_histogram(two, g, 6, 50'000, 20, 2, 0, 4);
    CHECK(a.counts == b.counts);
    CHECK(a.critical_count == b.critical_count);
  }

  SECTION("errors") {
    CHECK_THROWS_AS(depth_histogram(two, g, 4, 100, 10, 1), argument_error);
    CHECK_THROWS_AS(depth_histogram(two, g, 5, 100, 10, 1, 11), argument_error);
  }
}

TEST_CASE("central limit check", "[evt][clt]") {
  const MapParameter two(2.0);
  const auto g = MeasureModel::analytic_a2();
  const auto r = clt_check(two, g, 1000, 4000, 41);
  CHECK(r.centering == Approx(0.0).margin(1e-15));
  CHECK(r.sums.size() == 4000);
  CHECK(r.sd_of_sums > 0.0);
  CHECK(std::abs(r.mean_of_sums) <= 4.0 * r.sd_of_sums / std::sqrt(4000.0));
  CHECK(r.ks <= 0.04);
  CHECK(clt_check(two, g, 1000, 4000, 41, 3).sums == r.sums);

  CHECK_THROWS_AS(clt_check(two, g, 999, 4000, 1), argument_error);
  CHECK_THROWS_AS(clt_check(two, g, 1000, 999, 1), argument_error);
}
