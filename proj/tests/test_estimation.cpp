#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mellinstat/distributions.hpp"
#include "mellinstat/errors.hpp"
#include "mellinstat/estimation.hpp"
#include "mellinstat/family_io.hpp"
#include "mellinstat/sampling.hpp"
#include "mellinstat/specfun.hpp"

using namespace mellinstat;

namespace {

constexpr double kPi = std::numbers::pi;

LogStats analytic_stats(const DistributionSpec& spec, int order) {
  return LogStats::from_cumulants(log_cumulants_analytic(spec, order));
}

// Gamma-gamma shapes are compared as an unordered pair.
DistributionSpec canonical(const DistributionSpec& spec) {
  if (!spec.holds<GammaGamma>()) return spec;
  const auto& p = spec.as<GammaGamma>();
  return GammaGamma{std::min(p.L, p.M), std::max(p.L, p.M), p.mu};
}

double max_relative_param_error(const DistributionSpec& got, const DistributionSpec& want) {
  const auto a = spec_params(canonical(got)), b = spec_params(canonical(want));
  double worst = 0.0;
  for (const auto& [key, value] : b) worst = std::max(worst, std::abs(a.at(key) - value) / value);
  return worst;
}

std::vector<DistributionSpec> fit_grid() {
  return {GammaPower{1, 1},        GammaPower{0.3, 5},      GammaPower{40, 0.2},   Nakagami{0.7, 2},
          Nakagami{12, 0.5},       Maxwell{0.4},            Maxwell{3},            Weibull{1, 2},
          Weibull{0.5, 0.6},       Weibull{7, 5},           Rayleigh{1},           Rayleigh{0.2},
          GammaGamma{4, 2, 1},     GammaGamma{1, 1.5, 3},   GammaGamma{0.7, 8, 0.5}, GammaGamma{10, 25, 2},
          KAmplitude{2, 1},        KAmplitude{0.4, 3},      KAmplitude{15, 0.2},
          WeibullNakagami{1.5, 3, 2}, WeibullNakagami{0.8, 1.2, 0.5}, WeibullNakagami{3, 6, 1},
          Fisher{3, 4, 1},         Fisher{1, 3, 1},         Fisher{8, 2.5, 0.3},   Fisher{0.8, 12, 2},
          InverseGamma{2.5, 2},    InverseGamma{0.6, 1}};
}

}  // namespace

TEST_CASE("empirical_log_stats") {
  const std::vector<double> ones(100, 1.0);
  const auto e = empirical_log_stats(ones, 4);
  for (int n = 0; n < 4; ++n) {
    CHECK(e.stats.log_moments[n] == 0.0);
    CHECK(e.stats.log_cumulants[n] == 0.0);
    CHECK(e.cumulant_stderr[n] == 0.0);
  }
  CHECK(e.count == 100);

  std::vector<double> with_zero(50, 2.0);
  with_zero[3] = 0.0;
  with_zero[9] = -1.0;
  CHECK_THROWS_AS(empirical_log_stats(with_zero, 2), ZeroSamples);
  try {
    empirical_log_stats(with_zero, 2);
  } catch (const ZeroSamples& z) {
    CHECK(z.count() == 2);
  }
  CHECK_THROWS_AS(empirical_log_stats(std::vector<double>(29, 1.0), 2), TooFewSamples);
  CHECK_NOTHROW(empirical_log_stats(std::vector<double>(30, 1.0), 2));
  CHECK_THROWS_AS(empirical_log_stats(ones, 5), UnsupportedOrder);

  // Two-point data: log x = +-1 equally often.
  std::vector<double> two;
  for (int i = 0; i < 500; ++i) {
    two.push_back(std::exp(1.0));
    two.push_back(std::exp(-1.0));
  }
  const auto t = empirical_log_stats(two, 4);
  CHECK(t.stats.log_moments[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(t.stats.log_moments[1] == doctest::Approx(1.0));
  CHECK(t.stats.log_cumulants[3] == doctest::Approx(-2.0));
}

TEST_CASE("exponential log-statistics") {
  const auto batch = sample(GammaPower{1, 1}, 1000000, 9);
  const auto e = empirical_log_stats(batch, 2);
  CHECK(std::abs(e.stats.log_cumulants[0] + kEulerGamma) <= 3.0 * e.cumulant_stderr[0]);
  CHECK(std::abs(e.stats.log_cumulants[1] - kPi * kPi / 6) <= 3.0 * e.cumulant_stderr[1]);
}

TEST_CASE("invert_polygamma") {
  CHECK(invert_polygamma(1, kPi * kPi / 6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(invert_polygamma(1, kPi * kPi / 6 - 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(invert_polygamma(1, -1.0), OutOfRange);
  CHECK_THROWS_AS(invert_polygamma(2, 0.5), OutOfRange);
  CHECK_THROWS_AS(invert_polygamma(1, 0.0), OutOfRange);
  CHECK_THROWS_AS(invert_polygamma(0, 1.0), DomainError);
  for (int m = 1; m <= 3; ++m) {
    for (double x = 0.05; x <= 100.0; x *= 1.3) {
      const double target = polygamma(m, x);
      const double got = invert_polygamma(m, target);
      CAPTURE(m);
      CAPTURE(x);
      CHECK(got == doctest::Approx(x).epsilon(1e-9));
      CHECK(std::abs(polygamma(m, got) - target) <= 1e-10 * std::max(1.0, std::abs(target)));
    }
  }
  CHECK(invert_polygamma(1, 1e-6) == doctest::Approx(1.0 / 1e-6).epsilon(1e-5));
  CHECK(invert_polygamma(1, 1e8) == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("fit examples") {
  const auto gamma = fit_molc(Family::GammaPower, LogStats::from_cumulants({-kEulerGamma, kPi * kPi / 6}));
  CHECK(gamma.converged);
  CHECK(gamma.spec.as<GammaPower>().L == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(gamma.spec.as<GammaPower>().mu == doctest::Approx(1.0).epsilon(1e-8));

  const auto w = fit_molc(Family::Weibull, LogStats::from_cumulants({0.0, kPi * kPi / 24}));
  CHECK(w.spec.as<Weibull>().b == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_molc(Family::KAmplitude, LogStats::from_cumulants({0.0, kPi * kPi / 24})), NoSolution);
  CHECK_THROWS_AS(fit_molc(Family::KAmplitude, LogStats::from_cumulants({0.0, 0.1})), NoSolution);
  CHECK_THROWS_AS(fit_molc(Family::GammaPower, LogStats::from_cumulants({0.0, -0.1})), NoSolution);
  CHECK_THROWS_AS(fit_molc(Family::GammaGamma, LogStats::from_cumulants({0.0, 1.0})), std::invalid_argument);
  // psi''(L) + psi''(M) = k3 has no solution when k3 >= 0.
  CHECK_THROWS_AS(fit_molc(Family::GammaGamma, LogStats::from_cumulants({0.0, 1.0, 0.5})), NoSolution);
}

TEST_CASE("noiseless round trip on the parameter grid") {
  for (const auto& spec : fit_grid()) {
    const auto fit = fit_molc(spec.family(), analytic_stats(spec, 4));
    CAPTURE(describe(spec));
    CAPTURE(describe(fit.spec));
    CHECK(fit.converged);
    CHECK(fit.residual <= 1e-9);
    CHECK(max_relative_param_error(fit.spec, spec) <= 1e-6);
  }
}

TEST_CASE("gamma-gamma labels are canonicalized") {
  const auto fit = fit_molc(Family::GammaGamma, analytic_stats(GammaGamma{6, 1.5, 2}, 3));
  CHECK(fit.spec.as<GammaGamma>().L == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(fit.spec.as<GammaGamma>().M == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(fit.spec.as<GammaGamma>().mu == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("Weibull-Nakagami with known c") {
  const DistributionSpec spec = WeibullNakagami{1.5, 3, 2};
  FitOptions opts;
  opts.known_c = 1.5;
  CHECK(required_orders(Family::WeibullNakagami, opts) == 2);
  CHECK(required_orders(Family::WeibullNakagami) == 4);
  const auto fit = fit_molc(Family::WeibullNakagami, analytic_stats(spec, 2), opts);
  CHECK(max_relative_param_error(fit.spec, spec) <= 1e-8);
  opts.known_c = 0.5;  // too small: psi'(1)/c^2 exceeds k2
  CHECK_THROWS_AS(fit_molc(Family::WeibullNakagami, analytic_stats(spec, 2), opts), NoSolution);
}

TEST_CASE("statistical round trip") {
  const std::vector<DistributionSpec> specs = {GammaPower{4, 1}, Weibull{1, 2}, KAmplitude{2, 1},
                                               GammaGamma{4, 2, 1}, Fisher{3, 4, 1}};
  for (const auto& spec : specs) {
    const auto e = empirical_log_stats(sample(spec, 1000000, 1), 3);
    const auto fit = fit_molc(spec.family(), e.stats);
    CAPTURE(describe(spec));
    CAPTURE(describe(fit.spec));
    const auto got = spec_params(canonical(fit.spec)), want = spec_params(canonical(spec));
    const double limit = (spec.family() == Family::GammaGamma || spec.family() == Family::Fisher) ? 0.10 : 0.05;
    for (const char* shape : {"L", "M", "alpha", "b"}) {
      if (!want.count(shape)) continue;
      CAPTURE(shape);
      CHECK(std::abs(got.at(shape) - want.at(shape)) / want.at(shape) <= limit);
    }
  }
}

TEST_CASE("texture log-cumulants") {
  const auto data = analytic_stats(GammaGamma{4, 2, 1}, 4);
  const auto tex = texture_log_cumulants(data, GammaPower{4, 1});
  const auto want = log_cumulants_analytic(GammaPower{2, 1}, 4);
  for (int n = 0; n < 4; ++n) CHECK(tex.log_cumulants[n] == doctest::Approx(want[n]).epsilon(1e-13).scale(1.0));
  CHECK(tex.log_moments == cumulants_to_moments(tex.log_cumulants));

  const auto self = texture_log_cumulants(analytic_stats(GammaPower{4, 1}, 4), GammaPower{4, 1});
  for (double k : self.log_cumulants) CHECK(k == 0.0);

  CHECK_THROWS_AS(texture_log_cumulants(data, KAmplitude{1, 1}), std::invalid_argument);

  const auto batch = sample_compound(GammaPower{4, 1}, GammaPower{2, 1}, 1000000, 21);
  const auto e = empirical_log_stats(batch, 4);
  const auto est = texture_log_cumulants(e.stats, GammaPower{4, 1});
  CHECK(std::abs(est.log_cumulants[1] - polygamma(1, 2.0)) <= 3.0 * e.cumulant_stderr[1]);
  CHECK(polygamma(3, 2.0) == doctest::Approx(std::pow(kPi, 4) / 15 - 6).epsilon(1e-12));
  CHECK(std::abs(est.log_cumulants[3] - polygamma(3, 2.0)) <= 3.0 * e.cumulant_stderr[3]);
}

TEST_CASE("delta-method standard errors") {
  // Exponential data: var(log x) = psi'(1), so SE(k1) = sqrt(psi'(1) / N).
  const std::size_t n = 400000;
  const auto e = empirical_log_stats(sample(GammaPower{1, 1}, n, 31), 4);
  CHECK(e.cumulant_stderr_asymptotic[0] == doctest::Approx(std::sqrt(kPi * kPi / 6 / n)).epsilon(0.01));
  // Block and delta-method estimates agree up to the block estimator's noise.
  for (int j = 0; j < 4; ++j) {
    CAPTURE(j);
    CHECK(e.cumulant_stderr[j] / e.cumulant_stderr_asymptotic[j] > 0.4);
    CHECK(e.cumulant_stderr[j] / e.cumulant_stderr_asymptotic[j] < 1.8);
  }
  // Replicated experiment: spread of k2 estimates matches the SE.
  double sum = 0.0, sum2 = 0.0;
  constexpr int kReps = 40;
  for (int r = 0; r < kReps; ++r) {
    const double k2 = empirical_log_stats(sample(GammaPower{1, 1}, 20000, 1000 + r), 2).stats.log_cumulants[1];
    sum += k2;
    sum2 += k2 * k2;
  }
  const double sd = std::sqrt((sum2 - sum * sum / kReps) / (kReps - 1));
  const double se = empirical_log_stats(sample(GammaPower{1, 1}, 20000, 999), 2).cumulant_stderr_asymptotic[1];
  CHECK(sd / se > 0.7);
  CHECK(sd / se < 1.3);
}
