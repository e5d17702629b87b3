#include <cmath>
#include <set>

#include "doctest.h"
#include "mellinstat/distributions.hpp"
#include "mellinstat/family_io.hpp"
#include "mellinstat/verification.hpp"

using namespace mellinstat;

TEST_CASE("richardson_derivative") {
  auto e = [](double x) { return std::exp(x); };
  for (int n = 1; n <= 4; ++n) CHECK(richardson_derivative(e, 0.3, n, 0.2) == doctest::Approx(std::exp(0.3)).epsilon(1e-8));
  auto c = [](double x) { return x * x * x; };
  CHECK(richardson_derivative(c, 2.0, 3, 0.5) == doctest::Approx(6.0).epsilon(1e-10));
  CHECK(std::abs(richardson_derivative(c, 2.0, 4, 0.5)) < 1e-6);
  CHECK_THROWS(richardson_derivative(c, 2.0, 0, 0.5));
}

TEST_CASE("grids cover every family with Phi defined on the s-grid") {
  for (Family f : all_families()) {
    const auto grid = verification_grid(f);
    CHECK(grid.size() >= 5);
    std::set<std::string> distinct;
    for (const auto& spec : grid) {
      CHECK(spec.family() == f);
      distinct.insert(describe(spec));
      for (double s : verification_s_grid()) CHECK(analyticity_strip(spec).contains(s));
    }
    CHECK(distinct.size() == grid.size());
  }
}

TEST_CASE("individual checks") {
  CHECK(check_normalization(Family::Weibull).passed);
  CHECK(check_phi_agreement(Family::Fisher).passed);
  CHECK(check_convolution(Family::GammaGamma).passed);
  CHECK(check_finite_difference_cumulants(Family::Nakagami).passed);
  CHECK(check_quadrature_cumulants(Family::Maxwell).passed);
  CHECK(check_cumulant_algebra().passed);
  CHECK(check_known_constants().passed);
  CHECK(check_monte_carlo(GammaPower{4, 1}, 200000, 3).passed);
  const auto forced = check_normalization(Family::GammaPower, 1e-15, 1e-17);
  CHECK_FALSE(forced.passed);
}

TEST_CASE("suite filtering") {
  VerifyOptions options;
  options.families = {Family::Rayleigh};
  options.monte_carlo_samples = 10000;
  const auto report = run_verification(options);
  CHECK(report.all_passed());
  for (const auto& c : report.checks) CHECK(c.target == "rayleigh");
  CHECK(report.checks.size() == 4);
}
