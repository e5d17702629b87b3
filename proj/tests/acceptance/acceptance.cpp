// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "mellinstat/distributions.hpp"
#include "mellinstat/estimation.hpp"
#include "mellinstat/family_io.hpp"
#include "mellinstat/sampling.hpp"
#include "mellinstat/simulation.hpp"
#include "mellinstat/specfun.hpp"
#include "mellinstat/verification.hpp"

using namespace mellinstat;

namespace {

struct Outcome {
  bool passed;
  std::string summary;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome all_checks(const std::vector<CheckResult>& checks) {
  bool ok = true;
  double worst = 0.0;
  std::string failed;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    worst = std::max(worst, c.max_error / c.gate);
    if (!c.passed) failed += " " + c.group + "/" + c.target + "(" + sci(c.max_error) + ": " + c.detail + ")";
  }
  return {ok, std::to_string(checks.size()) + " checks, worst error/gate = " + sci(worst) +
                  (failed.empty() ? "" : "; failed:" + failed)};
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i + 1);
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto a = ranks(x), b = ranks(y);
  const double mean = (a.size() + 1) / 2.0;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - mean) * (b[i] - mean);
    saa += (a[i] - mean) * (a[i] - mean);
    sbb += (b[i] - mean) * (b[i] - mean);
  }
  return sab / std::sqrt(saa * sbb);
}

DistributionSpec canonical(const DistributionSpec& spec) {
  if (!spec.holds<GammaGamma>()) return spec;
  const auto& p = spec.as<GammaGamma>();
  return GammaGamma{std::min(p.L, p.M), std::max(p.L, p.M), p.mu};
}

Outcome criterion_normalization() {
  std::vector<CheckResult> checks;
  for (Family f : all_families()) checks.push_back(check_normalization(f));
  return all_checks(checks);
}

Outcome criterion_phi() {
  std::vector<CheckResult> checks;
  for (Family f : all_families()) checks.push_back(check_phi_agreement(f));
  return all_checks(checks);
}

Outcome criterion_convolution() {
  std::vector<CheckResult> checks;
  for (Family f : {Family::GammaGamma, Family::KAmplitude, Family::WeibullNakagami, Family::Fisher})
    checks.push_back(check_convolution(f));
  return all_checks(checks);
}

Outcome criterion_algebra() { return all_checks({check_cumulant_algebra()}); }

Outcome criterion_monte_carlo() {
  std::vector<CheckResult> checks;
  std::uint64_t seed = 20240611;
  for (const auto& spec : monte_carlo_specs()) checks.push_back(check_monte_carlo(spec, 1000000, seed++));
  auto out = all_checks(checks);
  // The texture-only log-cumulant forms must be rejected by the same kind of data.
  double weakest_rejection = 1e300;
  for (const DistributionSpec spec : {DistributionSpec(KAmplitude{2, 1}), DistributionSpec(WeibullNakagami{1.5, 3, 2})}) {
    const auto e = empirical_log_stats(sample(spec, 1000000, 77), 4);
    const auto partial = texture_only_log_cumulants(spec, 4);
    double z = 0.0;
    for (int n = 1; n < 4; ++n)
      z = std::max(z, std::abs(e.stats.log_cumulants[n] - partial[n]) / e.cumulant_stderr[n]);
    weakest_rejection = std::min(weakest_rejection, z);
  }
  out.passed = out.passed && weakest_rejection > 4.0;
  out.summary += " (gate 4 SE); texture-only K/WN forms miss by >= " + sci(weakest_rejection) + " SE (must exceed 4)";
  return out;
}

Outcome criterion_constants() { return all_checks({check_known_constants()}); }

Outcome criterion_molc() {
  bool ok = true;
  double worst_noiseless = 0.0;
  std::string failed;
  for (Family f : all_families()) {
    for (const auto& spec : verification_grid(f)) {
      try {
        const auto fit = fit_molc(f, LogStats::from_cumulants(log_cumulants_analytic(spec, 4)));
        const auto got = spec_params(canonical(fit.spec)), want = spec_params(canonical(spec));
        for (const auto& [k, v] : want) worst_noiseless = std::max(worst_noiseless, std::abs(got.at(k) - v) / v);
      } catch (const std::exception& e) {
        ok = false;
        failed += " " + describe(spec) + ": " + e.what();
      }
    }
  }
  ok = ok && worst_noiseless <= 1e-6;

  const std::vector<DistributionSpec> specs = {GammaPower{4, 1},    Nakagami{1.5, 1},  Maxwell{0.8},
                                               Weibull{1, 2},       Rayleigh{1.3},     GammaGamma{4, 2, 1},
                                               KAmplitude{2, 1},    WeibullNakagami{1.5, 3, 2},
                                               Fisher{3, 4, 1},     InverseGamma{3, 1}};
  double worst_one = 0.0, worst_two = 0.0;
  for (const auto& spec : specs) {
    const bool two_shape = spec.holds<GammaGamma>() || spec.holds<Fisher>() || spec.holds<WeibullNakagami>();
    for (std::uint64_t seed : {1, 2, 3}) {
      try {
        const auto e = empirical_log_stats(sample(spec, 1000000, seed), 4);
        const auto fit = fit_molc(spec.family(), e.stats);
        const auto got = spec_params(canonical(fit.spec)), want = spec_params(canonical(spec));
        // Shape parameters; scale-only laws (Maxwell, Rayleigh) report their scale.
        std::vector<std::string> keys;
        for (const char* k : {"L", "M", "alpha", "c", "b"})
          if (want.count(k) && !(spec.holds<KAmplitude>() && std::string(k) == "b")) keys.push_back(k);
        if (keys.empty()) keys.push_back(want.begin()->first);
        for (const auto& k : keys) {
          const double rel = std::abs(got.at(k) - want.at(k)) / want.at(k);
          (two_shape ? worst_two : worst_one) = std::max(two_shape ? worst_two : worst_one, rel);
        }
      } catch (const std::exception& e) {
        ok = false;
        failed += " " + describe(spec) + " seed " + std::to_string(seed) + ": " + e.what();
      }
    }
  }
  ok = ok && worst_one <= 0.05 && worst_two <= 0.10;
  return {ok, "noiseless max rel err " + sci(worst_noiseless) + " (gate 1e-6); 1e6-draw shapes, seeds 1-3: one-shape " +
                  sci(worst_one) + " (gate 0.05), two-shape " + sci(worst_two) + " (gate 0.10)" + failed};
}

Outcome criterion_sweep() {
  SweepConfig cfg;
  cfg.M_grid = default_M_grid();
  const auto rows = run_sweep(cfg);
  std::vector<double> m2, k2, m4, k4;
  double worst_se = 0.0, k2_small = 0.0, k2_large = 0.0, nearest = 1e300;
  for (const auto& r : rows) {
    if (r.order == 2 && std::abs(r.M - 0.5) < nearest) {
      nearest = std::abs(r.M - 0.5);
      k2_small = r.logcumulant_texture_est;
    }
    if (r.order == 2 && r.M == 20.0) k2_large = r.logcumulant_texture_est;
    if (r.M < 1.0 || r.M > 20.0) continue;
    worst_se = std::max(worst_se, std::abs(r.logcumulant_texture_est - r.logcumulant_texture_analytic) / r.standard_error);
    if (r.order == 2) {
      m2.push_back(r.M);
      k2.push_back(r.logcumulant_texture_est);
    } else {
      m4.push_back(r.M);
      k4.push_back(std::abs(r.logcumulant_texture_est));
    }
  }
  const double rho2 = spearman(m2, k2), rho4 = spearman(m4, k4);
  const double ratio = k2_small / k2_large;
  const bool ok = rho2 < -0.95 && rho4 < -0.95 && worst_se <= 3.0 && ratio >= 10.0;
  return {ok, "rho(k2)=" + sci(rho2) + " rho(|k4|)=" + sci(rho4) + " (gate -0.95); worst |est-psi|/SE over M in [1,20] = " +
                  sci(worst_se) + " (gate 3); k2(M~0.5)/k2(M=20) = " + sci(ratio) + " (gate 10)"};
}

Outcome criterion_cli_verify() {
  const std::string cmd = std::string("\"") + MELLINSTAT_CLI_PATH + "\" verify > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const bool ok = status == 0;
  return {ok, "`mellinstat verify` exit status " + std::to_string(status)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "normalization of every density", 30, criterion_normalization},
      {2, "closed-form Phi vs quadrature", 120, criterion_phi},
      {3, "convolution product of compound laws", 0, criterion_convolution},
      {4, "moment/cumulant algebra", 0, criterion_algebra},
      {5, "Monte-Carlo log-cumulants", 120, criterion_monte_carlo},
      {6, "known constants", 0, criterion_constants},
      {7, "MoLC round trips", 180, criterion_molc},
      {8, "texture sweep properties", 300, criterion_sweep},
      {9, "verify command exit status", 0, criterion_cli_verify},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit_s == 0 || secs < c.time_limit_s;
    const bool passed = out.passed && in_time;
    failures += !passed;
    std::printf("%s criterion %d: %s; %s; %.1f s%s\n", passed ? "PASS" : "FAIL", c.id, c.name, out.summary.c_str(), secs,
                c.time_limit_s > 0 ? (" (limit " + std::to_string(static_cast<int>(c.time_limit_s)) + " s)").c_str() : "");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
