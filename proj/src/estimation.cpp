#include "mellinstat/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "mellinstat/family_io.hpp"
#include "mellinstat/specfun.hpp"

namespace mellinstat {
namespace {

constexpr double kTrigammaOne = 1.6449340668482264365;  // pi^2 / 6

std::vector<double> block_stat_errors(const std::vector<std::vector<double>>& blocks) {
  const std::size_t n = blocks.front().size();
  const double nb = static_cast<double>(blocks.size());
  std::vector<double> se(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double mean = 0.0;
    for (const auto& b : blocks) mean += b[j];
    mean /= nb;
    double ss = 0.0;
    for (const auto& b : blocks) ss += (b[j] - mean) * (b[j] - mean);
    se[j] = std::sqrt(ss / (nb - 1.0) / nb);
  }
  return se;
}

std::vector<double> raw_log_moments(std::span<const double> values, int n_max) {
  std::array<long double, 4> acc{};
  for (double x : values) {
    const long double l = std::log(static_cast<long double>(x));
    long double p = 1.0L;
    for (int n = 0; n < n_max; ++n) {
      p *= l;
      acc[n] += p;
    }
  }
  std::vector<double> m(n_max);
  for (int n = 0; n < n_max; ++n) m[n] = static_cast<double>(acc[n] / values.size());
  return m;
}

// With d = log x - mean and central moments c2, c3, c4:
//   IF(k1) = d, IF(k2) = d^2 - c2, IF(k3) = d^3 - c3 - 3 c2 d,
//   IF(k4) = d^4 - c4 - 4 c3 d - 6 c2 (d^2 - c2).
std::vector<double> influence_stat_errors(std::span<const double> values, int n_max) {
  const double n = static_cast<double>(values.size());
  long double sum = 0.0L;
  for (double x : values) sum += std::log(static_cast<long double>(x));
  const long double mean = sum / values.size();
  long double c2 = 0.0L, c3 = 0.0L, c4 = 0.0L;
  for (double x : values) {
    const long double d = std::log(static_cast<long double>(x)) - mean;
    c2 += d * d;
    c3 += d * d * d;
    c4 += d * d * d * d;
  }
  c2 /= values.size();
  c3 /= values.size();
  c4 /= values.size();
  std::array<long double, 4> ss{};
  for (double x : values) {
    const long double d = std::log(static_cast<long double>(x)) - mean;
    const long double d2 = d * d;
    const std::array<long double, 4> inf = {d, d2 - c2, d2 * d - c3 - 3.0L * c2 * d,
                                            d2 * d2 - c4 - 4.0L * c3 * d - 6.0L * c2 * (d2 - c2)};
    for (int j = 0; j < 4; ++j) ss[j] += inf[j] * inf[j];
  }
  std::vector<double> se(n_max);
  for (int j = 0; j < n_max; ++j) se[j] = static_cast<double>(std::sqrt(ss[j] / values.size() / n));
  return se;
}

// Bisection on a bracketed sign change, carried out in log-space of the variable.
double bisect_log(const std::function<double(double)>& h, double lo, double hi, int& iterations) {
  double h_lo = h(lo);
  for (int it = 0; it < 400; ++it) {
    ++iterations;
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi) || hi / lo - 1.0 < 1e-15) break;
    const double h_mid = h(mid);
    if (h_mid == 0.0) return mid;
    if ((h_mid > 0.0) == (h_lo > 0.0)) {
      lo = mid;
      h_lo = h_mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

// Damped Newton on a 2x2 system; a step is accepted only if it lowers the
// residual, halving it up to 20 times. Returns the improved point.
struct Newton2 {
  std::function<std::array<double, 2>(double, double)> residual;
  std::function<std::array<double, 4>(double, double)> jacobian;  // row-major
};

std::array<double, 2> polish(const Newton2& sys, std::array<double, 2> x, int max_iter,
                             int& iterations) {
  auto norm = [](const std::array<double, 2>& r) { return std::max(std::abs(r[0]), std::abs(r[1])); };
  auto r = sys.residual(x[0], x[1]);
  for (int it = 0; it < max_iter; ++it) {
    const double current = norm(r);
    if (current == 0.0) break;
    const auto j = sys.jacobian(x[0], x[1]);
    const double det = j[0] * j[3] - j[1] * j[2];
    const double scale = std::max({std::abs(j[0] * j[3]), std::abs(j[1] * j[2]), 1e-300});
    if (std::abs(det) < 1e-12 * scale) break;
    const std::array<double, 2> step = {(j[3] * r[0] - j[1] * r[1]) / det,
                                        (-j[2] * r[0] + j[0] * r[1]) / det};
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving, lambda *= 0.5) {
      const std::array<double, 2> trial = {x[0] - lambda * step[0], x[1] - lambda * step[1]};
      if (!(trial[0] > 0.0 && trial[1] > 0.0)) continue;
      const auto rt = sys.residual(trial[0], trial[1]);
      if (norm(rt) < current) {
        x = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    ++iterations;
    if (!accepted) break;
  }
  return x;
}

double invert_trigamma_or_fail(double target, const char* family, const char* what) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    std::ostringstream msg;
    msg << "NoSolution: " << family << " needs " << what << " > 0, got " << target;
    throw NoSolution(msg.str());
  }
  return invert_polygamma(1, target);
}

void require_orders(Family family, const LogStats& stats, int needed) {
  if (stats.order < needed || static_cast<int>(stats.log_cumulants.size()) < needed)
    throw std::invalid_argument("fit_molc: " + family_key(family) + " needs log-cumulants up to order " +
                                std::to_string(needed) + ", got " + std::to_string(stats.order));
}

[[noreturn]] void no_solution(const std::string& family, const std::string& reason) {
  throw NoSolution("NoSolution: " + family + ": " + reason);
}

}  // namespace

EmpiricalLogStats empirical_log_stats(std::span<const double> values, int n_max) {
  if (n_max < 1 || n_max > 4) throw UnsupportedOrder("empirical_log_stats: n_max must be in [1, 4]");
  const std::size_t bad = std::count_if(values.begin(), values.end(), [](double x) { return !(x > 0.0); });
  if (bad > 0) throw ZeroSamples(bad);
  if (values.size() < kMinLogStatSamples) throw TooFewSamples(values.size(), kMinLogStatSamples);

  EmpiricalLogStats out;
  out.count = values.size();
  out.stats = LogStats::from_moments(raw_log_moments(values, n_max));

  std::vector<std::vector<double>> block_m, block_k;
  const std::size_t n = values.size();
  for (int b = 0; b < kStandardErrorBlocks; ++b) {
    const std::size_t begin = n * b / kStandardErrorBlocks;
    const std::size_t end = n * (b + 1) / kStandardErrorBlocks;
    auto m = raw_log_moments(values.subspan(begin, end - begin), n_max);
    block_k.push_back(moments_to_cumulants(m));
    block_m.push_back(std::move(m));
  }
  out.moment_stderr = block_stat_errors(block_m);
  out.cumulant_stderr = block_stat_errors(block_k);
  out.cumulant_stderr_asymptotic = influence_stat_errors(values, n_max);
  return out;
}

EmpiricalLogStats empirical_log_stats(const SampleBatch& batch, int n_max) {
  return empirical_log_stats(std::span<const double>(batch.values), n_max);
}

double invert_polygamma(int order, double target) {
  if (order < 1) throw DomainError("invert_polygamma: order must be >= 1");
  const bool positive = (order % 2 == 1);
  if (!std::isfinite(target) || (positive ? !(target > 0.0) : !(target < 0.0))) {
    std::ostringstream msg;
    msg << "OutOfRange: psi^(" << order << ") takes only " << (positive ? "positive" : "negative")
        << " values; target " << target;
    throw OutOfRange(msg.str());
  }
  // |psi^(m)| is strictly decreasing from +inf to 0; solve log|psi^(m)(e^u)| = log|target|.
  const double goal = std::abs(target);
  const double log_goal = std::log(goal);
  auto f = [&](double x) { return std::abs(polygamma(order, x)); };

  double factorial = 1.0;
  for (int k = 2; k < order; ++k) factorial *= k;  // (m-1)!
  double x = std::pow(factorial / goal, 1.0 / order);
  if (order == 1) x = (1.0 + std::sqrt(1.0 + 2.0 * goal)) / (2.0 * goal);  // 1/x + 1/(2x^2) = t
  double lo = x, hi = x;
  for (int i = 0; i < 2100 && f(lo) < goal; ++i) lo *= 0.5;
  for (int i = 0; i < 2100 && f(hi) > goal; ++i) hi *= 2.0;
  if (!(f(lo) >= goal && f(hi) <= goal))
    throw OutOfRange("OutOfRange: invert_polygamma could not bracket target");

  double u = std::log(x);
  double u_lo = std::log(lo), u_hi = std::log(hi);
  for (int it = 0; it < 200; ++it) {
    const double xu = std::exp(u);
    const double val = polygamma(order, xu);
    const double g = std::log(std::abs(val)) - log_goal;
    if (g == 0.0) break;
    if (g > 0.0) u_lo = u;
    else u_hi = u;
    // d/du log|psi^(m)(e^u)| = x psi^(m+1)(x) / psi^(m)(x)
    const double dg = xu * polygamma(order + 1, xu) / val;
    double next = u - g / dg;
    if (!(next >= u_lo && next <= u_hi)) next = 0.5 * (u_lo + u_hi);
    const double delta = std::abs(next - u);
    u = next;
    if (delta <= 1e-15 * std::max(1.0, std::abs(u))) break;
  }
  return std::exp(u);
}

int required_orders(Family family, const FitOptions& options) {
  switch (family) {
    case Family::Maxwell:
    case Family::Rayleigh:
      return 1;
    case Family::GammaGamma:
    case Family::Fisher:
      return 3;
    case Family::WeibullNakagami:
      return options.known_c ? 2 : 4;
    default:
      return 2;
  }
}

FitResult fit_molc(Family family, const LogStats& stats, const FitOptions& options) {
  const int needed = required_orders(family, options);
  require_orders(family, stats, needed);
  const auto& k = stats.log_cumulants;
  for (int n = 0; n < needed; ++n)
    if (!std::isfinite(k[n])) no_solution(family_key(family), "non-finite log-cumulant");
  const double k1 = k[0];
  const double k2 = needed >= 2 ? k[1] : 0.0;
  const double k3 = needed >= 3 ? k[2] : 0.0;
  // k4 only selects between roots; it is not matched exactly.
  const int matched = family == Family::WeibullNakagami && !options.known_c ? 3 : needed;
  const std::string name = family_key(family);
  if (needed >= 2 && !(k2 > 0.0)) no_solution(name, "k2 must be > 0");

  int iterations = 0;
  auto finish = [&](DistributionSpec spec) {
    const auto model = log_cumulants_analytic(spec, matched);
    double residual = 0.0;
    for (int n = 0; n < matched; ++n)
      residual = std::max(residual, std::abs(model[n] - k[n]) / std::max(1.0, std::abs(k[n])));
    FitResult result{std::move(spec), iterations, residual, residual <= options.tolerance};
    if (!result.converged) {
      std::ostringstream msg;
      msg << "NonConvergence: " << name << " fit stopped with relative residual " << residual;
      throw FitNonConvergence(msg.str(), result);
    }
    return result;
  };

  switch (family) {
    case Family::GammaPower: {
      const double L = invert_trigamma_or_fail(k2, "gamma", "k2");
      return finish(GammaPower{L, L * std::exp(k1 - digamma(L))});
    }
    case Family::Nakagami: {
      const double L = invert_trigamma_or_fail(4.0 * k2, "nakagami", "4 k2");
      return finish(Nakagami{L, std::sqrt(L) * std::exp(k1 - 0.5 * digamma(L))});
    }
    case Family::Maxwell:
      return finish(Maxwell{std::exp(k1 - 0.5 * digamma(1.5)) / std::sqrt(2.0)});
    case Family::Weibull: {
      const double b = std::sqrt(kTrigammaOne / k2);
      return finish(Weibull{std::exp(k1 + kEulerGamma / b), b});
    }
    case Family::Rayleigh:
      return finish(Rayleigh{std::exp(k1 + 0.5 * kEulerGamma)});
    case Family::InverseGamma: {
      const double M = invert_trigamma_or_fail(k2, "invgamma", "k2");
      return finish(InverseGamma{M, std::exp(k1 + digamma(M)) / M});
    }
    case Family::KAmplitude: {
      const double excess = 4.0 * k2 - kTrigammaOne;
      if (!(excess > 0.0))
        no_solution(name, "4 k2 must exceed psi'(1) (variance above the Rayleigh limit)");
      const double alpha = invert_polygamma(1, excess);
      return finish(KAmplitude{alpha, std::exp(digamma(alpha) - kEulerGamma - 2.0 * k1)});
    }
    case Family::WeibullNakagami: {
      auto alpha_of = [&](double c) { return invert_polygamma(1, 4.0 * (k2 - kTrigammaOne / (c * c))); };
      auto b_of = [&](double c, double alpha) {
        return std::exp(2.0 * (-kEulerGamma / c + 0.5 * digamma(alpha) - k1));
      };
      if (options.known_c) {
        const double c = *options.known_c;
        if (!(c > 0.0)) throw DomainError("fit_molc: known c must be > 0");
        if (!(k2 > kTrigammaOne / (c * c)))
          no_solution(name, "k2 must exceed psi'(1)/c^2 for the given c");
        const double alpha = alpha_of(c);
        return finish(WeibullNakagami{c, alpha, b_of(c, alpha)});
      }
      // Profile over c: alpha(c) matches k2, then psi''(1)/c^3 + psi''(alpha)/8 = k3.
      // That equation typically has two roots; k4 picks between them.
      const double c_min = std::sqrt(kTrigammaOne / k2);
      auto h = [&](double c) {
        return polygamma(2, 1.0) / (c * c * c) + polygamma(2, alpha_of(c)) / 8.0 - k3;
      };
      Newton2 sys{
          [&](double cc, double a) {
            return std::array<double, 2>{kTrigammaOne / (cc * cc) + polygamma(1, a) / 4.0 - k2,
                                         polygamma(2, 1.0) / (cc * cc * cc) + polygamma(2, a) / 8.0 - k3};
          },
          [&](double cc, double a) {
            return std::array<double, 4>{-2.0 * kTrigammaOne / (cc * cc * cc), polygamma(2, a) / 4.0,
                                         -3.0 * polygamma(2, 1.0) / (cc * cc * cc * cc),
                                         polygamma(3, a) / 8.0};
          }};
      constexpr int kScan = 240;  // log grid over c in (c_min, 1e6 c_min]
      std::optional<FitResult> best;
      double best_k4 = std::numeric_limits<double>::infinity();
      double prev_c = c_min * (1.0 + 1e-9);
      double prev_h = h(prev_c);
      for (int i = 1; i <= kScan; ++i) {
        const double c_i = c_min * std::pow(1e6, static_cast<double>(i) / kScan);
        const double h_i = h(c_i);
        if ((h_i > 0.0) != (prev_h > 0.0)) {
          const double c0 = bisect_log(h, prev_c, c_i, iterations);
          const auto x = polish(sys, {c0, alpha_of(c0)}, options.max_iterations, iterations);
          const DistributionSpec candidate = WeibullNakagami{x[0], x[1], b_of(x[0], x[1])};
          const double miss = std::abs(log_cumulants_analytic(candidate, 4)[3] - k[3]);
          if (miss < best_k4) {
            best_k4 = miss;
            best = FitResult{candidate, 0, 0.0, false};
          }
        }
        prev_c = c_i;
        prev_h = h_i;
      }
      if (!best) no_solution(name, "k3 outside the range reachable for this k2");
      return finish(best->spec);
    }
    case Family::GammaGamma: {
      // Profile over the smaller shape L in (x_min, x_sym]; M(L) matches k2.
      const double x_min = invert_polygamma(1, k2);
      const double x_sym = invert_polygamma(1, 0.5 * k2);
      auto m_of = [&](double L) {
        const double rest = k2 - polygamma(1, L);
        return rest > 0.0 ? invert_polygamma(1, rest) : std::numeric_limits<double>::infinity();
      };
      auto h = [&](double L) {
        const double M = m_of(L);
        return polygamma(2, L) + (std::isfinite(M) ? polygamma(2, M) : 0.0) - k3;
      };
      const double lo = x_min * (1.0 + 1e-9);
      const double h_lo = h(lo), h_sym = 2.0 * polygamma(2, x_sym) - k3;
      double L;
      if (h_sym == 0.0) L = x_sym;
      else if ((h_lo > 0.0) == (h_sym > 0.0))
        no_solution(name, "k3 outside the range reachable for this k2");
      else L = bisect_log(h, lo, x_sym, iterations);
      double M = std::min(m_of(L), 1e300);
      Newton2 sys{
          [&](double a, double b) {
            return std::array<double, 2>{polygamma(1, a) + polygamma(1, b) - k2,
                                         polygamma(2, a) + polygamma(2, b) - k3};
          },
          [&](double a, double b) {
            return std::array<double, 4>{polygamma(2, a), polygamma(2, b), polygamma(3, a), polygamma(3, b)};
          }};
      const auto x = polish(sys, {L, M}, options.max_iterations, iterations);
      L = std::min(x[0], x[1]);
      M = std::max(x[0], x[1]);
      return finish(GammaGamma{L, M, L * M * std::exp(k1 - digamma(L) - digamma(M))});
    }
    case Family::Fisher: {
      // Profile over L in (x_min, inf); M(L) matches k2, k3 fixes L.
      const double x_min = invert_polygamma(1, k2);
      auto m_of = [&](double L) { return invert_polygamma(1, k2 - polygamma(1, L)); };
      auto h = [&](double L) { return polygamma(2, L) - polygamma(2, m_of(L)) - k3; };
      const double lo = x_min * (1.0 + 1e-9);
      const bool left_sign = h(lo) > 0.0;
      double hi = 2.0 * x_min;
      while ((h(hi) > 0.0) == left_sign && hi < 1e8 * x_min) hi *= 2.0;
      if ((h(hi) > 0.0) == left_sign) no_solution(name, "k3 outside the range reachable for this k2");
      double L = bisect_log(h, lo, hi, iterations);
      double M = m_of(L);
      Newton2 sys{
          [&](double a, double b) {
            return std::array<double, 2>{polygamma(1, a) + polygamma(1, b) - k2,
                                         polygamma(2, a) - polygamma(2, b) - k3};
          },
          [&](double a, double b) {
            return std::array<double, 4>{polygamma(2, a), polygamma(2, b), polygamma(3, a), -polygamma(3, b)};
          }};
      const auto x = polish(sys, {L, M}, options.max_iterations, iterations);
      L = x[0];
      M = x[1];
      const double mu = std::exp(k1 - digamma(L) + std::log(L) + digamma(M) - std::log(M));
      return finish(Fisher{L, M, mu});
    }
  }
  throw std::invalid_argument("fit_molc: unsupported family");
}

LogStats texture_log_cumulants(const LogStats& data_stats, const DistributionSpec& speckle) {
  if (speckle.is_compound())
    throw std::invalid_argument("texture_log_cumulants: speckle must be a simple law, got " +
                                family_key(speckle.family()));
  const int order = static_cast<int>(data_stats.log_cumulants.size());
  if (order < 1 || order > 4 || order != data_stats.order)
    throw UnsupportedOrder("texture_log_cumulants: order mismatch (need 1..4 consistent orders)");
  const auto speckle_k = log_cumulants_analytic(speckle, order);
  std::vector<double> texture(order);
  for (int n = 0; n < order; ++n) texture[n] = data_stats.log_cumulants[n] - speckle_k[n];
  return LogStats::from_cumulants(std::move(texture));
}

}  // namespace mellinstat
