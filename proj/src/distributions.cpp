#include "mellinstat/distributions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "mellinstat/errors.hpp"
#include "mellinstat/family_io.hpp"
#include "mellinstat/quadrature.hpp"
#include "mellinstat/specfun.hpp"

namespace mellinstat {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_param(const char* family, const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << family << ": parameter " << name << " must be finite and > 0, got " << v;
    throw DomainError(msg.str());
  }
}

// x^p * exp(rest) at x = 0, given the power p of the leading term.
double origin_limit(double power, double finite_value) {
  if (power > 0.0) return -kInf;
  if (power < 0.0) return kInf;
  return finite_value;
}

double log_pdf_gamma(double L, double mu, double v) {
  if (v == 0.0) return origin_limit(L - 1.0, L * std::log(L / mu) - ln_gamma(L));
  return L * std::log(L / mu) - ln_gamma(L) + (L - 1.0) * std::log(v) - L * v / mu;
}

double log_pdf_nakagami(double L, double mu, double r) {
  const double head = std::log(2.0) - ln_gamma(L) + L * std::log(L / (mu * mu));
  if (r == 0.0) return origin_limit(2.0 * L - 1.0, head);
  return head + (2.0 * L - 1.0) * std::log(r) - L * r * r / (mu * mu);
}

double log_pdf_maxwell(double sigma, double u) {
  if (u == 0.0) return -kInf;
  return -3.0 * std::log(sigma) + 0.5 * std::log(2.0 / std::numbers::pi) + 2.0 * std::log(u) -
         u * u / (2.0 * sigma * sigma);
}

double log_pdf_weibull(double z, double b, double x) {
  if (x == 0.0) return origin_limit(b - 1.0, std::log(b / z));
  const double lr = std::log(x / z);
  return std::log(b / z) + (b - 1.0) * lr - std::exp(b * lr);
}

double log_pdf_gamma_gamma(double L, double M, double mu, double v) {
  const double a = L * M / mu;
  const double head = std::log(2.0 * a) - ln_gamma(L) - ln_gamma(M);
  const double nu = M - L;
  if (v == 0.0) {
    const double lo = std::min(L, M);
    if (lo > 1.0) return -kInf;
    if (lo < 1.0 || nu == 0.0) return kInf;
    return std::log(a) + ln_gamma(std::abs(nu)) - ln_gamma(L) - ln_gamma(M);
  }
  const double av = a * v;
  return head + (0.5 * (L + M) - 1.0) * std::log(av) + log_bessel_k(nu, 2.0 * std::sqrt(av));
}

double log_pdf_k(double alpha, double b, double r) {
  if (r == 0.0) return origin_limit(2.0 * alpha - 1.0, std::log(2.0 * std::sqrt(b)));
  return std::log(4.0) + 0.5 * (alpha + 1.0) * std::log(b) + alpha * std::log(r) +
         log_bessel_k(alpha - 1.0, 2.0 * r * std::sqrt(b)) - ln_gamma(alpha);
}

// Mixture integral over the texture amplitude z = e^u:
//   f(r) = int Weibull(r | scale z, shape c) Nakagami(z | alpha, b) dz
// The log-integrand is concave in u, so it is integrated around its peak.
double log_pdf_weibull_nakagami(double c, double alpha, double b, double r) {
  if (r == 0.0) {
    if (c > 1.0) return -kInf;
    if (c < 1.0 || alpha <= 0.5) return kInf;
    return 0.5 * std::log(b) + ln_gamma(alpha - 0.5) - ln_gamma(alpha);  // E[1/Z]
  }
  const double log_r = std::log(r);
  const double head = std::log(2.0 * c) + alpha * std::log(b) - ln_gamma(alpha) + (c - 1.0) * log_r;
  const double lin = 2.0 * alpha - c;
  auto phi = [&](double u) { return lin * u - std::exp(c * (log_r - u)) - b * std::exp(2.0 * u); };
  auto dphi = [&](double u) {
    return lin + c * std::exp(c * (log_r - u)) - 2.0 * b * std::exp(2.0 * u);
  };
  auto d2phi = [&](double u) {
    return -c * c * std::exp(c * (log_r - u)) - 4.0 * b * std::exp(2.0 * u);
  };

  // Bracket the root of the decreasing derivative, then safeguarded Newton.
  double lo = std::min(log_r, 0.5 * std::log(alpha / b)) - 1.0;
  double hi = std::max(log_r, 0.5 * std::log(alpha / b)) + 1.0;
  for (double step = 1.0; dphi(lo) <= 0.0; step *= 2.0) lo -= step;
  for (double step = 1.0; dphi(hi) >= 0.0; step *= 2.0) hi += step;
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double d = dphi(u);
    if (d > 0.0) lo = u;
    else hi = u;
    double next = u - d / d2phi(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-14 * (1.0 + std::abs(u))) {
      u = next;
      break;
    }
    u = next;
  }
  const double peak = phi(u);
  const double width = 1.0 / std::sqrt(-d2phi(u));
  double up = width, down = width;
  while (phi(u + up) - peak > -60.0) up *= 2.0;
  while (phi(u - down) - peak > -60.0) down *= 2.0;
  const std::array<double, 3> cuts = {u - width, u, u + width};
  const quad::Tolerance tol{0.0, 1e-12, 400};
  const auto res =
      quad::integrate([&](double t) { return std::exp(phi(t) - peak); }, u - down, u + up, tol, cuts);
  return head + peak + std::log(res.value);
}

double log_pdf_fisher(double L, double M, double mu, double x) {
  const double lambda = L / (M * mu);
  const double head = ln_gamma(L + M) - ln_gamma(L) - ln_gamma(M) + std::log(lambda);
  if (x == 0.0) return origin_limit(L - 1.0, head);
  const double y = lambda * x;
  return head + (L - 1.0) * std::log(y) - (L + M) * std::log1p(y);
}

double log_pdf_inverse_gamma(double M, double mu, double z) {
  if (z == 0.0) return -kInf;
  const double beta = M * mu;
  return M * std::log(beta) - ln_gamma(M) - (M + 1.0) * std::log(z) - beta / z;
}

std::string strip_message(const DistributionSpec& spec, double s, const Strip& strip) {
  std::ostringstream msg;
  msg.precision(12);
  msg << family_key(spec.family()) << ": s = " << s << " outside the strip of analyticity ("
      << strip.lower << ", " << strip.upper << ")";
  return msg.str();
}

}  // namespace

void DistributionSpec::validate() const {
  std::visit(overloaded{
                 [](const GammaPower& p) {
                   check_param("gamma", "L", p.L);
                   check_param("gamma", "mu", p.mu);
                 },
                 [](const Nakagami& p) {
                   check_param("nakagami", "L", p.L);
                   check_param("nakagami", "mu", p.mu);
                 },
                 [](const Maxwell& p) { check_param("maxwell", "sigma", p.sigma); },
                 [](const Weibull& p) {
                   check_param("weibull", "z", p.z);
                   check_param("weibull", "b", p.b);
                 },
                 [](const Rayleigh& p) { check_param("rayleigh", "z", p.z); },
                 [](const GammaGamma& p) {
                   check_param("ggamma", "L", p.L);
                   check_param("ggamma", "M", p.M);
                   check_param("ggamma", "mu", p.mu);
                 },
                 [](const KAmplitude& p) {
                   check_param("k", "alpha", p.alpha);
                   check_param("k", "b", p.b);
                 },
                 [](const WeibullNakagami& p) {
                   check_param("wnak", "c", p.c);
                   check_param("wnak", "alpha", p.alpha);
                   check_param("wnak", "b", p.b);
                 },
                 [](const Fisher& p) {
                   check_param("fisher", "L", p.L);
                   check_param("fisher", "M", p.M);
                   check_param("fisher", "mu", p.mu);
                 },
                 [](const InverseGamma& p) {
                   check_param("invgamma", "M", p.M);
                   check_param("invgamma", "mu", p.mu);
                 },
             },
             params_);
}

bool DistributionSpec::is_compound() const {
  switch (family()) {
    case Family::GammaGamma:
    case Family::KAmplitude:
    case Family::WeibullNakagami:
    case Family::Fisher:
      return true;
    default:
      return false;
  }
}

MellinSignature mellin_signature(const DistributionSpec& spec) {
  return std::visit(
      overloaded{
          [](const GammaPower& p) { return MellinSignature{p.mu / p.L, {{p.L, 1.0}}}; },
          [](const Nakagami& p) { return MellinSignature{p.mu / std::sqrt(p.L), {{p.L, 0.5}}}; },
          [](const Maxwell& p) {
            return MellinSignature{p.sigma * std::numbers::sqrt2, {{1.5, 0.5}}};
          },
          [](const Weibull& p) { return MellinSignature{p.z, {{1.0, 1.0 / p.b}}}; },
          [](const Rayleigh& p) { return MellinSignature{p.z, {{1.0, 0.5}}}; },
          [](const GammaGamma& p) {
            return MellinSignature{p.mu / (p.L * p.M), {{p.L, 1.0}, {p.M, 1.0}}};
          },
          [](const KAmplitude& p) {
            return MellinSignature{1.0 / std::sqrt(p.b), {{1.0, 0.5}, {p.alpha, 0.5}}};
          },
          [](const WeibullNakagami& p) {
            return MellinSignature{1.0 / std::sqrt(p.b), {{1.0, 1.0 / p.c}, {p.alpha, 0.5}}};
          },
          [](const Fisher& p) {
            return MellinSignature{p.M * p.mu / p.L, {{p.L, 1.0}, {p.M, -1.0}}};
          },
          [](const InverseGamma& p) { return MellinSignature{p.M * p.mu, {{p.M, -1.0}}}; },
      },
      spec.params());
}

Strip analyticity_strip(const DistributionSpec& spec) {
  Strip strip{-kInf, kInf};
  for (const auto& f : mellin_signature(spec).factors) {
    // base + slope (s - 1) > 0
    const double edge = 1.0 - f.base / f.slope;
    if (f.slope > 0.0) strip.lower = std::max(strip.lower, edge);
    else strip.upper = std::min(strip.upper, edge);
  }
  return strip;
}

double log_pdf(const DistributionSpec& spec, double x) {
  if (!(x >= 0.0)) throw DomainError("pdf: x must be >= 0");
  if (std::isinf(x)) return -kInf;
  return std::visit(
      overloaded{
          [x](const GammaPower& p) { return log_pdf_gamma(p.L, p.mu, x); },
          [x](const Nakagami& p) { return log_pdf_nakagami(p.L, p.mu, x); },
          [x](const Maxwell& p) { return log_pdf_maxwell(p.sigma, x); },
          [x](const Weibull& p) { return log_pdf_weibull(p.z, p.b, x); },
          [x](const Rayleigh& p) { return log_pdf_weibull(p.z, 2.0, x); },
          [x](const GammaGamma& p) { return log_pdf_gamma_gamma(p.L, p.M, p.mu, x); },
          [x](const KAmplitude& p) { return log_pdf_k(p.alpha, p.b, x); },
          [x](const WeibullNakagami& p) { return log_pdf_weibull_nakagami(p.c, p.alpha, p.b, x); },
          [x](const Fisher& p) { return log_pdf_fisher(p.L, p.M, p.mu, x); },
          [x](const InverseGamma& p) { return log_pdf_inverse_gamma(p.M, p.mu, x); },
      },
      spec.params());
}

double pdf(const DistributionSpec& spec, double x) { return std::exp(log_pdf(spec, x)); }

double chf2_analytic(const DistributionSpec& spec, double s) {
  const Strip strip = analyticity_strip(spec);
  if (!strip.contains(s)) throw DomainError(strip_message(spec, s, strip));
  const auto sig = mellin_signature(spec);
  double phi = std::pow(sig.scale, s - 1.0);
  for (const auto& f : sig.factors) phi *= gamma_ratio(f.base + f.slope * (s - 1.0), f.base);
  return phi;
}

double log_chf2_analytic(const DistributionSpec& spec, double s) {
  const Strip strip = analyticity_strip(spec);
  if (!strip.contains(s)) throw DomainError(strip_message(spec, s, strip));
  const auto sig = mellin_signature(spec);
  double psi = (s - 1.0) * std::log(sig.scale);
  for (const auto& f : sig.factors) psi += log_gamma_ratio(f.base + f.slope * (s - 1.0), f.base);
  return psi;
}

double classical_moment(const DistributionSpec& spec, int n) {
  if (n < 0) throw DomainError("classical_moment: order must be >= 0");
  if (n == 0) return 1.0;
  const Strip strip = analyticity_strip(spec);
  if (!strip.contains(n + 1.0)) {
    const double bound = strip.upper - 1.0;
    std::ostringstream msg;
    msg.precision(12);
    msg << "MomentDoesNotExist: moment of order " << n << " is infinite for "
        << family_key(spec.family()) << "; requires n < M = " << bound;
    throw MomentDoesNotExist(msg.str(), bound);
  }
  return chf2_analytic(spec, n + 1.0);
}

std::vector<double> log_cumulants_analytic(const DistributionSpec& spec, int n_max) {
  if (n_max < 1 || n_max > 6)
    throw UnsupportedOrder("log_cumulants_analytic: n_max must be in [1, 6]");
  const auto sig = mellin_signature(spec);
  std::vector<double> k(n_max, 0.0);
  k[0] = std::log(sig.scale);
  for (const auto& f : sig.factors) {
    k[0] += f.slope * digamma(f.base);
    double w = f.slope;
    for (int n = 2; n <= n_max; ++n) {
      w *= f.slope;
      k[n - 1] += w * polygamma(n - 1, f.base);
    }
  }
  return k;
}

std::vector<double> texture_only_log_cumulants(const DistributionSpec& spec, int n_max) {
  auto k = log_cumulants_analytic(spec, n_max);
  double alpha = 0.0;
  if (spec.holds<KAmplitude>()) alpha = spec.as<KAmplitude>().alpha;
  else if (spec.holds<WeibullNakagami>()) alpha = spec.as<WeibullNakagami>().alpha;
  else return k;
  double w = 0.5;
  for (int n = 2; n <= n_max; ++n) {
    w *= 0.5;
    k[n - 1] = w * polygamma(n - 1, alpha);
  }
  return k;
}

std::optional<Components> components(const DistributionSpec& spec) {
  return std::visit(
      overloaded{
          [](const GammaGamma& p) -> std::optional<Components> {
            return Components{GammaPower{p.L, 1.0}, GammaPower{p.M, p.mu}};
          },
          [](const KAmplitude& p) -> std::optional<Components> {
            return Components{Rayleigh{1.0}, Nakagami{p.alpha, std::sqrt(p.alpha / p.b)}};
          },
          [](const WeibullNakagami& p) -> std::optional<Components> {
            return Components{Weibull{1.0, p.c}, Nakagami{p.alpha, std::sqrt(p.alpha / p.b)}};
          },
          [](const Fisher& p) -> std::optional<Components> {
            return Components{GammaPower{p.L, 1.0}, InverseGamma{p.M, p.mu}};
          },
          [](const auto&) -> std::optional<Components> { return std::nullopt; },
      },
      spec.params());
}

}  // namespace mellinstat
