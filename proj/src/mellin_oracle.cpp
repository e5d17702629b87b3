#include "mellinstat/mellin_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mellinstat/errors.hpp"
#include "mellinstat/family_io.hpp"
#include "mellinstat/quadrature.hpp"

namespace mellinstat {
namespace {

constexpr int kScanPoints = 801;
constexpr double kWindowStep = 40.0;
constexpr double kWindowLimit = 700.0;

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.rel_tol > 0.0)) throw DomainError("QuadratureConfig: rel_tol must be > 0");
  if (!(cfg.abs_tol >= 0.0)) throw DomainError("QuadratureConfig: abs_tol must be >= 0");
  if (!(cfg.t_min < cfg.t_max)) throw DomainError("QuadratureConfig: t_min must be < t_max");
  if (cfg.max_subdivisions < 1) throw DomainError("QuadratureConfig: max_subdivisions must be >= 1");
}

double safe(double v) { return std::isfinite(v) ? v : 0.0; }

// Window and breakpoints fitted to one integrand on the log axis.
struct LogWindow {
  double lo;
  double hi;
  std::vector<double> cuts;
};

template <class G>
LogWindow fit_window(G& g, const QuadratureConfig& cfg) {
  LogWindow w{cfg.t_min, cfg.t_max, {}};
  // Widen while the integrand is still significant at an edge.
  for (int i = 0; i < 16 && std::abs(g(w.lo)) > cfg.abs_tol && w.lo > -kWindowLimit; ++i)
    w.lo -= kWindowStep;
  for (int i = 0; i < 16 && std::abs(g(w.hi)) > cfg.abs_tol && w.hi < kWindowLimit; ++i)
    w.hi += kWindowStep;

  const double h = (w.hi - w.lo) / (kScanPoints - 1);
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double v = std::abs(g(w.lo + i * h));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement of the peak inside the neighbouring cells.
  double a = w.lo + std::max(0, best - 1) * h;
  double b = w.lo + std::min(kScanPoints - 1, best + 1) * h;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = std::abs(g(c)), fd = std::abs(g(d));
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = std::abs(g(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = std::abs(g(d));
    }
  }
  const double peak = 0.5 * (a + b);
  for (double off : {0.0, 1e-3, 1e-2, 0.1, 1.0, 3.0, 10.0}) {
    w.cuts.push_back(peak + off);
    if (off > 0.0) w.cuts.push_back(peak - off);
  }
  return w;
}

template <class G>
double integrate_window(G& g, const LogWindow& w, const QuadratureConfig& cfg, const char* what) {
  const quad::Tolerance tol{cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions};
  const auto res = quad::integrate(g, w.lo, w.hi, tol, w.cuts);
  const double tail = std::abs(g(w.lo)) + std::abs(g(w.hi));
  if (!res.converged || tail > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value))) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "NonConvergence in " << what << ": quadrature limit reached after " << res.subdivisions
        << " subdivisions (best estimate " << res.value << ", error bound " << res.error + tail
        << ", requested rel_tol " << cfg.rel_tol << ")";
    throw NonConvergence(msg.str(), res.value, res.error + tail);
  }
  return res.value;
}

void check_order(std::size_t n, const char* fn) {
  if (n < 1 || n > 4)
    throw UnsupportedOrder(std::string(fn) + ": supports 1 to 4 orders, got " + std::to_string(n));
}

}  // namespace

LogStats LogStats::from_moments(std::vector<double> moments) {
  LogStats out;
  out.order = static_cast<int>(moments.size());
  out.log_cumulants = moments_to_cumulants(moments);
  out.log_moments = std::move(moments);
  return out;
}

LogStats LogStats::from_cumulants(std::vector<double> cumulants) {
  LogStats out;
  out.order = static_cast<int>(cumulants.size());
  out.log_moments = cumulants_to_moments(cumulants);
  out.log_cumulants = std::move(cumulants);
  return out;
}

double mellin_numeric(const Density& density, double s, const QuadratureConfig& cfg) {
  validate(cfg);
  auto g = [&](double t) {
    const double f = density(std::exp(t));
    if (f == 0.0) return 0.0;
    return safe(std::exp(s * t) * f);
  };
  const auto window = fit_window(g, cfg);
  return integrate_window(g, window, cfg, "mellin_numeric");
}

LogStats log_moments_numeric(const Density& density, int n_max, const QuadratureConfig& cfg) {
  validate(cfg);
  check_order(static_cast<std::size_t>(std::max(n_max, 0)), "log_moments_numeric");
  auto base = [&](double t) {
    const double f = density(std::exp(t));
    if (f == 0.0) return 0.0;
    return safe(std::exp(t) * f);
  };
  std::vector<double> moments;
  for (int n = 1; n <= n_max; ++n) {
    auto g = [&](double t) { return std::pow(t, n) * base(t); };
    const auto window = fit_window(g, cfg);
    moments.push_back(integrate_window(g, window, cfg, "log_moments_numeric"));
  }
  return LogStats::from_moments(std::move(moments));
}

// Both maps are evaluated in extended precision: the fourth-order terms
// cancel heavily when |m~_1| is large.
std::vector<double> moments_to_cumulants(std::span<const double> m) {
  check_order(m.size(), "moments_to_cumulants");
  std::vector<double> k(m.size());
  const long double m1 = m[0];
  k[0] = m[0];
  if (m.size() > 1) k[1] = static_cast<double>(m[1] - m1 * m1);
  if (m.size() > 2) k[2] = static_cast<double>(m[2] - 3.0L * m1 * m[1] + 2.0L * m1 * m1 * m1);
  if (m.size() > 3) {
    const long double m2 = m[1];
    k[3] = static_cast<double>(m[3] - 4.0L * m1 * m[2] - 3.0L * m2 * m2 + 12.0L * m1 * m1 * m2 -
                               6.0L * m1 * m1 * m1 * m1);
  }
  return k;
}

std::vector<double> cumulants_to_moments(std::span<const double> k) {
  check_order(k.size(), "cumulants_to_moments");
  std::vector<double> m(k.size());
  const long double k1 = k[0];
  m[0] = k[0];
  if (k.size() > 1) m[1] = static_cast<double>(k[1] + k1 * k1);
  if (k.size() > 2) m[2] = static_cast<double>(k[2] + 3.0L * k1 * k[1] + k1 * k1 * k1);
  if (k.size() > 3) {
    const long double k2 = k[1];
    m[3] = static_cast<double>(k[3] + 4.0L * k1 * k[2] + 3.0L * k2 * k2 + 6.0L * k1 * k1 * k2 +
                               k1 * k1 * k1 * k1);
  }
  return m;
}

double fourth_central_log_moment(std::span<const double> m) {
  if (m.size() != 4) throw UnsupportedOrder("fourth_central_log_moment: needs exactly 4 log-moments");
  const double m1 = m[0];
  return m[3] - 4.0 * m1 * m[2] + 6.0 * m1 * m1 * m[1] - 3.0 * m1 * m1 * m1 * m1;
}

double verify_convolution(const DistributionSpec& compound, std::span<const double> s_grid,
                          const QuadratureConfig& cfg) {
  const auto parts = components(compound);
  if (!parts)
    throw std::invalid_argument("verify_convolution: " + family_key(compound.family()) +
                                " is a simple law with no product factorisation");
  const Density f = [&](double x) { return pdf(compound, x); };
  double worst = 0.0;
  for (double s : s_grid) {
    const double product = chf2_analytic(parts->speckle, s) * chf2_analytic(parts->texture, s);
    const double numeric = mellin_numeric(f, s, cfg);
    worst = std::max(worst, std::abs(numeric - product) / std::abs(product));
  }
  return worst;
}

}  // namespace mellinstat
