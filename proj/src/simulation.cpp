#include "mellinstat/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mellinstat/distributions.hpp"
#include "mellinstat/estimation.hpp"
#include "mellinstat/sampling.hpp"
#include "mellinstat/specfun.hpp"

namespace mellinstat {
namespace {

double parse_real(std::string_view s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw std::invalid_argument(std::string("grid: bad ") + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 3 || parts.size() > 4)
    throw std::invalid_argument("grid: expected start:stop:count[:log|:lin], got '" + std::string(text) + "'");
  const double lo = parse_real(parts[0], "start");
  const double hi = parse_real(parts[1], "stop");
  const double count_real = parse_real(parts[2], "count");
  if (!(count_real >= 1.0) || count_real != std::floor(count_real) || count_real > 1e6)
    throw std::invalid_argument("grid: count must be a positive integer");
  const auto count = static_cast<std::size_t>(count_real);
  bool log_spaced = false;
  if (parts.size() == 4) {
    if (parts[3] == "log") log_spaced = true;
    else if (parts[3] != "lin") throw std::invalid_argument("grid: spacing must be 'log' or 'lin'");
  }
  if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("grid: M values must be > 0");
  if (hi < lo) throw std::invalid_argument("grid: stop must be >= start");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    grid[i] = log_spaced ? std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))) : lo + f * (hi - lo);
  }
  if (count > 1) grid.back() = hi;
  return grid;
}

std::vector<double> default_M_grid() { return parse_grid("0.25:20:40:log"); }

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  if (config.samples < kMinSweepSamples)
    throw std::invalid_argument("simulate: --samples must be >= " + std::to_string(kMinSweepSamples));
  const DistributionSpec speckle = GammaPower{config.L, 1.0};
  std::vector<double> grid = config.M_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double M = grid[i];
    const DistributionSpec texture = GammaPower{M, config.mu};
    const auto batch = sample_compound(speckle, texture, config.samples, config.seed + i);
    const auto data = empirical_log_stats(batch, 4);
    const auto tex = texture_log_cumulants(data.stats, speckle);
    for (int n : {2, 4}) {
      rows.push_back({M, n, data.stats.log_moments[n - 1], tex.log_cumulants[n - 1], polygamma(n - 1, M),
                      data.cumulant_stderr_asymptotic[n - 1]});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "M,order,logmoment_data,logcumulant_texture_est,logcumulant_texture_analytic,stderr\n";
  for (const auto& r : rows) {
    out << format_real(r.M) << ',' << r.order << ',' << format_real(r.logmoment_data) << ','
        << format_real(r.logcumulant_texture_est) << ',' << format_real(r.logcumulant_texture_analytic) << ','
        << format_real(r.standard_error) << '\n';
  }
}

void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, bool log_x) {
  constexpr double kPanelW = 420, kPanelH = 320, kMargin = 55, kGap = 40;
  const double width = 2 * (kPanelW + kMargin) + kGap, height = kPanelH + 2 * kMargin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  struct Series {
    const char* label;
    const char* color;
    double SweepRow::*field;
  };
  const Series series[] = {{"log-moment of data", "#1f77b4", &SweepRow::logmoment_data},
                           {"texture log-cumulant (estimated)", "#d62728", &SweepRow::logcumulant_texture_est},
                           {"texture log-cumulant (analytic)", "#2ca02c", &SweepRow::logcumulant_texture_analytic}};

  for (int panel = 0; panel < 2; ++panel) {
    const int order = panel == 0 ? 2 : 4;
    std::vector<const SweepRow*> pts;
    for (const auto& r : rows)
      if (r.order == order) pts.push_back(&r);
    const double x0 = kMargin + panel * (kPanelW + kMargin + kGap), y0 = kMargin;
    out << "<g>\n<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << kPanelW << "\" height=\"" << kPanelH
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x0 + kPanelW / 2 << "\" y=\"" << y0 - 12 << "\" text-anchor=\"middle\">order "
        << order << "</text>\n";
    out << "<text x=\"" << x0 + kPanelW / 2 << "\" y=\"" << y0 + kPanelH + 38
        << "\" text-anchor=\"middle\">texture shape M</text>\n";
    if (pts.empty()) {
      out << "</g>\n";
      continue;
    }
    auto tx = [&](double m) { return log_x ? std::log10(m) : m; };
    double xmin = tx(pts.front()->M), xmax = tx(pts.back()->M);
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto* p : pts)
      for (const auto& s : series) {
        ymin = std::min(ymin, p->*s.field);
        ymax = std::max(ymax, p->*s.field);
      }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double m) { return x0 + (tx(m) - xmin) / (xmax - xmin) * kPanelW; };
    auto py = [&](double v) { return y0 + kPanelH - (v - ymin) / (ymax - ymin) * kPanelH; };
    for (int t = 0; t <= 4; ++t) {
      const double xv = xmin + t * (xmax - xmin) / 4, yv = ymin + t * (ymax - ymin) / 4;
      const double label_x = log_x ? std::pow(10.0, xv) : xv;
      const double sx = x0 + t * kPanelW / 4, sy = py(yv);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", label_x);
      out << "<text x=\"" << sx << "\" y=\"" << y0 + kPanelH + 18 << "\" text-anchor=\"middle\">" << buf
          << "</text>\n";
      std::snprintf(buf, sizeof buf, "%.3g", yv);
      out << "<text x=\"" << x0 - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << buf << "</text>\n";
    }
    if (ymin < 0 && ymax > 0)
      out << "<line x1=\"" << x0 << "\" y1=\"" << py(0) << "\" x2=\"" << x0 + kPanelW << "\" y2=\"" << py(0)
          << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& s : series) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto* p : pts) out << px(p->M) << ',' << py(p->*s.field) << ' ';
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < std::size(series); ++i) {
      const double ly = y0 + 16 + 16 * i;
      out << "<line x1=\"" << x0 + kPanelW - 210 << "\" y1=\"" << ly - 4 << "\" x2=\"" << x0 + kPanelW - 190
          << "\" y2=\"" << ly - 4 << "\" stroke=\"" << series[i].color << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << x0 + kPanelW - 185 << "\" y=\"" << ly << "\">" << series[i].label << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace mellinstat
