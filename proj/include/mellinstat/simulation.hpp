#pragma once

// Texture sweep for the gamma-gamma product model: for each texture shape M,
// draw x = u z with u ~ GammaPower{L, 1} and z ~ GammaPower{M, mu}, then
// compare the data log-moments and the texture log-cumulants recovered by
// subtracting the speckle's analytic cumulants with psi^(n-1)(M).

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace mellinstat {

struct SweepRow {
  double M = 0.0;
  int order = 0;  // 2 or 4
  double logmoment_data = 0.0;
  double logcumulant_texture_est = 0.0;
  double logcumulant_texture_analytic = 0.0;
  double standard_error = 0.0;  // delta-method SE of the texture estimate (CSV column "stderr")
};

struct SweepConfig {
  double L = 4.0;
  double mu = 1.0;
  std::vector<double> M_grid;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

inline constexpr std::size_t kMinSweepSamples = 10000;

/// "start:stop:count[:log|:lin]" (linear by default). Throws std::invalid_argument.
std::vector<double> parse_grid(std::string_view text);

/// Default grid: 40 log-spaced points over [0.25, 20].
std::vector<double> default_M_grid();

/// Rows ordered by M, order 2 before order 4. Point i uses seed + i.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Header M,order,logmoment_data,logcumulant_texture_est,logcumulant_texture_analytic,stderr;
/// reals with 17 significant digits, LF line ends.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Two-panel SVG line plot (order 2 left, order 4 right) against M.
void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, bool log_x);

/// %.17g formatting shared by the CSV writers.
std::string format_real(double v);

}  // namespace mellinstat
