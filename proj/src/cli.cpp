#include "mellinstat/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "mellinstat/distributions.hpp"
#include "mellinstat/errors.hpp"
#include "mellinstat/estimation.hpp"
#include "mellinstat/family_io.hpp"
#include "mellinstat/sampling.hpp"
#include "mellinstat/simulation.hpp"
#include "mellinstat/verification.hpp"

namespace mellinstat::cli {
namespace {

// Raised for bad flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

DistributionSpec spec_from_flags(const std::string& family, const std::string& params) {
  try {
    return make_spec(parse_family(family), parse_params(params));
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

// Pads to `width` display columns (UTF-8 continuation bytes take none).
std::string pad(std::string s, std::size_t width) {
  const std::size_t columns =
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; });
  if (columns < width) s.append(width - columns, ' ');
  return s;
}

// Output goes to `path`, or to `out` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw IoError("cannot open '" + path + "' for writing");
    stream_ = file_.get();
    path_ = path;
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    stream_->flush();
    if (file_) {
      file_->close();
      if (!*file_) throw IoError("write to '" + path_ + "' failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
  std::string path_;
};

int cmd_table(const std::string& family, const std::string& params, int orders, std::ostream& out) {
  if (orders < 1 || orders > 6) throw UsageError("--orders must be in [1, 6]");
  const auto spec = spec_from_flags(family, params);
  const int log_orders = std::min(orders, 4);
  const auto k = log_cumulants_analytic(spec, log_orders);
  const auto m = cumulants_to_moments(k);
  const Strip strip = analyticity_strip(spec);
  out << "family: " << describe(spec) << '\n';
  out << "strip:  (" << sig12(strip.lower) << ", " << sig12(strip.upper) << ")\n";
  out << pad("n", 4) << pad("m_n", 24) << pad("log-moment", 22) << "log-cumulant\n";
  for (int n = 1; n <= orders; ++n) {
    std::string moment;
    try {
      moment = sig12(classical_moment(spec, n));
    } catch (const MomentDoesNotExist&) {
      moment = "undefined (n ≥ M)";
    }
    out << pad(std::to_string(n), 4) << pad(moment, 24);
    if (n <= log_orders) out << pad(sig12(m[n - 1]), 22) << sig12(k[n - 1]) << '\n';
    else out << pad("-", 22) << "-\n";
  }
  return kExitOk;
}

int cmd_verify(std::optional<double> tolerance, const std::vector<std::string>& families, std::uint64_t seed,
               std::ostream& out) {
  VerifyOptions options;
  options.tolerance = tolerance;
  options.seed = seed;
  if (tolerance && !(*tolerance > 0.0)) throw UsageError("--tolerance must be > 0");
  for (const auto& f : families) {
    try {
      options.families.push_back(parse_family(f));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  const auto report = run_verification(options, [&](const CheckResult& c) {
    char err[32], gate[32];
    std::snprintf(err, sizeof err, "%.3g", c.max_error);
    std::snprintf(gate, sizeof gate, "%.3g", c.gate);
    out << (c.passed ? "PASS  " : "FAIL  ") << pad(c.group, 18) << pad(c.target, 10) << "max_err=" << pad(err, 11)
        << "gate=" << pad(gate, 9);
    if (!c.detail.empty()) out << c.detail;
    out << '\n' << std::flush;
  });
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.passed;
  out << "verify: " << passed << "/" << report.checks.size() << " checks passed\n";
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

int cmd_sample(const std::string& family, const std::string& params, std::size_t n, std::uint64_t seed,
               const std::string& path, std::ostream& out) {
  if (n == 0) throw UsageError("--samples must be >= 1");
  const auto spec = spec_from_flags(family, params);
  const auto batch = sample(spec, n, seed);
  Sink sink(path, out);
  auto& s = sink.stream();
  const bool compound = batch.texture.has_value();
  s << (compound ? "index,x,z\n" : "index,x\n");
  for (std::size_t i = 0; i < n; ++i) {
    s << i << ',' << format_real(batch.values[i]);
    if (compound) s << ',' << format_real((*batch.texture)[i]);
    s << '\n';
  }
  sink.close();
  return kExitOk;
}

void print_fit(const FitResult& fit, std::ostream& out) {
  out << "estimate: " << describe(fit.spec) << '\n';
  for (const auto& [name, value] : spec_params(fit.spec)) out << "  " << pad(name, 8) << sig12(value) << '\n';
  out << "iterations: " << fit.iterations << '\n';
  out << "residual:   " << sig12(fit.residual) << '\n';
  out << "converged:  " << (fit.converged ? "yes" : "no") << '\n';
}

void print_stats(const char* title, const LogStats& stats, const std::vector<double>& se, std::ostream& out) {
  out << title << '\n';
  for (int n = 1; n <= stats.order; ++n)
    out << "  k" << n << " = " << pad(sig12(stats.log_cumulants[n - 1]), 22) << "(SE " << sig12(se[n - 1]) << ")\n";
}

int cmd_estimate(const std::string& family, const std::string& input, const std::string& speckle_params,
                 const std::string& speckle_family, std::optional<double> known_c, std::ostream& out,
                 std::ostream& err) {
  Family target;
  try {
    target = parse_family(family);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  FitOptions options;
  options.known_c = known_c;
  if (known_c && target != Family::WeibullNakagami) throw UsageError("--c applies only to --family wnak");
  std::optional<DistributionSpec> speckle;
  if (!speckle_params.empty()) speckle = spec_from_flags(speckle_family, speckle_params);

  std::vector<double> values;
  try {
    values = read_values_csv(input);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  try {
    const auto data = empirical_log_stats(values, 4);
    out << "samples: " << data.count << '\n';
    print_stats("data log-cumulants:", data.stats, data.cumulant_stderr, out);
    LogStats stats = data.stats;
    if (speckle) {
      stats = texture_log_cumulants(data.stats, *speckle);
      out << "speckle: " << describe(*speckle) << '\n';
      print_stats("texture log-cumulants:", stats, data.cumulant_stderr, out);
    }
    print_fit(fit_molc(target, stats, options), out);
    return kExitOk;
  } catch (const FitNonConvergence& e) {
    err << "estimate: " << e.what() << '\n';
    print_fit(e.last_iterate(), err);
    return kExitEstimation;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    err << "estimate: " << e.what() << '\n';
    return kExitEstimation;
  }
}

int cmd_simulate(double L, double mu, const std::string& grid, std::size_t samples, std::uint64_t seed,
                 const std::string& path, const std::string& plot, std::ostream& out) {
  SweepConfig cfg;
  cfg.L = L;
  cfg.mu = mu;
  cfg.samples = samples;
  cfg.seed = seed;
  if (!(L > 0.0) || !std::isfinite(L)) throw UsageError("--L must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw UsageError("--mu must be > 0");
  if (samples < kMinSweepSamples) throw UsageError("--samples must be >= " + std::to_string(kMinSweepSamples));
  try {
    cfg.M_grid = parse_grid(grid);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const bool log_x = grid.size() >= 4 && grid.substr(grid.size() - 4) == ":log";
  // Open outputs before the (long) sweep so path errors surface immediately.
  Sink sink(path, out);
  std::unique_ptr<std::ofstream> svg;
  if (!plot.empty()) {
    svg = std::make_unique<std::ofstream>(plot, std::ios::binary | std::ios::trunc);
    if (!*svg) throw IoError("cannot open '" + plot + "' for writing");
  }
  const auto rows = run_sweep(cfg);
  write_sweep_csv(sink.stream(), rows);
  sink.close();
  if (svg) {
    write_sweep_svg(*svg, rows, log_x);
    svg->close();
    if (!*svg) throw IoError("write to '" + plot + "' failed");
  }
  return kExitOk;
}

}  // namespace

std::vector<double> read_values_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };
  auto parse = [](const std::string& cell, double& v) {
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    return ec == std::errc() && ptr == cell.data() + cell.size();
  };
  std::string line;
  std::size_t line_no = 0, column = 0;
  std::vector<double> values;
  bool header_checked = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (!header_checked) {
      header_checked = true;
      double probe;
      if (!parse(cells.front(), probe)) {
        const auto it = std::find(cells.begin(), cells.end(), "x");
        if (it != cells.end()) column = static_cast<std::size_t>(it - cells.begin());
        else if (cells.size() == 1) column = 0;
        else throw std::runtime_error(path + ": header has no 'x' column");
        continue;
      }
    }
    double v;
    if (column >= cells.size() || !parse(cells[column], v))
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": not a number");
    values.push_back(v);
  }
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-kind (Mellin) statistics for clutter distributions", "mellinstat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mellinstat 0.1.0");
  const std::string family_help = "gamma|nakagami|maxwell|weibull|rayleigh|ggamma|k|wnak|fisher|invgamma";

  std::string family, params, out_path, input, speckle_params, speckle_family = "gamma", grid = "0.25:20:40:log",
                                                                  plot;
  int orders = 4;
  std::size_t n = 0, sweep_samples = 100000;
  std::uint64_t seed = 1;
  std::optional<double> tolerance, known_c;
  std::vector<std::string> families;
  double L = 4.0, mu = 1.0;

  auto* table = app.add_subcommand("table", "Analytic moments, log-moments and log-cumulants");
  table->add_option("--family", family, family_help)->required();
  table->add_option("--params", params, "k=v,... parameter list")->required();
  table->add_option("--orders", orders, "highest order (moments <= 6, log statistics <= 4)")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the oracle verification suite");
  verify->add_option("--tolerance", tolerance, "replace every numeric gate");
  verify->add_option("--families", families, "comma-separated family keys")->delimiter(',');
  verify->add_option("--seed", seed, "Monte-Carlo seed base")->capture_default_str();

  auto* samp = app.add_subcommand("sample", "Draw samples to CSV");
  samp->add_option("--family", family, family_help)->required();
  samp->add_option("--params", params, "k=v,... parameter list")->required();
  samp->add_option("-n,--samples", n, "number of draws")->required();
  samp->add_option("--seed", seed, "64-bit seed")->capture_default_str();
  samp->add_option("--out", out_path, "output CSV (default stdout)");

  auto* est = app.add_subcommand("estimate", "Method-of-log-cumulants fit from a CSV of values");
  est->add_option("--family", family, family_help)->required();
  est->add_option("--input", input, "CSV with an 'x' column or a single column")->required();
  est->add_option("--speckle", speckle_params, "speckle parameters; fit the texture after subtraction");
  est->add_option("--speckle-family", speckle_family, "speckle law for --speckle")->capture_default_str();
  est->add_option("--c", known_c, "known Weibull-Nakagami speckle shape");

  auto* sim = app.add_subcommand("simulate", "Texture sweep of the gamma-gamma product model");
  sim->add_option("--L", L, "speckle looks")->capture_default_str();
  sim->add_option("--mu", mu, "texture mean")->capture_default_str();
  sim->add_option("--M-grid", grid, "start:stop:count[:log|:lin]")->capture_default_str();
  sim->add_option("--samples", sweep_samples, "draws per grid point (>= 10000)")->capture_default_str();
  sim->add_option("--seed", seed, "base seed; point i uses seed + i")->capture_default_str();
  sim->add_option("--out", out_path, "output CSV (default stdout)");
  sim->add_option("--plot", plot, "optional SVG plot path");

  std::vector<const char*> argv = {"mellinstat"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*table) return cmd_table(family, params, orders, out);
    if (*verify) return cmd_verify(tolerance, families, seed, out);
    if (*samp) return cmd_sample(family, params, n, seed, out_path, out);
    if (*est) return cmd_estimate(family, input, speckle_params, speckle_family, known_c, out, err);
    if (*sim) return cmd_simulate(L, mu, grid, sweep_samples, seed, out_path, plot, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mellinstat::cli
