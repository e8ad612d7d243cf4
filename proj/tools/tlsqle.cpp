// Command-line front end: figure-reproduction sweeps, spectra, time-domain
// runs, spin/boson convergence reports, and the library self-test.
//
//   tlsqle <subcommand> --config <path> [--out <path>] [--format csv|json]
//                       [--seed N] [--jobs N]
//
// TLSQLE_JOBS, when set to a positive integer, overrides --jobs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tlsqle/parallel.hpp"
#include "tlsqle/tlsqle.hpp"

namespace {

using namespace tlsqle;

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string sibling_path(const std::string& out, const std::string& suffix) {
  const std::filesystem::path p(out);
  std::filesystem::path q = p.parent_path() / p.stem();
  return q.string() + suffix + p.extension().string();
}

void write_table(const Table& t, const std::string& path, OutputFormat fmt) {
  if (path.empty()) throw UsageError("no output path given (config output_path or --out)");
  atomic_write(path, render(t, fmt));
}

long long bool_cell(bool b) { return b ? 1 : 0; }

// Steady-state rows for one drive amplitude, both branches plus the linear
// reference, one row per root.
void steady_rows(Table& t, const ModelParams& base, double a_mag, Complex phase) {
  const Complex a_in = a_mag * phase;
  ModelParams lin = base;
  lin.alpha_in = a_in;
  lin.kappa_n = 0.0;
  const Complex alpha_lin = solve_steady_state(lin)[0].alpha;
  for (HpBranch b : {HpBranch::Minus, HpBranch::Plus}) {
    ModelParams p = base;
    p.alpha_in = a_in;
    p.branch = b;
    const auto sols = solve_steady_state(p);
    for (size_t r = 0; r < sols.size(); ++r) {
      const auto& s = sols[r];
      t.add_row({a_mag, std::string(branch_name(b)), static_cast<long long>(r),
                 s.alpha.real(), s.alpha.imag(), std::abs(s.alpha), std::arg(s.alpha),
                 s.occupancy_x, bool_cell(s.stable), s.residual,
                 effective_linewidth(p, s.alpha), std::abs(alpha_lin), std::arg(alpha_lin)});
    }
  }
}

const std::vector<std::string> kSteadyHeaders = {
    "alpha_in", "branch", "root_index", "re_alpha", "im_alpha", "abs_alpha", "arg_alpha",
    "x", "stable", "residual", "kappa_eff", "abs_alpha_linear", "arg_alpha_linear"};

int run_steady(const RunSpec& spec, OutputFormat fmt, const std::string& out) {
  Table t;
  t.headers = kSteadyHeaders;
  const Complex a = spec.params.alpha_in;
  const Complex phase = std::abs(a) > 0.0 ? a / std::abs(a) : Complex(1.0, 0.0);
  steady_rows(t, spec.params, std::abs(a), phase);
  write_table(t, out, fmt);
  return 0;
}

int run_sweep(const RunSpec& spec, OutputFormat fmt, const std::string& out, int jobs) {
  if (!spec.sweep_axis) throw UsageError("sweep requires a sweep_axis");
  const auto& ax = *spec.sweep_axis;
  const auto values = linspace(ax.start, ax.stop, ax.count);

  if (ax.name == "alpha_in") {
    const Complex a0 = spec.params.alpha_in;
    const Complex phase = std::abs(a0) > 0.0 ? a0 / std::abs(a0) : Complex(1.0, 0.0);
    std::vector<Table> partial(values.size());
    parallel_for(values.size(), jobs, [&](size_t i) {
      partial[i].headers = kSteadyHeaders;
      steady_rows(partial[i], spec.params, values[i], phase);
    });
    Table t;
    t.headers = kSteadyHeaders;
    for (auto& pt : partial)
      for (auto& row : pt.rows) t.rows.push_back(std::move(row));
    write_table(t, out, fmt);
    return 0;
  }

  // omega / theta trace of the spectrum at the default stable operating point
  const auto sols = solve_steady_state(spec.params);
  const SteadyStateSolution* pick = nullptr;
  for (const auto& s : sols)
    if (s.stable) { pick = &s; break; }
  if (!pick) throw UnstableSteadyState("no stable steady state for the spectrum trace");
  const Complex alpha = pick->alpha;

  Table t;
  t.headers = {"omega", "theta", "s"};
  if (ax.name == "omega") {
    const double theta = spec.theta_grid ? spec.theta_grid->start : 0.0;
    std::vector<double> vals(values.size());
    parallel_for(values.size(), jobs, [&](size_t i) {
      vals[i] = quadrature_spectrum(spec.params, alpha, values[i], theta);
    });
    for (size_t i = 0; i < values.size(); ++i) t.add_row({values[i], theta, vals[i]});
    std::vector<SpectrumSample> trace(values.size());
    for (size_t i = 0; i < values.size(); ++i)
      trace[i] = {values[i], theta, vals[i], true};
    try {
      std::cout << "fwhm=" << detail::format_double(fitted_linewidth(trace)) << "\n";
    } catch (const Error& e) {
      std::cout << "fwhm=nan (" << e.what() << ")\n";
    }
  } else {
    const double omega = spec.omega_grid ? spec.omega_grid->start : -spec.params.delta;
    for (double th : values)
      t.add_row({omega, th, quadrature_spectrum(spec.params, alpha, omega, th)});
  }
  write_table(t, out, fmt);
  return 0;
}

int run_spectrum(const RunSpec& spec, OutputFormat fmt, const std::string& out, int jobs) {
  const auto sols = solve_steady_state(spec.params);
  const SteadyStateSolution* pick = nullptr;
  for (const auto& s : sols)
    if (s.stable) { pick = &s; break; }
  if (!pick) throw UnstableSteadyState("no stable steady state at these parameters");
  const Complex alpha = pick->alpha;

  const GridSpec wg = spec.omega_grid.value_or(
      GridSpec{-spec.params.delta - 5.0, -spec.params.delta + 5.0, 401});
  const GridSpec tg = spec.theta_grid.value_or(GridSpec{0.0, kPi, 64});
  const auto omegas = linspace(wg.start, wg.stop, wg.count);
  const auto thetas = linspace(tg.start, tg.stop, tg.count);

  std::vector<std::vector<SpectrumSample>> rows(omegas.size());
  std::vector<SpectrumExtrema> extrema(omegas.size());
  std::vector<char> extrema_ok(omegas.size(), 1);
  parallel_for(omegas.size(), jobs, [&](size_t i) {
    rows[i] = spectrum_grid(spec.params, alpha, {omegas[i]}, thetas);
    try {
      extrema[i] = spectrum_extrema(spec.params, alpha, omegas[i]);
    } catch (const SingularResponse&) {
      extrema_ok[i] = 0;
    }
  });

  Table t;
  t.headers = {"omega", "theta", "s", "valid"};
  for (const auto& row : rows)
    for (const auto& s : row) t.add_row({s.omega, s.theta, s.value, bool_cell(s.valid)});
  write_table(t, out, fmt);

  Table ex;
  ex.headers = {"omega", "theta_min", "theta_max", "s_min", "s_max", "phi", "phi_tls", "flat"};
  for (size_t i = 0; i < omegas.size(); ++i) {
    if (!extrema_ok[i]) continue;
    const auto& e = extrema[i];
    ex.add_row({omegas[i], e.theta_min, e.theta_max, e.s_min, e.s_max, e.phi, e.phi_tls,
                bool_cell(e.flat)});
  }
  write_table(ex, sibling_path(out, "_extrema"), fmt);
  return 0;
}

int run_timedomain(const RunSpec& spec, OutputFormat fmt, const std::string& out,
                   std::optional<uint64_t> seed_override) {
  if (!spec.integration) throw UsageError("timedomain requires an integration block");
  IntegrationConfig cfg = *spec.integration;
  if (seed_override) cfg.seed = *seed_override;

  const auto sols = solve_steady_state(spec.params);
  const SteadyStateSolution* pick = nullptr;
  for (const auto& s : sols)
    if (s.stable) { pick = &s; break; }
  if (!pick) throw UnstableSteadyState("no stable steady state at these parameters");
  const Complex alpha = pick->alpha;
  const double keff = effective_linewidth(spec.params, alpha);

  auto ens = integrate_linearized(spec.params, alpha, cfg);
  if (!spec.dump_trajectories.empty()) write_trajectories_binary(ens, spec.dump_trajectories);
  ens = discard_transient(ens, 10.0 / keff);

  const GridSpec tg = spec.theta_grid.value_or(GridSpec{0.0, 0.0, 1});
  const auto thetas = linspace(tg.start, tg.stop, tg.count);
  const size_t nsamp = ens.times.size();
  size_t seg = 1;
  while (seg * 2 <= nsamp && seg < (1u << 15)) seg *= 2;

  Table welch_t, analytic_t;
  welch_t.headers = {"omega", "theta", "s_welch"};
  analytic_t.headers = {"omega", "theta", "s_analytic"};
  for (double th : thetas) {
    const auto psd = welch_psd(ens, th, static_cast<int>(seg), 0.5);
    for (const auto& s : psd) {
      welch_t.add_row({s.omega, s.theta, s.value});
      analytic_t.add_row(
          {s.omega, s.theta, quadrature_spectrum(spec.params, alpha, s.omega, th)});
    }
  }
  write_table(welch_t, out, fmt);
  write_table(analytic_t, sibling_path(out, "_analytic"), fmt);
  return 0;
}

int run_hpcheck(const RunSpec& spec, OutputFormat fmt, const std::string& out, int jobs) {
  std::vector<HpBranch> branches;
  if (spec.hp.branch == "minus" || spec.hp.branch == "both") branches.push_back(HpBranch::Minus);
  if (spec.hp.branch == "plus" || spec.hp.branch == "both") branches.push_back(HpBranch::Plus);

  struct Row { double j; HpBranch b; int n_max; double err; };
  std::vector<Row> work;
  for (double j : spec.hp.j_values)
    for (HpBranch b : branches)
      for (int n : spec.hp.n_max_values) work.push_back({j, b, n, 0.0});
  parallel_for(work.size(), jobs,
               [&](size_t i) { work[i].err = hp_map_error(work[i].j, work[i].b, work[i].n_max); });

  Table t;
  t.headers = {"j", "branch", "n_max", "error"};
  for (const auto& r : work)
    t.add_row({r.j, std::string(branch_name(r.b)), static_cast<long long>(r.n_max), r.err});
  write_table(t, out, fmt);
  return 0;
}

int run_validate(OutputFormat fmt, const std::string& out,
                 std::optional<uint64_t> seed_override) {
  const uint64_t seed = seed_override.value_or(20200527ull);
  const auto results = run_selftest(seed);
  int passed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    if (r.pass) ++passed;
  }
  std::cout << passed << "/" << results.size() << " checks passed\n";
  if (!out.empty()) {
    Table t;
    t.headers = {"check", "pass", "detail"};
    for (const auto& r : results) t.add_row({r.name, bool_cell(r.pass), r.detail});
    write_table(t, out, fmt);
  }
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}

int resolve_jobs(int cli_jobs) {
  if (const char* env = std::getenv("TLSQLE_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<int>(v);
    std::cerr << "warning: ignoring invalid TLSQLE_JOBS value \"" << env << "\"\n";
  }
  return cli_jobs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driven-cavity / TLS-bath fluctuation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_override, format_override;
  std::optional<uint64_t> seed_override;
  int jobs = 1;

  const std::vector<std::string> names = {"steady", "spectrum", "sweep",
                                          "timedomain", "hpcheck", "validate"};
  for (const auto& n : names) {
    auto* sub = app.add_subcommand(n);
    sub->add_option("--config", config_path, "JSON run specification")->required();
    sub->add_option("--out", out_override, "output path (overrides config)");
    sub->add_option("--format", format_override, "csv or json (overrides config)");
    sub->add_option("--seed", seed_override, "RNG seed override");
    sub->add_option("--jobs", jobs, "worker threads (TLSQLE_JOBS overrides)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const std::string sub = app.get_subcommands().front()->get_name();
    RunSpec spec = parse_config(read_file(config_path));
    if (detail::command_name(spec.command) != sub)
      throw UsageError("config command \"" + std::string(detail::command_name(spec.command)) +
                       "\" does not match subcommand \"" + sub + "\"");
    const std::string out = out_override.empty() ? spec.output_path : out_override;
    OutputFormat fmt = spec.output_format;
    if (!format_override.empty()) {
      if (format_override == "csv") fmt = OutputFormat::Csv;
      else if (format_override == "json") fmt = OutputFormat::Json;
      else throw UsageError("--format must be csv or json");
    }
    const int njobs = resolve_jobs(jobs);

    switch (spec.command) {
      case Command::Steady: return run_steady(spec, fmt, out);
      case Command::Sweep: return run_sweep(spec, fmt, out, njobs);
      case Command::Spectrum: return run_spectrum(spec, fmt, out, njobs);
      case Command::TimeDomain: return run_timedomain(spec, fmt, out, seed_override);
      case Command::HpCheck: return run_hpcheck(spec, fmt, out, njobs);
      case Command::Validate: return run_validate(fmt, out, seed_override);
    }
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const NonPositiveKappa& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NegativeRate& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NonFinite& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
