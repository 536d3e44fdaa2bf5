#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "phj/config.hpp"
#include "phj/csv.hpp"
#include "phj/doubling.hpp"
#include "phj/errors.hpp"
#include "phj/harness.hpp"
#include "phj/isaacs_check.hpp"
#include "phj/rng.hpp"
#include "phj/scheme.hpp"
#include "phj/shooting.hpp"
#include "phj/signal.hpp"

namespace {

using namespace phj;

struct SummaryLine {
  std::string name;
  double measured = 0, bound = 0, margin = 0;
  bool pass = false;
};

struct Cli {
  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  Config cfg;
};

// One line per check, failures first so they cannot scroll away.
int emit_summary(std::vector<SummaryLine> lines) {
  std::stable_partition(lines.begin(), lines.end(),
                        [](const SummaryLine& l) { return !l.pass; });
  bool any_fail = false;
  for (const auto& l : lines) {
    std::cout << (l.pass ? "PASS " : "FAIL ") << l.name << "  measured=" << csv_num(l.measured)
              << "  bound=" << csv_num(l.bound) << "  margin=" << csv_num(l.margin) << "\n";
    any_fail = any_fail || !l.pass;
  }
  return any_fail ? 1 : 0;
}

std::uint64_t run_seed(const Cli& cli, long fallback) {
  if (cli.seed) return *cli.seed;
  return static_cast<std::uint64_t>(cli.cfg.get_int("run", "seed", fallback));
}

MetricField metric_with_box(const Cli& cli, const Grid& g) {
  MetricField m = build_metric(cli.cfg);
  Vec hi = g.origin();
  for (int d = 0; d < g.dim(); ++d) hi[d] += g.box_length();
  m.set_domain_box(g.origin(), hi);
  return m;
}

std::string out_path(const Cli& cli, const std::string& name) {
  return (std::filesystem::path(cli.out_dir) / name).string();
}

double configured_upsilon(const Cli& cli, const MetricField& m) {
  if (cli.cfg.has("run", "upsilon")) return cli.cfg.get_num("run", "upsilon");
  GeometryReport rep =
      probe_injectivity(m, 40, {0.25, 0.5, 1.0, 2.0}, run_seed(cli, 1));
  if (cli.verbose)
    std::cout << "note: no upsilon configured; probe certified " << rep.upsilon_estimate
              << "\n";
  if (rep.upsilon_estimate <= 0)
    throw Error("injectivity probe certified no radius; set [run] upsilon explicitly");
  return rep.upsilon_estimate;
}

std::vector<double> gamma_grid_from(const Cli& cli) {
  if (cli.cfg.has("run", "gamma_grid")) return cli.cfg.get_list("run", "gamma_grid");
  std::vector<double> g;
  for (int k = -6; k <= 12; ++k) g.push_back(std::ldexp(1.0, k));
  return g;
}

// ---------------------------------------------------------------- verbs --

std::vector<SummaryLine> verb_geometry(const Cli& cli) {
  Grid grid = build_grid(cli.cfg);
  MetricField m = metric_with_box(cli, grid);
  int samples = static_cast<int>(cli.cfg.get_int("run", "samples", 64));
  std::vector<double> radii =
      cli.cfg.get_list("run", "radius_grid", {0.125, 0.25, 0.5, 1.0});
  GeometryReport rep = probe_injectivity(m, samples, radii, run_seed(cli, 1));

  CsvWriter radii_csv(out_path(cli, "geometry_radii.csv"),
                      {"radius", "attempted", "converged", "max_gradsum_ratio"});
  for (const RadiusStats& r : rep.radii)
    radii_csv.row({r.radius, static_cast<double>(r.attempted),
                   static_cast<double>(r.converged), r.max_gradsum_ratio});
  CsvWriter report_csv(
      out_path(cli, "geometry_report.csv"),
      {"family", "dim", "ellipticity_c", "c2_bound", "upsilon_estimate",
       "upsilon_formula", "gradsum_bound", "hessian_bound", "max_drift"});
  report_csv.raw_row({rep.family, csv_num(rep.dim), csv_num(rep.ellipticity_c),
                      csv_num(rep.c2_bound), csv_num(rep.upsilon_estimate),
                      csv_num(rep.upsilon_formula), csv_num(rep.gradsum_bound),
                      csv_num(rep.hessian_bound), csv_num(rep.max_drift)});

  if (cli.verbose)
    for (const RadiusStats& r : rep.radii)
      std::cout << "radius " << r.radius << ": " << r.converged << "/" << r.attempted
                << " converged, gradsum ratio " << r.max_gradsum_ratio << "\n";

  std::vector<SummaryLine> out;
  out.push_back({"shooting-convergence", rep.upsilon_estimate, radii.front(), 0.0,
                 rep.upsilon_estimate >= radii.front()});
  out.push_back({"hamiltonian-drift", rep.max_drift, 1e-6, 0.0, rep.max_drift <= 1e-6});
  out.push_back({"gradsum-constant", rep.gradsum_bound,
                 std::numeric_limits<double>::infinity(), 0.0,
                 std::isfinite(rep.gradsum_bound)});
  return out;
}

std::vector<SummaryLine> verb_phi(const Cli& cli) {
  Grid grid = build_grid(cli.cfg);
  MetricField m = metric_with_box(cli, grid);
  double T = cli.cfg.get_num("run", "T");
  PathSignal xi = build_signal(cli.cfg, "signal.a", T);
  PathSignal zeta = build_signal(cli.cfg, "signal.b", T);
  double lambda = cli.cfg.get_num("run", "lambda");
  double gamma = cli.cfg.get_num("run", "gamma", 0.0);
  int probes = static_cast<int>(cli.cfg.get_int("run", "probes", 100));
  double h_fd = cli.cfg.get_num("run", "h_fd", 1e-4);
  double radius = cli.cfg.get_num("run", "radius", 0.25);
  double res_tol = cli.cfg.get_num("run", "residual_tol", 1e-6);
  double sandwich_tol = cli.cfg.get_num("run", "sandwich_tol", 1e-12);

  DoubledTest test(m, xi, zeta, lambda, gamma);
  RandomStream rng(run_seed(cli, 7));
  const double c = m.ellipticity_c();

  CsvWriter probe_csv(out_path(cli, "phi_probes.csv"),
                      {"t", "phi", "residual", "normalized"});
  std::vector<PhiSample> samples;
  double worst_norm_resid = 0.0;
  int made = 0;
  long attempts = 0;
  while (made < probes) {
    if (++attempts > 200L * probes)
      throw Error("phi probe sampling kept failing; shrink [run] radius");
    Vec x(grid.dim());
    for (int d = 0; d < grid.dim(); ++d)
      x[d] = grid.origin()[d] + grid.box_length() * rng.uniform();
    Vec y = x + (2.0 * radius / c) * (0.3 + 0.7 * rng.uniform()) * rng.unit_vec(grid.dim());
    double t = rng.uniform(2.0 * h_fd, T - 2.0 * h_fd);
    bool near_break = false;
    for (const PathSignal* s : {&xi, &zeta})
      for (double bp : s->times())
        if (std::abs(bp - t) <= 2.0 * h_fd) near_break = true;
    if (near_break) continue;
    try {
      double phi = phi_eval(test, x, y, t);
      double r = phi_pde_residual(test, x, y, t, h_fd);
      double norm = std::abs(r) / (1.0 + phi);
      worst_norm_resid = std::max(worst_norm_resid, norm);
      probe_csv.row({t, phi, r, norm});
      samples.push_back({x, y, t});
      ++made;
    } catch (const Error&) {
      continue;
    }
  }

  std::vector<SummaryLine> out;
  out.push_back({"phi-residual", worst_norm_resid, res_tol, 0.0,
                 worst_norm_resid <= res_tol});
  if (gamma == 0.0) {
    SandwichReport sw = phi_sandwich_check(test, samples);
    out.push_back({"phi-sandwich", sw.worst_normalized, sandwich_tol, 0.0,
                   sw.worst_normalized <= sandwich_tol});
  }
  return out;
}

std::vector<SummaryLine> verb_solve(const Cli& cli) {
  Grid grid = build_grid(cli.cfg);
  MetricField m = metric_with_box(cli, grid);
  double T = cli.cfg.get_num("run", "T");
  PathSignal xi = build_signal(cli.cfg, "signal.a", T);
  DataGenerator u0g = build_data(cli.cfg, "data.u0", m);
  FSpec f = build_fspec(cli.cfg, grid.dim());
  SchemeOptions opt = build_scheme(cli.cfg);
  if (opt.snapshot_stride == 0) opt.snapshot_stride = 64;

  InitialData u0 = u0g(grid);
  SolveResult res = solve(u0.values, m, f, xi, T, opt);

  std::vector<std::string> header{"time", "x0"};
  if (grid.dim() == 2) header.push_back("x1");
  header.push_back("value");
  CsvWriter traj(out_path(cli, "trajectory.csv"), header);
  for (const GridFunction& snap : res.snapshots)
    for (int i = 0; i < grid.size(); ++i) {
      Vec x = grid.point(i);
      std::vector<double> row{snap.time_stamp, x[0]};
      if (grid.dim() == 2) row.push_back(x[1]);
      row.push_back(snap[i]);
      traj.row(row);
    }
  CsvWriter slices(out_path(cli, "slices.csv"),
                   {"t0", "t1", "xi_dot", "substeps_f", "substeps_h", "sup_norm",
                    "lipschitz"});
  for (const SliceInfo& s : res.slices)
    slices.row({s.t0, s.t1, s.xi_dot, static_cast<double>(s.substeps_f),
                static_cast<double>(s.substeps_h), s.sup_norm, s.lipschitz});

  double grow_tol = cli.cfg.get_num("run", "sup_growth_tol", 1e-9);
  std::vector<SummaryLine> out;
  if (f.kind() == FSpec::Kind::zero) {
    // With no right-hand side the scheme is nonexpansive in sup norm.
    out.push_back({"sup-norm-stable", res.state.sup_norm(), u0.values.sup_norm(),
                   grow_tol, res.state.sup_norm() <= u0.values.sup_norm() + grow_tol});
  } else {
    out.push_back({"solve-finished", res.state.sup_norm(),
                   std::numeric_limits<double>::infinity(), 0.0, true});
  }
  return out;
}

void write_stability(const Cli& cli, const StabilityReport& rep) {
  CsvWriter report(out_path(cli, "stability.csv"),
                   {"measured_sup_gap", "theorem_bound", "scheme_margin", "pass",
                    "delta_plus", "delta_minus", "upsilon", "theta_term", "gamma_star",
                    "theta_tilde_term", "omega_term", "dev_u", "dev_v", "slices"});
  report.row({rep.measured_sup_gap, rep.theorem_bound, rep.scheme_margin,
              rep.pass ? 1.0 : 0.0, rep.delta_plus, rep.delta_minus, rep.upsilon,
              rep.theta_term, rep.gamma_star, rep.theta_tilde_term, rep.omega_term,
              rep.dev_u, rep.dev_v, static_cast<double>(rep.slices)});
  CsvWriter trace(out_path(cli, "trace.csv"), {"time", "gap", "sup_u", "sup_v"});
  for (const auto& r : rep.trace) trace.row({r[0], r[1], r[2], r[3]});
  if (!rep.note.empty()) std::cout << "note: " << rep.note << "\n";
}

std::vector<SummaryLine> verb_compare(const Cli& cli, bool weighted) {
  Grid grid = build_grid(cli.cfg);
  MetricField m = metric_with_box(cli, grid);
  double T = cli.cfg.get_num("run", "T");
  PathSignal xi = build_signal(cli.cfg, "signal.a", T);
  PathSignal zeta = build_signal(cli.cfg, "signal.b", T);
  DataGenerator u0g = build_data(cli.cfg, "data.u0", m);
  DataGenerator v0g = build_data(cli.cfg, "data.v0", m);
  FSpec f = weighted ? build_fspec(cli.cfg, grid.dim()) : FSpec::zero();
  double upsilon = configured_upsilon(cli, m);
  SolveSetup setup(grid, m, f, build_scheme(cli.cfg));

  StabilityReport rep =
      weighted ? run_comparison_thm2(setup, u0g, v0g, xi, zeta, T, upsilon,
                                     gamma_grid_from(cli))
               : run_comparison_thm1(setup, u0g, v0g, xi, zeta, T, upsilon);
  write_stability(cli, rep);
  if (cli.verbose)
    std::cout << "slices=" << rep.slices << " dev_u=" << rep.dev_u
              << " dev_v=" << rep.dev_v << " theta=" << rep.theta_term
              << (weighted ? " gamma*=" + csv_num(rep.gamma_star) : std::string()) << "\n";
  return {{weighted ? "thm2-bound" : "thm1-bound", rep.measured_sup_gap,
           rep.theorem_bound, rep.scheme_margin, rep.pass}};
}

std::vector<SummaryLine> verb_extend(const Cli& cli) {
  Grid grid = build_grid(cli.cfg);
  MetricField m = metric_with_box(cli, grid);
  double T = cli.cfg.get_num("run", "T");
  DataGenerator u0g = build_data(cli.cfg, "data.u0", m);
  int lo = static_cast<int>(cli.cfg.get_int("run", "level_lo", 3));
  int hi = static_cast<int>(cli.cfg.get_int("run", "level_hi", 9));
  int trend_from = static_cast<int>(cli.cfg.get_int("run", "trend_from", 5));
  double upsilon = configured_upsilon(cli, m);
  SolveSetup setup(grid, m, FSpec::zero(), build_scheme(cli.cfg));

  CauchyTable table =
      run_extension_cauchy(setup, u0g, T, lo, hi, run_seed(cli, 1), upsilon, trend_from);

  CsvWriter pairs(out_path(cli, "cauchy_pairs.csv"),
                  {"n", "m", "signal_dist", "delta_max", "sup_diff", "bound",
                   "smallness_ok", "pass"});
  for (const CauchyPair& p : table.pairs)
    pairs.row({static_cast<double>(p.n), static_cast<double>(p.m), p.signal_dist,
               p.delta_max, p.sup_diff, p.bound, p.smallness_ok ? 1.0 : 0.0,
               p.pass ? 1.0 : 0.0});
  CsvWriter levels(out_path(cli, "cauchy_levels.csv"), {"level", "refinement_dev"});
  for (size_t i = 0; i < table.levels.size(); ++i)
    levels.row({static_cast<double>(table.levels[i]), table.level_dev[i]});

  double worst_ratio = 0.0;
  int skipped = 0;
  for (const CauchyPair& p : table.pairs) {
    if (!p.smallness_ok) {
      ++skipped;
      continue;
    }
    if (p.bound > 0) worst_ratio = std::max(worst_ratio, p.sup_diff / p.bound);
  }
  if (cli.verbose && skipped > 0)
    std::cout << "note: " << skipped << " pairs skipped (smallness violated)\n";

  double trend_break = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = std::max(trend_from, lo); n < hi; ++n) {
    for (const CauchyPair& p : table.pairs)
      if (p.n == n && p.m == n + 1) {
        trend_break = std::max(trend_break, p.sup_diff - prev);
        prev = p.sup_diff;
      }
  }

  std::vector<SummaryLine> out;
  out.push_back({"cauchy-bound", worst_ratio, 1.0, 0.0, table.all_bounded});
  out.push_back({"cauchy-trend", trend_break, 0.0, 1e-12, table.trend_ok});
  return out;
}

std::vector<SummaryLine> verb_isaacs(const Cli& cli) {
  Grid grid = build_grid(cli.cfg);
  MetricField m = metric_with_box(cli, grid);
  FSpec f = build_fspec(cli.cfg, grid.dim());
  if (f.kind() != FSpec::Kind::isaacs)
    throw ConfigError("isaacs-check needs [F] kind = isaacs");
  IsaacsCheckConfig cfg;
  cfg.samples = static_cast<int>(cli.cfg.get_int("run", "samples", cfg.samples));
  cfg.radius = cli.cfg.get_num("run", "radius", cfg.radius);
  cfg.alpha = cli.cfg.get_num("run", "alpha", cfg.alpha);
  cfg.eps = cli.cfg.get_num("run", "eps", cfg.eps);
  cfg.r_bound = cli.cfg.get_num("run", "r_bound", cfg.r_bound);
  cfg.seed = static_cast<unsigned>(run_seed(cli, cfg.seed));
  IsaacsReport rep = isaacs_condition_check(f, m, cfg);

  CsvWriter samples(out_path(cli, "isaacs_samples.csv"),
                    {"d", "s_arg", "diff", "validity"});
  for (const IsaacsSample& s : rep.samples) samples.row({s.d, s.s_arg, s.diff, s.validity});
  CsvWriter report(out_path(cli, "isaacs_report.csv"),
                   {"worst_raw", "fitted_lip", "fitted_cap", "excess_after_fit",
                    "validity_min"});
  report.row({rep.worst_raw, rep.fitted_lip, rep.fitted_cap, rep.worst_excess_after_fit,
              rep.validity_min});

  double excess_tol = cli.cfg.get_num("run", "excess_tol", 1e-9);
  std::vector<SummaryLine> out;
  out.push_back({"isaacs-excess-after-fit", rep.worst_excess_after_fit, 0.0, excess_tol,
                 rep.worst_excess_after_fit <= excess_tol});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pathwise Hamilton-Jacobi toolkit"};
  app.require_subcommand(1);

  Cli cli;
  const char* env_out = std::getenv("PHJ_OUT");
  cli.out_dir = env_out ? env_out : "out";

  std::vector<std::pair<std::string, std::function<std::vector<SummaryLine>(const Cli&)>>>
      verbs = {
          {"geometry-check", verb_geometry},
          {"phi-check", verb_phi},
          {"solve", verb_solve},
          {"compare1", [](const Cli& c) { return verb_compare(c, false); }},
          {"compare2", [](const Cli& c) { return verb_compare(c, true); }},
          {"extend", verb_extend},
          {"isaacs-check", verb_isaacs},
      };

  std::string chosen;
  for (auto& [name, fn] : verbs) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", cli.config_path, "experiment config (INI)")->required();
    sub->add_option("--out", cli.out_dir, "output directory for CSV artifacts");
    sub->add_option("--seed", cli.seed, "override the [run] seed");
    sub->add_flag("--verbose", cli.verbose, "extra diagnostics on stdout");
    sub->callback([&chosen, name = name]() { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the usage message
    return rc == 0 ? 0 : 2;     // help exits clean, everything else is a config error
  }

  try {
    cli.cfg = Config::parse_file(cli.config_path);
    std::filesystem::create_directories(cli.out_dir);
    for (auto& [name, fn] : verbs)
      if (name == chosen) return emit_summary(fn(cli));
    std::cerr << "error: unknown verb\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
