#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "phj/doubling.hpp"
#include "phj/fspec.hpp"
#include "phj/grid.hpp"
#include "phj/metric.hpp"
#include "phj/scheme.hpp"
#include "phj/signal.hpp"

namespace phj {

// Closed-form initial datum, resampleable on any grid so the refinement rerun
// can rebuild it exactly.
using DataGenerator = std::function<InitialData(const Grid&)>;

struct SolveSetup {
  Grid grid;
  MetricField metric;
  FSpec f;
  SchemeOptions scheme;
  SolveSetup(Grid g, MetricField m, FSpec fs, SchemeOptions opt = SchemeOptions())
      : grid(std::move(g)), metric(std::move(m)), f(std::move(fs)), scheme(opt) {}
};

// Outcome of one two-signal stability experiment. The pass flag states
// measured_sup_gap <= theorem_bound + scheme_margin, where the margin is
// twice the refinement deviation summed over both numerical solutions.
struct StabilityReport {
  double measured_sup_gap = 0;
  double theorem_bound = 0;
  double scheme_margin = 0;
  bool pass = false;

  double delta_plus = 0, delta_minus = 0;
  double upsilon = 0;
  double theta_term = 0;
  double gamma_star = 0, theta_tilde_term = 0, omega_term = 0;  // weighted bound only
  double dev_u = 0, dev_v = 0;   // refinement deviations behind the margin
  long slices = 0;
  std::string note;

  // Per-recorded-time rows (time, gap, sup u, sup v) for CSV output.
  std::vector<std::array<double, 4>> trace;
};

// First-order comparison experiment: f must be the zero kind; solves the pair
// ((u0, xi), (v0, zeta)) on a shared slice partition and checks the measured
// gap against the basic bound.
StabilityReport run_comparison_thm1(const SolveSetup& s, const DataGenerator& u0_gen,
                                    const DataGenerator& v0_gen, const PathSignal& xi,
                                    const PathSignal& zeta, double T, double upsilon);

// Second-order variant: F active, bound taken as the best admissible weight
// on the supplied gamma grid.
StabilityReport run_comparison_thm2(const SolveSetup& s, const DataGenerator& u0_gen,
                                    const DataGenerator& v0_gen, const PathSignal& xi,
                                    const PathSignal& zeta, double T, double upsilon,
                                    const std::vector<double>& gamma_grid);

struct CauchyPair {
  int n = 0, m = 0;
  double signal_dist = 0;   // sup |xi_n - xi_m|
  double delta_max = 0;     // max of the pair's one-sided gaps
  double sup_diff = 0;      // max over nodes and recorded times of |u_n - u_m|
  double bound = 0;         // theta bound + margin; +inf if smallness failed
  bool smallness_ok = true;
  bool pass = false;
};

struct CauchyTable {
  std::vector<int> levels;
  std::vector<double> level_dev;   // refinement deviation per level
  std::vector<CauchyPair> pairs;
  bool trend_ok = false;     // D_{n,n+1} nonincreasing from trend_from_level on
  bool all_bounded = false;  // every smallness-ok pair passed its bound
  std::uint64_t seed = 0;
};

// Dyadic-refinement Cauchy experiment: one Brownian seed, piecewise-linear
// interpolations at levels [level_lo, level_hi], all solutions advanced on
// the finest merged partition, pairwise gaps against the first-order bound
// with Delta = max(Delta+, Delta-) of the actual signal pair.
CauchyTable run_extension_cauchy(const SolveSetup& s, const DataGenerator& u0_gen,
                                 double T, int level_lo, int level_hi,
                                 std::uint64_t seed, double upsilon,
                                 int trend_from_level);

struct ModulusProbeRow {
  double amplitude = 0;
  int periods = 0;
  double max_lipschitz = 0;    // max over recorded times
  double final_lipschitz = 0;
};

struct ModulusProbeTable {
  double u0_lipschitz = 0;
  std::vector<ModulusProbeRow> rows;
  double mean = 0, spread = 0;  // of max_lipschitz across rows
};

// Drives the same initial datum with zigzag signals of equal total variation
// and decreasing amplitude; the spatial Lipschitz estimate should not care.
ModulusProbeTable modulus_uniformity_probe(const SolveSetup& s,
                                           const DataGenerator& u0_gen, double T,
                                           const std::vector<std::pair<double, int>>&
                                               amplitude_periods);

}  // namespace phj
