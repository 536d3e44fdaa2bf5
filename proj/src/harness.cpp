#include "phj/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "phj/errors.hpp"
#include "phj/modulus.hpp"

namespace phj {

namespace {

// Slice endpoints covering [0, T]: breakpoints of every signal, subdivided so
// no slice exceeds dt_max. All signals are piecewise linear between these.
std::vector<double> merged_partition(const std::vector<const PathSignal*>& signals,
                                     double T, double dt_max) {
  std::vector<double> anchors{0.0, T};
  for (const PathSignal* s : signals)
    for (double b : s->times())
      if (b > 1e-15 && b < T - 1e-15) anchors.push_back(b);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                anchors.end());
  std::vector<double> out;
  for (size_t k = 0; k + 1 < anchors.size(); ++k) {
    double a = anchors[k], b = anchors[k + 1];
    int parts = std::max(1, static_cast<int>(std::ceil((b - a) / dt_max - 1e-12)));
    for (int j = 0; j < parts; ++j) out.push_back(a + (b - a) * j / parts);
  }
  out.push_back(T);
  return out;
}

std::vector<double> insert_midpoints(const std::vector<double>& part) {
  std::vector<double> out;
  out.reserve(2 * part.size());
  for (size_t k = 0; k + 1 < part.size(); ++k) {
    out.push_back(part[k]);
    out.push_back(0.5 * (part[k] + part[k + 1]));
  }
  out.push_back(part.back());
  return out;
}

// Advances every (state, signal) pair through the partition with the Lie
// split and hands each slice-end state row to the visitor, starting with the
// initial row at part[0].
using Visitor = std::function<void(size_t step_index, double t,
                                   const std::vector<GridFunction>& states)>;

void co_advance(const MetricField& m, const FSpec& f, const SchemeOptions& opt,
                std::vector<GridFunction>& states,
                const std::vector<const PathSignal*>& signals,
                const std::vector<double>& part, const Visitor& visit) {
  visit(0, part.front(), states);
  for (size_t k = 0; k + 1 < part.size(); ++k) {
    double t0 = part[k], t1 = part[k + 1], dt = t1 - t0;
    double tm = 0.5 * (t0 + t1);
    for (size_t a = 0; a < states.size(); ++a) {
      GridFunction next = step_F(states[a], f, dt, opt);
      states[a] = step_hamiltonian(next, m, signals[a]->slope(tm), dt, opt);
      states[a].time_stamp = t1;
    }
    visit(k + 1, t1, states);
  }
}

// Evenly thinned index set of at most `budget` interior checkpoints plus the
// final index; used to bound the memory of the refinement comparison.
std::vector<size_t> checkpoint_indices(size_t n_points, size_t budget) {
  std::vector<size_t> idx;
  size_t stride = std::max<size_t>(1, (n_points + budget - 1) / budget);
  for (size_t k = stride; k < n_points; k += stride) idx.push_back(k);
  if (idx.empty() || idx.back() != n_points - 1) idx.push_back(n_points - 1);
  return idx;
}

struct PairRunResult {
  double measured = 0;     // max over slice ends of max(u - v)
  double dev_u = 0, dev_v = 0;
  long slices = 0;
  std::vector<std::array<double, 4>> trace;
};

PairRunResult run_pair(const SolveSetup& s, const InitialData& u0, const InitialData& v0,
                       const DataGenerator& u0_gen, const DataGenerator& v0_gen,
                       const PathSignal& xi, const PathSignal& zeta, double T) {
  std::vector<const PathSignal*> sigs{&xi, &zeta};
  std::vector<double> part = merged_partition(sigs, T, s.scheme.dt_max);
  std::vector<size_t> cps = checkpoint_indices(part.size(), 384);

  PairRunResult res;
  res.slices = static_cast<long>(part.size()) - 1;
  size_t trace_stride = std::max<size_t>(1, part.size() / 1024);

  // Coarse pass at the configured resolution.
  std::vector<GridFunction> states{u0.values, v0.values};
  std::vector<GridFunction> saved_u, saved_v;
  size_t next_cp = 0;
  co_advance(s.metric, s.f, s.scheme, states, sigs, part,
             [&](size_t k, double t, const std::vector<GridFunction>& st) {
               res.measured = std::max(res.measured, max_signed_gap(st[0], st[1]));
               if (k % trace_stride == 0 || k + 1 == part.size())
                 res.trace.push_back({t, max_signed_gap(st[0], st[1]),
                                      st[0].sup_norm(), st[1].sup_norm()});
               if (next_cp < cps.size() && k == cps[next_cp]) {
                 saved_u.push_back(st[0]);
                 saved_v.push_back(st[1]);
                 ++next_cp;
               }
             });

  // Refined pass: doubled nodes, halved slices, same generators and signals.
  Grid fine_grid = s.grid.refined();
  InitialData fu0 = u0_gen(fine_grid), fv0 = v0_gen(fine_grid);
  std::vector<GridFunction> fine{fu0.values, fv0.values};
  std::vector<double> fpart = insert_midpoints(part);
  size_t cp = 0;
  co_advance(s.metric, s.f, s.scheme, fine, sigs, fpart,
             [&](size_t k, double, const std::vector<GridFunction>& st) {
               if (k % 2 != 0) return;  // fine index 2j sits at coarse index j
               size_t coarse_k = k / 2;
               if (cp < cps.size() && coarse_k == cps[cp]) {
                 res.dev_u = std::max(res.dev_u, restriction_sup_diff(saved_u[cp], st[0]));
                 res.dev_v = std::max(res.dev_v, restriction_sup_diff(saved_v[cp], st[1]));
                 ++cp;
               }
             });
  return res;
}

}  // namespace

StabilityReport run_comparison_thm1(const SolveSetup& s, const DataGenerator& u0_gen,
                                    const DataGenerator& v0_gen, const PathSignal& xi,
                                    const PathSignal& zeta, double T, double upsilon) {
  if (s.f.kind() != FSpec::Kind::zero)
    throw std::invalid_argument("run_comparison_thm1: requires the zero right-hand side");
  InitialData u0 = u0_gen(s.grid), v0 = v0_gen(s.grid);

  BoundInputs in{u0.modulus, v0.modulus, max_signed_gap(u0.values, v0.values), upsilon,
                 u0.sup_norm, v0.sup_norm};
  BasicBound bound = comparison_bound_basic(in, xi, zeta, T);

  PairRunResult run = run_pair(s, u0, v0, u0_gen, v0_gen, xi, zeta, T);

  StabilityReport rep;
  rep.measured_sup_gap = run.measured;
  rep.theorem_bound = bound.value;
  rep.scheme_margin = 2.0 * (run.dev_u + run.dev_v);
  rep.pass = rep.measured_sup_gap <= rep.theorem_bound + rep.scheme_margin;
  rep.delta_plus = bound.delta.plus;
  rep.delta_minus = bound.delta.minus;
  rep.upsilon = upsilon;
  rep.theta_term = bound.theta_term;
  rep.dev_u = run.dev_u;
  rep.dev_v = run.dev_v;
  rep.slices = run.slices;
  rep.trace = std::move(run.trace);
  return rep;
}

StabilityReport run_comparison_thm2(const SolveSetup& s, const DataGenerator& u0_gen,
                                    const DataGenerator& v0_gen, const PathSignal& xi,
                                    const PathSignal& zeta, double T, double upsilon,
                                    const std::vector<double>& gamma_grid) {
  if (!(s.f.rho() > 0))
    throw std::invalid_argument("run_comparison_thm2: needs a right-hand side with rho > 0");
  InitialData u0 = u0_gen(s.grid), v0 = v0_gen(s.grid);

  BoundInputs in{u0.modulus, v0.modulus,
                 std::max(0.0, max_signed_gap(u0.values, v0.values)), upsilon,
                 u0.sup_norm, v0.sup_norm};
  KConstant k{s.f.rho(), s.f.f_sup(), u0.sup_norm, v0.sup_norm};
  WeightedBound bound =
      comparison_bound_weighted(in, k, s.f.f_modulus(), xi, zeta, T, gamma_grid);

  PairRunResult run = run_pair(s, u0, v0, u0_gen, v0_gen, xi, zeta, T);

  StabilityReport rep;
  rep.measured_sup_gap = run.measured;
  rep.theorem_bound = bound.value;
  rep.scheme_margin = 2.0 * (run.dev_u + run.dev_v);
  rep.pass = rep.measured_sup_gap <= rep.theorem_bound + rep.scheme_margin;
  rep.delta_plus = bound.delta_star.plus;
  rep.delta_minus = bound.delta_star.minus;
  rep.upsilon = upsilon;
  rep.theta_term = bound.theta_term;
  rep.gamma_star = bound.gamma_star;
  rep.theta_tilde_term = bound.theta_tilde_term;
  rep.omega_term = bound.omega_term;
  rep.dev_u = run.dev_u;
  rep.dev_v = run.dev_v;
  rep.slices = run.slices;
  rep.trace = std::move(run.trace);
  if (bound.boundary_attained)
    rep.note = "gamma infimum attained on the grid boundary; widen the gamma grid";
  return rep;
}

CauchyTable run_extension_cauchy(const SolveSetup& s, const DataGenerator& u0_gen,
                                 double T, int level_lo, int level_hi,
                                 std::uint64_t seed, double upsilon,
                                 int trend_from_level) {
  if (level_hi < level_lo) throw std::invalid_argument("run_extension_cauchy: bad level range");
  const int L = level_hi - level_lo + 1;

  std::vector<PathSignal> sig;
  sig.reserve(L);
  for (int n = level_lo; n <= level_hi; ++n) sig.push_back(sample_brownian(n, T, seed));
  std::vector<const PathSignal*> sigs;
  for (const auto& p : sig) sigs.push_back(&p);

  InitialData u0 = u0_gen(s.grid);
  std::vector<double> part = merged_partition(sigs, T, s.scheme.dt_max);
  std::vector<size_t> cps = checkpoint_indices(part.size(), 192);

  std::vector<GridFunction> states(L, u0.values);
  std::vector<std::vector<GridFunction>> saved(L);
  Mat gap = Mat::Zero(L, L);
  size_t next_cp = 0;
  co_advance(s.metric, s.f, s.scheme, states, sigs, part,
             [&](size_t k, double, const std::vector<GridFunction>& st) {
               for (int a = 0; a < L; ++a)
                 for (int b = a + 1; b < L; ++b)
                   gap(a, b) = std::max(gap(a, b), sup_diff(st[a], st[b]));
               if (next_cp < cps.size() && k == cps[next_cp]) {
                 for (int a = 0; a < L; ++a) saved[a].push_back(st[a]);
                 ++next_cp;
               }
             });

  Grid fine_grid = s.grid.refined();
  InitialData fu0 = u0_gen(fine_grid);
  std::vector<GridFunction> fine(L, fu0.values);
  std::vector<double> fpart = insert_midpoints(part);
  std::vector<double> dev(L, 0.0);
  size_t cp = 0;
  co_advance(s.metric, s.f, s.scheme, fine, sigs, fpart,
             [&](size_t k, double, const std::vector<GridFunction>& st) {
               if (k % 2 != 0) return;
               if (cp < cps.size() && k / 2 == cps[cp]) {
                 for (int a = 0; a < L; ++a)
                   dev[a] = std::max(dev[a], restriction_sup_diff(saved[a][cp], st[a]));
                 ++cp;
               }
             });

  CauchyTable table;
  table.seed = seed;
  table.level_dev = dev;
  for (int n = level_lo; n <= level_hi; ++n) table.levels.push_back(n);

  const double smallness_threshold =
      upsilon * upsilon / (2.0 * (u0.sup_norm + u0.sup_norm));
  bool all_ok = true;
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b) {
      CauchyPair pr;
      pr.n = level_lo + a;
      pr.m = level_lo + b;
      pr.signal_dist = sup_distance(sig[a], sig[b], T);
      GapPair d = delta_pm(sig[a], sig[b], T);
      pr.delta_max = std::max(d.plus, d.minus);
      pr.sup_diff = gap(a, b);
      pr.smallness_ok = (d.plus + d.minus < smallness_threshold);
      double margin = 2.0 * (dev[a] + dev[b]);
      if (!pr.smallness_ok) {
        pr.bound = std::numeric_limits<double>::infinity();
        pr.pass = false;  // reported, not counted
      } else {
        double th = pr.delta_max > 0 ? theta(u0.modulus, 1.0 / pr.delta_max) : 0.0;
        pr.bound = th + margin;
        pr.pass = pr.sup_diff <= pr.bound;
        all_ok = all_ok && pr.pass;
      }
      table.pairs.push_back(pr);
    }
  table.all_bounded = all_ok;

  bool trend = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = std::max(trend_from_level, level_lo); n < level_hi; ++n) {
    int a = n - level_lo;
    double d = gap(a, a + 1);
    if (d > prev + 1e-12) trend = false;
    prev = d;
  }
  table.trend_ok = trend;
  return table;
}

ModulusProbeTable modulus_uniformity_probe(
    const SolveSetup& s, const DataGenerator& u0_gen, double T,
    const std::vector<std::pair<double, int>>& amplitude_periods) {
  InitialData u0 = u0_gen(s.grid);
  ModulusProbeTable table;
  table.u0_lipschitz = u0.values.lipschitz_estimate();
  for (auto [amp, periods] : amplitude_periods) {
    PathSignal xi = PathSignal::zigzag(amp, periods, T);
    SolveResult run = solve(u0.values, s.metric, s.f, xi, T, s.scheme);
    ModulusProbeRow row;
    row.amplitude = amp;
    row.periods = periods;
    row.max_lipschitz = table.u0_lipschitz;
    for (const SliceInfo& sl : run.slices)
      row.max_lipschitz = std::max(row.max_lipschitz, sl.lipschitz);
    row.final_lipschitz = run.slices.empty() ? table.u0_lipschitz : run.slices.back().lipschitz;
    table.rows.push_back(row);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
  for (const auto& r : table.rows) {
    lo = std::min(lo, r.max_lipschitz);
    hi = std::max(hi, r.max_lipschitz);
    sum += r.max_lipschitz;
  }
  table.mean = table.rows.empty() ? 0.0 : sum / table.rows.size();
  table.spread = table.rows.empty() ? 0.0 : hi - lo;
  return table;
}

}  // namespace phj
