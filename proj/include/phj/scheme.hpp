#pragma once

#include <vector>

#include "phj/fspec.hpp"
#include "phj/grid.hpp"
#include "phj/metric.hpp"
#include "phj/signal.hpp"

namespace phj {

struct SchemeOptions {
  double dt_max = 1e-3;      // cap on the slice length fed to the splitting
  double cfl_safety = 0.9;   // fraction of the stability limit actually used
  long max_substeps = 4'000'000;  // per solve; exceeded -> CFLFailure
  int snapshot_stride = 0;   // record state every k-th slice (0 = final only)
};

// Dissipation speed for the Lax-Friedrichs step: bounds |dH/dp| componentwise
// for H = xi_dot (g^{-1}(x)p, p) over every gradient the state can produce.
// Convex in u, so the max of two states' speeds covers the segment between
// them; the monotonicity property test relies on exactly that.
double lf_speed(const GridFunction& u, const MetricField& m, double xi_dot);

// One explicit update of u_t = xi_dot (g^{-1}(x)Du, Du) with centered
// gradients and dissipation sigma_lf. No CFL check here: callers either go
// through step_hamiltonian or (in tests) manage dt and sigma_lf themselves.
GridFunction lf_substep(const GridFunction& u, const MetricField& m, double xi_dot,
                        double dt, double sigma_lf);

// Advance u_t = xi_dot (g^{-1}(x)Du, Du) by dt, substepping to stay inside
// the CFL bound; the speed is recomputed every substep. substeps_used, when
// given, receives the count.
GridFunction step_hamiltonian(const GridFunction& u, const MetricField& m,
                              double xi_dot, double dt,
                              const SchemeOptions& opt = SchemeOptions(),
                              long* substeps_used = nullptr);

// Advance u_t = F(D^2u, Du, u, x) by dt with a monotone explicit step:
// centered second differences (sign-adapted diagonal stencil for the 2-D
// cross term), upwinded |Du| for the Isaacs drift, and the zeroth-order
// factor integrated exactly per substep.
GridFunction step_F(const GridFunction& u, const FSpec& f, double dt,
                    const SchemeOptions& opt = SchemeOptions(),
                    long* substeps_used = nullptr);

// Slice endpoints for [0, T]: every breakpoint of xi, plus subdivision so no
// slice exceeds dt_max.
std::vector<double> time_partition(const PathSignal& xi, double T, double dt_max);

struct SliceInfo {
  double t0 = 0, t1 = 0, xi_dot = 0;
  long substeps_f = 0, substeps_h = 0;
  double sup_norm = 0, lipschitz = 0;
};

struct SolveResult {
  GridFunction state;               // at time T
  std::vector<SliceInfo> slices;
  std::vector<GridFunction> snapshots;   // time_stamp carries the snapshot time
};

// Lie splitting per slice: step_F, then step_hamiltonian with the slice's
// constant slope. Slices never straddle signal breakpoints.
SolveResult solve(const GridFunction& u0, const MetricField& m, const FSpec& f,
                  const PathSignal& xi, double T,
                  const SchemeOptions& opt = SchemeOptions());

// Flat-metric oracle for u_t = |Du|^2 after time s >= 0 (monotone signal
// clock): discrete max of u0(y) - dist_per(x, y)^2 / (4 s) over all nodes y.
// Exact maximization, O(n^2); intended for small grids.
GridFunction hopf_lax_flat(const GridFunction& u0, double s);

}  // namespace phj
