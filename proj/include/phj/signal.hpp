#pragma once

#include <cstdint>
#include <vector>

namespace phj {

// Continuous piecewise-linear driving signal on [0, horizon] with value 0 at
// t = 0. Breakpoint times are strictly increasing; between breakpoints the
// slope is constant, which every functional below exploits for exactness.
class PathSignal {
 public:
  PathSignal(std::vector<double> times, std::vector<double> values);

  static PathSignal zero(double horizon);
  static PathSignal linear(double slope, double horizon);
  // periods full up-down teeth of the given amplitude, evenly over [0, horizon]
  static PathSignal zigzag(double amplitude, int periods, double horizon);

  double horizon() const { return times_.back(); }
  double value(double t) const;
  // Slope of the segment containing t (right-continuous at breakpoints).
  double slope(double t) const;

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> times_, values_;
};

// Union of both signals' breakpoints restricted to [0, T], with 0 and T
// included. Throws HorizonMismatch if either signal ends before T.
std::vector<double> merged_breakpoints(const PathSignal& xi, const PathSignal& zeta,
                                       double T);

struct GapPair {
  double plus = 0.0;   // running maximum of +(xi - zeta), >= 0
  double minus = 0.0;  // running maximum of -(xi - zeta), >= 0
};

// Exact one-sided running gaps max_{t <= T} +-(xi_t - zeta_t). The difference
// is piecewise linear, so breakpoint values suffice.
GapPair delta_pm(const PathSignal& xi, const PathSignal& zeta, double T);

// Exact exponentially weighted gaps sup_{t <= T} +- I(t) with
// I(t) = int_0^t e^{gamma s} (xi' - zeta') ds. gamma >= 0; gamma = 0 reduces
// to delta_pm. Returns {+inf, +inf} if the weights overflow on a segment
// where the slopes differ (such gammas are useless downstream anyway).
GapPair delta_gamma_pm(const PathSignal& xi, const PathSignal& zeta, double gamma,
                       double T);

// I(t) as above, exact per segment; used by the doubled test function.
double weighted_gap_integral(const PathSignal& xi, const PathSignal& zeta,
                             double gamma, double t);

// sup_{t <= T} |xi_t - zeta_t| (exact).
double sup_distance(const PathSignal& xi, const PathSignal& zeta, double T);

// Brownian path on the dyadic grid k T / 2^level via bridge midpoint
// refinement. For a fixed seed the level-(n+1) path restricted to the
// level-n grid equals the level-n path exactly.
PathSignal sample_brownian(int level, double horizon, std::uint64_t seed);

}  // namespace phj
