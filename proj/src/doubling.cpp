#include "phj/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phj/errors.hpp"

namespace phj {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DoubledTest::DoubledTest(const MetricField& metric_in, const PathSignal& xi_in,
                         const PathSignal& zeta_in, double lambda_in, double gamma_in,
                         ShootingOptions shooting_in)
    : metric(&metric_in),
      xi(&xi_in),
      zeta(&zeta_in),
      lambda(lambda_in),
      gamma(gamma_in),
      horizon(std::min(xi_in.horizon(), zeta_in.horizon())),
      shooting(std::move(shooting_in)) {
  if (lambda <= 0.0) throw std::invalid_argument("doubled test needs lambda > 0");
  if (gamma < 0.0) throw std::invalid_argument("doubled test needs gamma >= 0");
  const GapPair d = delta_gamma_pm(*xi, *zeta, gamma, horizon);
  if (lambda * d.plus >= 1.0)
    throw DenominatorVanishing("lambda * Delta^{gamma,+} >= 1 on the horizon");
}

double phi_prefactor(const DoubledTest& test, double t) {
  const double denom =
      1.0 - test.lambda * weighted_gap_integral(*test.xi, *test.zeta, test.gamma, t);
  if (denom <= 1e-14)
    throw DenominatorVanishing("doubled test denominator vanished at t");
  return test.lambda * std::exp(test.gamma * t) / denom;
}

double phi_eval(const DoubledTest& test, const Vec& x, const Vec& y, double t) {
  return phi_prefactor(test, t) * energy(*test.metric, x, y, test.shooting);
}

SandwichReport phi_sandwich_check(const DoubledTest& test,
                                  const std::vector<PhiSample>& samples) {
  if (test.gamma != 0.0)
    throw std::invalid_argument("sandwich bounds apply to the unweighted test only");
  const GapPair d = delta_pm(*test.xi, *test.zeta, test.horizon);
  SandwichReport rep{-kInf, -kInf, 0};
  for (const PhiSample& s : samples) {
    const double e = energy(*test.metric, s.x, s.y, test.shooting);
    const double phi = phi_prefactor(test, s.t) * e;
    const double lower = test.lambda * e / (1.0 + test.lambda * d.minus);
    const double upper = test.lambda * e / (1.0 - test.lambda * d.plus);
    const double v = std::max(lower - phi, phi - upper);
    rep.worst_violation = std::max(rep.worst_violation, v);
    rep.worst_normalized = std::max(rep.worst_normalized, v / (1.0 + phi));
    ++rep.samples;
  }
  return rep;
}

double phi_pde_residual(const DoubledTest& test, const Vec& x, const Vec& y, double t,
                        double h_fd) {
  if (h_fd < 0.0) throw std::invalid_argument("h_fd must be >= 0");
  if (t <= h_fd || t >= test.horizon - h_fd)
    throw BreakpointTime("t must be interior to (0, T) with h_fd clearance");
  for (const PathSignal* s : {test.xi, test.zeta})
    for (double bp : s->times())
      if (std::abs(bp - t) <= h_fd)
        throw BreakpointTime("signal breakpoint inside the h_fd window");

  const double xi_dot = test.xi->slope(t);
  const double zeta_dot = test.zeta->slope(t);
  const double a = phi_prefactor(test, t);

  const ShootingResult shot = invert_endpoint(*test.metric, x, y, test.shooting);
  const Vec dxe = -shot.p0, dye = shot.p1;
  const double ham_x = dxe.dot(test.metric->g_inv(x) * dxe);
  const double ham_y = dye.dot(test.metric->g_inv(y) * dye);

  // w = a(t) e; a' = gamma a + a^2 (xi' - zeta'), so
  // w_t - gamma w = a^2 (xi' - zeta') e and the Hamiltonian terms carry a^2.
  return a * a *
         ((xi_dot - zeta_dot) * shot.energy - ham_x * xi_dot + ham_y * zeta_dot);
}

LambdaWindow admissible_lambda_window(double k_const, const PathSignal& xi,
                                      const PathSignal& zeta, double gamma, double T,
                                      double upsilon, WindowRule rule) {
  if (k_const < 0.0) throw std::invalid_argument("K must be >= 0");
  if (upsilon <= 0.0) throw std::invalid_argument("upsilon must be > 0");
  const GapPair d = delta_gamma_pm(xi, zeta, gamma, T);
  const double upper = d.plus > 0.0 ? 1.0 / d.plus : kInf;
  const double ups = rule == WindowRule::upsilon_linear ? upsilon : upsilon * upsilon;
  const double denom = ups - 4.0 * k_const * d.minus;
  if (denom <= 0.0)
    throw EmptyWindow("4 K Delta^{gamma,-} exhausts the radius term");
  const double lower = 4.0 * k_const / denom;
  if (lower >= upper)
    throw EmptyWindow("lambda window is empty for these constants");
  return {lower, upper, rule, d};
}

BasicBound comparison_bound_basic(const BoundInputs& in, const PathSignal& xi,
                                  const PathSignal& zeta, double T) {
  const GapPair d = delta_pm(xi, zeta, T);
  BasicBound out;
  out.delta = d;
  out.smallness_lhs = d.plus + d.minus;
  const double norms = in.u0_norm + in.v0_norm;
  out.smallness_threshold =
      norms > 0.0 ? in.upsilon * in.upsilon / (2.0 * norms) : kInf;
  out.smallness_threshold_strict =
      norms > 0.0 ? in.upsilon * in.upsilon / (4.0 * norms) : kInf;
  if (out.smallness_lhs >= out.smallness_threshold)
    throw SmallnessViolated(out.smallness_lhs, out.smallness_threshold,
                            out.smallness_threshold_strict);
  const Modulus omega = in.u0_mod.min_with(in.v0_mod);
  out.theta_term = d.plus > 0.0 ? theta(omega, 1.0 / d.plus) : 0.0;
  out.value = in.sup_gap + out.theta_term;
  return out;
}

WeightedBound comparison_bound_weighted(const BoundInputs& in, const KConstant& k,
                                        const Modulus& f_modulus, const PathSignal& xi,
                                        const PathSignal& zeta, double T,
                                        const std::vector<double>& gamma_grid) {
  if (gamma_grid.empty()) throw std::invalid_argument("gamma grid is empty");
  for (double g : gamma_grid)
    if (g <= 0.0) throw std::invalid_argument("gamma grid must be positive");
  std::vector<double> grid = gamma_grid;
  std::sort(grid.begin(), grid.end());

  const double kv = k.value();
  const double gap_budget = in.upsilon * in.upsilon / (4.0 * kv);  // +inf if kv == 0
  const Modulus omega = in.u0_mod.min_with(in.v0_mod);

  WeightedBound out;
  out.value = kInf;
  out.gamma_star = 0.0;
  out.boundary_attained = false;
  out.admissible_count = 0;

  for (double gamma : grid) {
    const GapPair d = delta_gamma_pm(xi, zeta, gamma, T);
    if (!(d.plus + d.minus < gap_budget) || !(d.minus < 1.0)) continue;
    ++out.admissible_count;
    double tilde;
    try {
      tilde = theta_tilde(f_modulus, gamma);
    } catch (const ThetaTildeInfinite&) {
      continue;  // this gamma contributes +inf
    }
    const double th = d.plus > 0.0 ? theta(omega, 1.0 / d.plus) : 0.0;
    const double om = f_modulus(2.0 * std::sqrt(kv * (d.plus + d.minus)));
    const double total = th + (tilde + om) / k.rho;
    if (total < out.value) {
      out.value = total;
      out.gamma_star = gamma;
      out.theta_term = th;
      out.theta_tilde_term = tilde / k.rho;
      out.omega_term = om / k.rho;
      out.delta_star = d;
    }
  }
  if (!std::isfinite(out.value))
    throw EmptyGamma("no gamma on the grid satisfies the admissibility conditions");
  out.boundary_attained =
      out.gamma_star == grid.front() || out.gamma_star == grid.back();
  out.value += in.sup_gap;
  return out;
}

}  // namespace phj
