#include "phj/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "phj/errors.hpp"

namespace phj {

namespace {

// Per-axis one-sided difference envelope at node `flat`: max(|D+|, |D-|).
Vec one_sided_envelope(const GridFunction& u, int flat) {
  const Grid& g = u.grid();
  const double h = g.h();
  Vec p(g.dim());
  if (g.dim() == 1) {
    int i = flat;
    double dp = (u[g.index(i + 1)] - u[i]) / h;
    double dm = (u[i] - u[g.index(i - 1)]) / h;
    p[0] = std::max(std::abs(dp), std::abs(dm));
  } else {
    int i = flat % g.nodes(), j = flat / g.nodes();
    double u0 = u[flat];
    double dxp = (u[g.index(i + 1, j)] - u0) / h;
    double dxm = (u0 - u[g.index(i - 1, j)]) / h;
    double dyp = (u[g.index(i, j + 1)] - u0) / h;
    double dym = (u0 - u[g.index(i, j - 1)]) / h;
    p[0] = std::max(std::abs(dxp), std::abs(dxm));
    p[1] = std::max(std::abs(dyp), std::abs(dym));
  }
  return p;
}

Vec centered_gradient(const GridFunction& u, int flat) {
  const Grid& g = u.grid();
  const double two_h = 2.0 * g.h();
  Vec p(g.dim());
  if (g.dim() == 1) {
    p[0] = (u[g.index(flat + 1)] - u[g.index(flat - 1)]) / two_h;
  } else {
    int i = flat % g.nodes(), j = flat / g.nodes();
    p[0] = (u[g.index(i + 1, j)] - u[g.index(i - 1, j)]) / two_h;
    p[1] = (u[g.index(i, j + 1)] - u[g.index(i, j - 1)]) / two_h;
  }
  return p;
}

double second_differences(const GridFunction& u, int flat, double* lap_out = nullptr) {
  // Returns the plain Laplacian stencil sum (second differences over axes).
  const Grid& g = u.grid();
  const double h2 = g.h() * g.h();
  double s;
  if (g.dim() == 1) {
    s = (u[g.index(flat + 1)] - 2.0 * u[flat] + u[g.index(flat - 1)]) / h2;
  } else {
    int i = flat % g.nodes(), j = flat / g.nodes();
    s = (u[g.index(i + 1, j)] + u[g.index(i - 1, j)] + u[g.index(i, j + 1)] +
         u[g.index(i, j - 1)] - 4.0 * u[flat]) /
        h2;
  }
  if (lap_out) *lap_out = s;
  return s;
}

long checked_substep_count(double total, double allowed, long budget) {
  if (total <= 0) return 0;
  double n = std::ceil(total / allowed - 1e-12);
  if (!(n >= 0) || n > static_cast<double>(budget))
    throw CFLFailure("time-step constraint needs " + std::to_string(n) +
                     " substeps, budget " + std::to_string(budget));
  return std::max<long>(1, static_cast<long>(n));
}

}  // namespace

double lf_speed(const GridFunction& u, const MetricField& m, double xi_dot) {
  if (xi_dot == 0.0) return 0.0;
  const Grid& g = u.grid();
  double s = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    Vec env = one_sided_envelope(u, i);
    Mat ginv_abs = m.g_inv(g.point(i)).cwiseAbs();
    s = std::max(s, (ginv_abs * env).lpNorm<Eigen::Infinity>());
  }
  return 2.0 * std::abs(xi_dot) * s;
}

GridFunction lf_substep(const GridFunction& u, const MetricField& m, double xi_dot,
                        double dt, double sigma_lf) {
  const Grid& g = u.grid();
  GridFunction out(g);
  const double h = g.h();
  for (int i = 0; i < g.size(); ++i) {
    Vec p = centered_gradient(u, i);
    double ham = xi_dot * p.dot(m.g_inv(g.point(i)) * p);
    double diss = (sigma_lf / 2.0) * second_differences(u, i) * h;
    out[i] = u[i] + dt * (ham + diss);
  }
  out.time_stamp = u.time_stamp + dt;
  return out;
}

GridFunction step_hamiltonian(const GridFunction& u, const MetricField& m,
                              double xi_dot, double dt, const SchemeOptions& opt,
                              long* substeps_used) {
  if (dt < 0) throw std::invalid_argument("step_hamiltonian: negative dt");
  GridFunction cur = u;
  long used = 0;
  if (dt > 0 && xi_dot != 0.0) {
    const Grid& g = u.grid();
    double remaining = dt;
    while (remaining > 1e-18 * dt) {
      double sigma = lf_speed(cur, m, xi_dot);
      double allowed = remaining;
      if (sigma > 0) allowed = std::min(allowed, opt.cfl_safety * g.h() / (g.dim() * sigma));
      if (++used > opt.max_substeps)
        throw CFLFailure("step_hamiltonian exceeded the substep budget");
      cur = lf_substep(cur, m, xi_dot, allowed, sigma);
      remaining -= allowed;
    }
  }
  cur.time_stamp = u.time_stamp + dt;
  if (substeps_used) *substeps_used = used;
  return cur;
}

namespace {

// One exact-factor substep of u_t = L(u) - c u with branch data frozen.
// L is the branch's stencil value at the node; c >= 0.
inline double zeroth_order_update(double u0, double rate, double c, double dt) {
  if (c <= 0) return u0 + dt * rate;
  double e = std::exp(-c * dt);
  return e * u0 + (1.0 - e) / c * rate;
}

GridFunction diffusion_substep(const GridFunction& u, const FSpec& f, double dt) {
  const Grid& g = u.grid();
  const Mat& a = f.diffusion_matrix();
  const double h2 = g.h() * g.h();
  GridFunction out(g);
  if (g.dim() == 1) {
    for (int i = 0; i < g.size(); ++i) {
      double lap = a(0, 0) * (u[g.index(i + 1)] - 2.0 * u[i] + u[g.index(i - 1)]) / h2;
      out[i] = zeroth_order_update(u[i], lap, f.rho(), dt);
    }
    return out;
  }
  const double a11 = a(0, 0), a22 = a(1, 1), a12 = a(0, 1);
  for (int flat = 0; flat < g.size(); ++flat) {
    int i = flat % g.nodes(), j = flat / g.nodes();
    double u0 = u[flat];
    double axx = (u[g.index(i + 1, j)] - 2.0 * u0 + u[g.index(i - 1, j)]) / h2;
    double ayy = (u[g.index(i, j + 1)] - 2.0 * u0 + u[g.index(i, j - 1)]) / h2;
    double cross = 0.0;
    if (a12 != 0) {
      // Sign-matched diagonal pair for 2 a12 u_xy; off-diagonal weights stay
      // nonnegative because |a12| <= min(a11, a22).
      int s = a12 > 0 ? 1 : -1;
      cross = std::abs(a12) *
              (2.0 * u0 + u[g.index(i + 1, j + s)] + u[g.index(i - 1, j - s)] -
               u[g.index(i + 1, j)] - u[g.index(i - 1, j)] - u[g.index(i, j + 1)] -
               u[g.index(i, j - 1)]) /
              h2;
    }
    out[flat] = zeroth_order_update(u0, a11 * axx + a22 * ayy + cross, f.rho(), dt);
  }
  return out;
}

// Sign-aware upwind |Du| at a node (per-axis envelope a la Rouy-Tourin):
// for a positive coefficient each axis takes max(D+, -D-, 0); a negative
// coefficient flips to max(D-, -D+, 0). Either choice keeps the full update
// nondecreasing in every neighbor value.
double upwind_norm(const GridFunction& u, int flat, bool positive_coeff) {
  const Grid& g = u.grid();
  const double h = g.h();
  auto axis = [&](double up, double u0, double um) {
    double dp = (up - u0) / h, dm = (u0 - um) / h;
    return positive_coeff ? std::max({dp, -dm, 0.0}) : std::max({dm, -dp, 0.0});
  };
  if (g.dim() == 1) {
    double v = axis(u[g.index(flat + 1)], u[flat], u[g.index(flat - 1)]);
    return std::abs(v);
  }
  int i = flat % g.nodes(), j = flat / g.nodes();
  double vx = axis(u[g.index(i + 1, j)], u[flat], u[g.index(i - 1, j)]);
  double vy = axis(u[g.index(i, j + 1)], u[flat], u[g.index(i, j - 1)]);
  return std::sqrt(vx * vx + vy * vy);
}

GridFunction isaacs_substep(const GridFunction& u, const FSpec& f, double dt) {
  const Grid& g = u.grid();
  GridFunction out(g);
  for (int flat = 0; flat < g.size(); ++flat) {
    Vec x = g.point(flat);
    double lap = second_differences(u, flat);
    double inf_val = std::numeric_limits<double>::infinity();
    for (const auto& inner : f.families()) {
      double sup_val = -std::numeric_limits<double>::infinity();
      for (const auto& term : inner) {
        double sg = term.sigma(x);
        double bc = term.b_coeff(x);
        double rate = sg * sg * lap + term.b0;
        if (bc != 0.0) rate += bc * upwind_norm(u, flat, bc > 0);
        // Branch selection compares the stepped values themselves, so the
        // node update stays a min/max of monotone maps.
        sup_val = std::max(sup_val, zeroth_order_update(u[flat], rate, term.c(x), dt));
      }
      inf_val = std::min(inf_val, sup_val);
    }
    out[flat] = inf_val;
  }
  return out;
}

}  // namespace

GridFunction step_F(const GridFunction& u, const FSpec& f, double dt,
                    const SchemeOptions& opt, long* substeps_used) {
  if (dt < 0) throw std::invalid_argument("step_F: negative dt");
  GridFunction cur = u;
  if (dt == 0 || f.kind() == FSpec::Kind::zero) {
    cur.time_stamp = u.time_stamp + dt;
    if (substeps_used) *substeps_used = 0;
    return cur;
  }
  const Grid& g = u.grid();
  const double h = g.h();
  double diff_rate;
  if (f.kind() == FSpec::Kind::linear_diffusion) {
    const Mat& a = f.diffusion_matrix();
    double sum = 0.0;
    for (int i = 0; i < a.rows(); ++i) sum += a(i, i);
    if (a.rows() == 2) sum += std::abs(a(0, 1));
    diff_rate = 2.0 * sum / (h * h);
  } else {
    diff_rate = 2.0 * g.dim() * f.max_diffusion() / (h * h);
  }
  double rate = diff_rate + g.dim() * f.max_drift() / h + f.lip_r();
  double allowed = (rate > 0) ? 0.5 * opt.cfl_safety / rate
                              : std::numeric_limits<double>::infinity();
  long n = checked_substep_count(dt, allowed, opt.max_substeps);
  double sub = dt / n;
  for (long k = 0; k < n; ++k)
    cur = (f.kind() == FSpec::Kind::linear_diffusion) ? diffusion_substep(cur, f, sub)
                                                      : isaacs_substep(cur, f, sub);
  cur.time_stamp = u.time_stamp + dt;
  if (substeps_used) *substeps_used = n;
  return cur;
}

std::vector<double> time_partition(const PathSignal& xi, double T, double dt_max) {
  if (!(T >= 0)) throw std::invalid_argument("time_partition: negative horizon");
  if (!(dt_max > 0)) throw std::invalid_argument("time_partition: dt_max must be positive");
  std::vector<double> anchors{0.0};
  for (double b : xi.times())
    if (b > 1e-15 && b < T - 1e-15) anchors.push_back(b);
  anchors.push_back(T);
  std::vector<double> out;
  for (size_t k = 0; k + 1 < anchors.size(); ++k) {
    double a = anchors[k], b = anchors[k + 1];
    int parts = std::max(1, static_cast<int>(std::ceil((b - a) / dt_max - 1e-12)));
    for (int j = 0; j < parts; ++j) out.push_back(a + (b - a) * j / parts);
  }
  out.push_back(T);
  return out;
}

SolveResult solve(const GridFunction& u0, const MetricField& m, const FSpec& f,
                  const PathSignal& xi, double T, const SchemeOptions& opt) {
  std::vector<double> part = time_partition(xi, T, opt.dt_max);
  SolveResult res{u0, {}, {}};
  res.state.time_stamp = 0.0;
  long substep_budget_used = 0;
  for (size_t k = 0; k + 1 < part.size(); ++k) {
    double t0 = part[k], t1 = part[k + 1], dt = t1 - t0;
    double xd = xi.slope(0.5 * (t0 + t1));
    SchemeOptions sub = opt;
    sub.max_substeps = opt.max_substeps - substep_budget_used;
    SliceInfo info;
    GridFunction after_f = step_F(res.state, f, dt, sub, &info.substeps_f);
    GridFunction after_h = step_hamiltonian(after_f, m, xd, dt, sub, &info.substeps_h);
    substep_budget_used += info.substeps_f + info.substeps_h;
    after_h.time_stamp = t1;
    info.t0 = t0;
    info.t1 = t1;
    info.xi_dot = xd;
    info.sup_norm = after_h.sup_norm();
    info.lipschitz = after_h.lipschitz_estimate();
    res.slices.push_back(info);
    res.state = std::move(after_h);
    if (opt.snapshot_stride > 0 && ((k + 1) % opt.snapshot_stride == 0) && k + 2 < part.size())
      res.snapshots.push_back(res.state);
  }
  res.snapshots.push_back(res.state);
  return res;
}

GridFunction hopf_lax_flat(const GridFunction& u0, double s) {
  if (s < 0) throw std::invalid_argument("hopf_lax_flat: negative time");
  const Grid& g = u0.grid();
  GridFunction out(g);
  out.time_stamp = u0.time_stamp + s;
  if (s == 0) {
    for (int i = 0; i < g.size(); ++i) out[i] = u0[i];
    return out;
  }
  for (int i = 0; i < g.size(); ++i) {
    Vec x = g.point(i);
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.size(); ++j) {
      double d = g.periodic_distance(x, g.point(j));
      best = std::max(best, u0[j] - d * d / (4.0 * s));
    }
    out[i] = best;
  }
  return out;
}

}  // namespace phj
