#include "phj/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "phj/errors.hpp"

namespace phj {

namespace {

struct PackedState {
  Vec x, p;
  Mat alpha, beta;
  bool with_tangent = false;

  PackedState scaled_add(double c, const PackedState& d) const {
    PackedState out = *this;
    out.x += c * d.x;
    out.p += c * d.p;
    if (with_tangent) {
      out.alpha += c * d.alpha;
      out.beta += c * d.beta;
    }
    return out;
  }
};

PackedState derivative(const MetricField& m, const PackedState& s) {
  PackedState d;
  d.with_tangent = s.with_tangent;
  const Mat ginv = m.g_inv(s.x);
  d.x = 2.0 * ginv * s.p;
  d.p = -m.hamiltonian_x_grad(s.x, s.p);
  if (s.with_tangent) {
    const Mat a = m.dginv_contract(s.x, s.p);
    const Mat w = m.d2ginv_quad(s.x, s.p);
    d.alpha = 2.0 * a * s.alpha + 2.0 * ginv * s.beta;
    d.beta = -w * s.alpha - 2.0 * a.transpose() * s.beta;
  }
  return d;
}

PackedState integrate(const MetricField& m, const Vec& x, const Vec& p,
                      const FlowOptions& opts, bool with_tangent,
                      double* drift_out) {
  const int n = m.dim();
  PackedState s;
  s.with_tangent = with_tangent;
  s.x = x;
  s.p = p;
  if (with_tangent) {
    s.alpha = Mat::Zero(n, n);
    s.beta = Mat::Identity(n, n);
  }
  const double h0 = hamiltonian(m, x, p);
  double drift = 0.0;
  const double dt = 1.0 / opts.steps;
  for (int k = 0; k < opts.steps; ++k) {
    const PackedState k1 = derivative(m, s);
    const PackedState k2 = derivative(m, s.scaled_add(0.5 * dt, k1));
    const PackedState k3 = derivative(m, s.scaled_add(0.5 * dt, k2));
    const PackedState k4 = derivative(m, s.scaled_add(dt, k3));
    s.x += (dt / 6.0) * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.p += (dt / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    if (with_tangent) {
      s.alpha += (dt / 6.0) * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha);
      s.beta += (dt / 6.0) * (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta);
    }
    drift = std::max(drift, std::abs(hamiltonian(m, s.x, s.p) - h0));
  }
  if (drift_out) *drift_out = drift;
  if (opts.check_drift) {
    const double budget = opts.drift_scale * (1.0 + p.squaredNorm());
    if (drift > budget) throw DriftExceeded(drift, budget);
  }
  return s;
}

bool nearly_equal_points(const Vec& x, const Vec& y) {
  return (x - y).norm() <= 1e-14 * (1.0 + x.norm() + y.norm());
}

ShootingResult degenerate_result(const MetricField& m, const Vec& x) {
  const int n = m.dim();
  ShootingResult r;
  r.p0 = Vec::Zero(n);
  r.p1 = Vec::Zero(n);
  r.energy = 0.0;
  r.drift = 0.0;
  r.iterations = 0;
  r.alpha1 = 2.0 * m.g_inv(x);  // exact limit of the tangent flow at p = 0
  r.beta1 = Mat::Identity(n, n);
  return r;
}

}  // namespace

FlowState geodesic_flow(const MetricField& m, const Vec& x, const Vec& p,
                        const FlowOptions& opts) {
  FlowState out;
  const PackedState s = integrate(m, x, p, opts, false, &out.drift);
  out.x1 = s.x;
  out.p1 = s.p;
  return out;
}

TangentState tangent_flow(const MetricField& m, const Vec& x, const Vec& p,
                          const FlowOptions& opts) {
  TangentState out;
  const PackedState s = integrate(m, x, p, opts, true, &out.base.drift);
  out.base.x1 = s.x;
  out.base.p1 = s.p;
  out.alpha1 = s.alpha;
  out.beta1 = s.beta;
  return out;
}

Vec endpoint_map(const MetricField& m, const Vec& x, const Vec& p,
                 const FlowOptions& opts) {
  return geodesic_flow(m, x, p, opts).x1;
}

ShootingResult invert_endpoint(const MetricField& m, const Vec& x, const Vec& y,
                               const ShootingOptions& opts) {
  if (nearly_equal_points(x, y)) return degenerate_result(m, x);

  const double tol = opts.tol_scale * (1.0 + (x - y).norm());
  Vec p = opts.initial_p ? *opts.initial_p : Vec(0.5 * m.g(x) * (y - x));

  FlowOptions quiet = opts.flow;
  quiet.check_drift = false;  // candidates may be wild; the accepted p is checked

  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    TangentState t = tangent_flow(m, x, p, quiet);
    residual = (t.base.x1 - y).norm();
    if (residual <= tol) {
      if (opts.flow.check_drift) {
        const double budget = opts.flow.drift_scale * (1.0 + p.squaredNorm());
        if (t.base.drift > budget) throw DriftExceeded(t.base.drift, budget);
      }
      ShootingResult r;
      r.p0 = p;
      r.p1 = t.base.p1;
      r.energy = hamiltonian(m, x, p);
      r.drift = t.base.drift;
      r.iterations = it;
      r.alpha1 = t.alpha1;
      r.beta1 = t.beta1;
      return r;
    }

    Eigen::FullPivLU<Mat> lu(t.alpha1);
    if (!lu.isInvertible())
      throw SingularTangent("endpoint derivative singular during shooting");
    const Vec full_step = lu.solve(t.base.x1 - y);

    // Damped update: halve until the endpoint residual improves.
    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Vec cand = p - scale * full_step;
      const double cand_res = (geodesic_flow(m, x, cand, quiet).x1 - y).norm();
      if (cand_res < residual) {
        p = cand;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) throw NoConvergence(it + 1, residual);
  }
  throw NoConvergence(opts.max_iterations, residual);
}

double energy(const MetricField& m, const Vec& x, const Vec& y,
              const ShootingOptions& opts) {
  return invert_endpoint(m, x, y, opts).energy;
}

double distance(const MetricField& m, const Vec& x, const Vec& y,
                const ShootingOptions& opts) {
  return std::sqrt(std::max(0.0, energy(m, x, y, opts)));
}

EnergyGradients grad_energy(const MetricField& m, const Vec& x, const Vec& y,
                            const ShootingOptions& opts) {
  const ShootingResult r = invert_endpoint(m, x, y, opts);
  return {r.energy, -r.p0, r.p1};
}

Mat hessian_energy(const MetricField& m, const Vec& x, const Vec& y,
                   const ShootingOptions& opts, double* mixed_discrepancy) {
  const int n = m.dim();
  if (nearly_equal_points(x, y)) {
    const Mat b = 0.5 * m.g(x);
    Mat h(2 * n, 2 * n);
    h.topLeftCorner(n, n) = b;
    h.topRightCorner(n, n) = -b;
    h.bottomLeftCorner(n, n) = -b;
    h.bottomRightCorner(n, n) = b;
    if (mixed_discrepancy) *mixed_discrepancy = 0.0;
    return h;
  }

  const ShootingResult base = invert_endpoint(m, x, y, opts);
  const double h = 1e-4 * (1.0 + (x - y).norm());

  ShootingOptions warm = opts;
  warm.initial_p = base.p0;
  auto grads = [&](const Vec& xx, const Vec& yy) {
    return grad_energy(m, xx, yy, warm);
  };

  Mat hess(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = h;
    {
      const EnergyGradients gp = grads(x + e, y), gm = grads(x - e, y);
      hess.col(j).head(n) = (gp.dx - gm.dx) / (2 * h);
      hess.col(j).tail(n) = (gp.dy - gm.dy) / (2 * h);
    }
    {
      const EnergyGradients gp = grads(x, y + e), gm = grads(x, y - e);
      hess.col(n + j).head(n) = (gp.dx - gm.dx) / (2 * h);
      hess.col(n + j).tail(n) = (gp.dy - gm.dy) / (2 * h);
    }
  }
  hess = sym(hess);

  if (mixed_discrepancy) {
    const Mat exact_mixed = -base.alpha1.inverse();
    *mixed_discrepancy = (hess.topRightCorner(n, n) - exact_mixed).norm();
  }
  return hess;
}

EikonalReport verify_eikonal(const MetricField& m, const Vec& x, const Vec& y,
                             const ShootingOptions& opts) {
  const ShootingResult r = invert_endpoint(m, x, y, opts);
  const Vec dx = -r.p0, dy = r.p1;
  EikonalReport rep;
  rep.energy = r.energy;
  rep.resid_x = std::abs(dx.dot(m.g_inv(x) * dx) - r.energy);
  rep.resid_y = std::abs(dy.dot(m.g_inv(y) * dy) - r.energy);
  return rep;
}

GeometryReport probe_injectivity(const MetricField& m, int sample_count,
                                 const std::vector<double>& radius_grid,
                                 std::uint64_t seed, const ShootingOptions& opts) {
  const int n = m.dim();
  GeometryReport rep;
  rep.dim = n;
  rep.family = m.family();
  rep.ellipticity_c = m.ellipticity_c();
  rep.c2_bound = m.c2_bound();
  rep.upsilon_formula = std::pow(rep.c2_bound, -4.0) / rep.ellipticity_c;

  std::vector<double> grid = radius_grid;
  std::sort(grid.begin(), grid.end());
  RandomStream rng(seed);

  bool all_ok_so_far = true;
  std::vector<std::pair<Vec, Vec>> converged_pairs;
  for (double r : grid) {
    RadiusStats st;
    st.radius = r;
    bool radius_ok = true;
    for (int s = 0; s < sample_count; ++s) {
      Vec x(n);
      for (int d = 0; d < n; ++d)
        x[d] = rng.uniform(m.box_lo()[d], m.box_hi()[d]);
      // |x - y| = 2 r / c guarantees d_g(x, y) <= r.
      const double sep = (2.0 * r / rep.ellipticity_c) * rng.uniform(0.5, 1.0);
      const Vec y = x + sep * rng.unit_vec(n);
      ++st.attempted;
      try {
        const ShootingResult res = invert_endpoint(m, x, y, opts);
        ++st.converged;
        rep.max_drift = std::max(rep.max_drift, res.drift);
        const double ratio = (-res.p0 + res.p1).norm() / (x - y).squaredNorm();
        st.max_gradsum_ratio = std::max(st.max_gradsum_ratio, ratio);
        rep.gradsum_bound = std::max(rep.gradsum_bound, ratio);
        if (converged_pairs.size() < 32) converged_pairs.emplace_back(x, y);
      } catch (const Error&) {
        radius_ok = false;
      }
    }
    rep.radii.push_back(st);
    if (radius_ok && all_ok_so_far)
      rep.upsilon_estimate = r;
    else
      all_ok_so_far = false;
  }

  // Hessian quadratic-form constant on a subset of converged pairs.
  for (const auto& [x, y] : converged_pairs) {
    const Mat h = hessian_energy(m, x, y, opts);
    for (int trial = 0; trial < 8; ++trial) {
      Vec pq = rng.normal_vec(2 * n);
      const double form = pq.dot(h * pq);
      if (form <= 0.0) continue;
      const Vec p = pq.head(n), q = pq.tail(n);
      const double denom = (p - q).squaredNorm() +
                           (x - y).squaredNorm() * (p.squaredNorm() + q.squaredNorm());
      if (denom > 1e-14)
        rep.hessian_bound = std::max(rep.hessian_bound, form / denom);
    }
  }
  return rep;
}

}  // namespace phj
