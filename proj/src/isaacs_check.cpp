#include "phj/isaacs_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phj/errors.hpp"
#include "phj/rng.hpp"

namespace phj {

IsaacsReport isaacs_condition_check(const FSpec& f, const MetricField& m,
                                    const IsaacsCheckConfig& cfg) {
  const int n = m.dim();
  RandomStream rng(cfg.seed);
  const Vec lo = m.box_lo(), hi = m.box_hi();
  const double c = m.ellipticity_c();

  IsaacsReport rep;
  rep.worst_raw = -std::numeric_limits<double>::infinity();
  rep.validity_min = std::numeric_limits<double>::infinity();
  rep.samples.reserve(cfg.samples);

  const double r_sweep[3] = {-cfg.r_bound, 0.0, cfg.r_bound};

  long attempts = 0;
  while (static_cast<int>(rep.samples.size()) < cfg.samples) {
    if (++attempts > 50L * cfg.samples)
      throw Error("isaacs_condition_check: shooting kept failing; shrink the radius");
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform();
    // d_g <= c |x - y| / 2, so this keeps the pair inside radius.
    double step = (2.0 * cfg.radius / c) * (0.3 + 0.7 * rng.uniform());
    Vec y = x + step * rng.unit_vec(n);

    ShootingResult shot;
    try {
      shot = invert_endpoint(m, x, y, cfg.shooting);
    } catch (const Error&) {
      continue;  // outside the certified region; sample another pair
    }
    Mat A = hessian_energy(m, x, y, cfg.shooting);
    Mat B = cfg.alpha * A + cfg.eps * A * A;
    Mat bxx = B.topLeftCorner(n, n);
    Mat bxy = B.topRightCorner(n, n);
    Mat byy = B.bottomRightCorner(n, n);
    Mat S = sym(bxy);
    Mat X = bxx + S;
    Mat Y = -byy - S;

    Mat resid(2 * n, 2 * n);
    resid.topLeftCorner(n, n) = -S;
    resid.topRightCorner(n, n) = bxy;
    resid.bottomLeftCorner(n, n) = bxy.transpose();
    resid.bottomRightCorner(n, n) = -S;
    Eigen::SelfAdjointEigenSolver<Mat> es(resid);

    Vec dxe = -shot.p0, dye = shot.p1;
    double d = std::sqrt(std::max(0.0, shot.energy));

    IsaacsSample s;
    s.d = d;
    s.s_arg = cfg.alpha * shot.energy + d + cfg.eps;
    s.validity = es.eigenvalues().minCoeff();
    s.diff = -std::numeric_limits<double>::infinity();
    for (double r : r_sweep) {
      double v = f.evaluate(X, cfg.alpha * dxe, r, x) -
                 f.evaluate(Y, -cfg.alpha * dye, r, y);
      s.diff = std::max(s.diff, v);
    }
    rep.samples.push_back(s);
    rep.worst_raw = std::max(rep.worst_raw, s.diff);
    rep.validity_min = std::min(rep.validity_min, s.validity);
  }

  double lip = 0.0, cap = 0.0;
  for (const auto& s : rep.samples)
    if (s.diff > 0) {
      lip = std::max(lip, s.diff / s.s_arg);
      cap = std::max(cap, s.diff);
    }
  rep.fitted_lip = lip;
  rep.fitted_cap = cap;
  Modulus omega = rep.fitted_modulus();
  double excess = -std::numeric_limits<double>::infinity();
  for (const auto& s : rep.samples) excess = std::max(excess, s.diff - omega(s.s_arg));
  rep.worst_excess_after_fit = excess;
  return rep;
}

}  // namespace phj
