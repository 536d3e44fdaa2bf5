#pragma once

#include <vector>

#include "phj/fspec.hpp"
#include "phj/linalg.hpp"
#include "phj/metric.hpp"
#include "phj/modulus.hpp"
#include "phj/shooting.hpp"

namespace phj {

// Structural compatibility probe for an Isaacs-type right-hand side: on
// sampled near-diagonal pairs it builds the doubled Hessian matrices the
// comparison argument produces and measures how far the F-difference exceeds
// a capped-linear modulus of the combined closeness argument.
struct IsaacsCheckConfig {
  int samples = 64;
  double radius = 0.25;    // target geodesic distance scale of the pairs
  double alpha = 2.0;      // quadratic-penalty prefactor
  double eps = 0.5;        // regularization weight on the squared Hessian
  double r_bound = 1.0;    // zeroth-order argument swept over {-R, 0, R}
  unsigned seed = 2026;
  ShootingOptions shooting;
};

struct IsaacsSample {
  double d = 0;          // geodesic distance of the pair
  double s_arg = 0;      // alpha d^2 + d + eps
  double diff = 0;       // worst F difference over the r sweep
  double validity = 0;   // min eigenvalue of B - diag(X, -Y)
};

struct IsaacsReport {
  double worst_raw = 0;           // max diff over all samples
  double fitted_lip = 0;          // slope of the fitted capped-linear modulus
  double fitted_cap = 0;
  double worst_excess_after_fit = 0;  // max(diff - omega_fit(s_arg))
  double validity_min = 0;            // min of per-sample validity margins
  std::vector<IsaacsSample> samples;

  Modulus fitted_modulus() const { return Modulus::capped(fitted_lip, fitted_cap); }
};

IsaacsReport isaacs_condition_check(const FSpec& f, const MetricField& m,
                                    const IsaacsCheckConfig& cfg = IsaacsCheckConfig());

}  // namespace phj
