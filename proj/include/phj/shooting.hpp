#pragma once

#include <optional>
#include <vector>

#include "phj/metric.hpp"
#include "phj/rng.hpp"

namespace phj {

// The characteristic flow on [0, 1]:
//   X' = 2 g^{-1}(X) P,   X(0) = x
//   P' = -(d g^{-1}(X) P, P) componentwise in the derivative index, P(0) = p
// H(X, P) is conserved along exact trajectories; the integrator tracks the
// worst deviation at step ends ("drift") as its correctness certificate.

struct FlowOptions {
  int steps = 256;               // fixed RK4 steps on [0, 1]
  double drift_scale = 1e-8;     // budget = drift_scale * (1 + |p|^2)
  bool check_drift = true;
};

struct FlowState {
  Vec x1, p1;
  double drift = 0.0;
};

struct TangentState {
  FlowState base;
  Mat alpha1;  // d X(1) / d p
  Mat beta1;   // d P(1) / d p
};

FlowState geodesic_flow(const MetricField& m, const Vec& x, const Vec& p,
                        const FlowOptions& opts = {});

// Same trajectory plus the linearized flow
//   alpha' = 2 (dg^{-1} P) alpha + 2 g^{-1} beta,          alpha(0) = 0
//   beta'  = -(d2 g^{-1} P, P) alpha - 2 (dg^{-1} P)^T beta, beta(0) = I
TangentState tangent_flow(const MetricField& m, const Vec& x, const Vec& p,
                          const FlowOptions& opts = {});

Vec endpoint_map(const MetricField& m, const Vec& x, const Vec& p,
                 const FlowOptions& opts = {});

struct ShootingOptions {
  FlowOptions flow;
  int max_iterations = 50;
  double tol_scale = 1e-10;      // tol = tol_scale * (1 + |x - y|)
  std::optional<Vec> initial_p;  // warm start (default 0.5 g(x)(y - x))
};

struct ShootingResult {
  Vec p0;          // initial covector with endpoint_map(x, p0) = y
  Vec p1;          // covector at the far end
  double energy;   // H(x, p0) -- the geodesic energy e_g(x, y)
  double drift;
  int iterations;
  Mat alpha1, beta1;
};

// Newton inversion of the endpoint map (damped steps, alpha1 as Jacobian).
ShootingResult invert_endpoint(const MetricField& m, const Vec& x, const Vec& y,
                               const ShootingOptions& opts = {});

double energy(const MetricField& m, const Vec& x, const Vec& y,
              const ShootingOptions& opts = {});
double distance(const MetricField& m, const Vec& x, const Vec& y,
                const ShootingOptions& opts = {});

struct EnergyGradients {
  double energy;
  Vec dx;  // = -p0
  Vec dy;  // = p1
};

EnergyGradients grad_energy(const MetricField& m, const Vec& x, const Vec& y,
                            const ShootingOptions& opts = {});

// 2n x 2n spatial Hessian of (x, y) -> e_g(x, y) by central differences of
// grad_energy, symmetrized. The mixed block has the exact closed form
// -alpha1^{-1}; if mixed_discrepancy is given it receives the Frobenius gap
// between the FD mixed block and that formula.
Mat hessian_energy(const MetricField& m, const Vec& x, const Vec& y,
                   const ShootingOptions& opts = {},
                   double* mixed_discrepancy = nullptr);

struct EikonalReport {
  double energy;
  double resid_x;  // |(g^{-1}(x) D_x e, D_x e) - e|
  double resid_y;  // |(g^{-1}(y) D_y e, D_y e) - e|
};

EikonalReport verify_eikonal(const MetricField& m, const Vec& x, const Vec& y,
                             const ShootingOptions& opts = {});

struct RadiusStats {
  double radius = 0.0;
  int attempted = 0;
  int converged = 0;
  double max_gradsum_ratio = 0.0;  // |D_x e + D_y e| / |x - y|^2
};

struct GeometryReport {
  int dim = 0;
  std::string family;
  double ellipticity_c = 0.0;
  double c2_bound = 0.0;
  double upsilon_estimate = 0.0;  // largest probed radius with full convergence
  double upsilon_formula = 0.0;   // conservative c2_bound^{-4} / c for comparison
  double gradsum_bound = 0.0;     // fitted L with |D_x e + D_y e| <= L |x - y|^2
  double hessian_bound = 0.0;     // fitted L in the Hessian quadratic-form bound
  double max_drift = 0.0;
  std::vector<RadiusStats> radii;
};

// Empirical certification of an injectivity radius: samples pairs with
// d_g(x, y) <= r for each r in radius_grid (ascending) and records whether
// shooting converged everywhere, plus the fitted gradient-sum and Hessian
// constants on the converged samples.
GeometryReport probe_injectivity(const MetricField& m, int sample_count,
                                 const std::vector<double>& radius_grid,
                                 std::uint64_t seed = 1,
                                 const ShootingOptions& opts = {});

}  // namespace phj
