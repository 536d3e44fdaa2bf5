#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "phj/rng.hpp"
#include "phj/shooting.hpp"

using namespace phj;

namespace {

MetricField conformal2() {
  MetricField m = MetricField::conformal(ScalarField::sine(0.2, (Vec(2) << 1.0, 0.0).finished()));
  m.set_domain_box(Vec::Constant(2, -0.5), Vec::Constant(2, 0.5));
  return m;
}

MetricField conformal1() {
  MetricField m = MetricField::conformal(ScalarField::sine(0.25, (Vec(1) << 2.0).finished(), 0.4));
  m.set_domain_box(Vec::Constant(1, -0.5), Vec::Constant(1, 0.5));
  return m;
}

// Richardson pair of discrete-action minimizations; midpoint quadrature has a
// clean dt^2 leading error, so (4 E_2K - E_K) / 3 cancels it.
double oracle_energy(const MetricField& m, const Vec& x, const Vec& y) {
  const double e1 = oracle::minimize_energy(m, x, y, 40).energy;
  const double e2 = oracle::minimize_energy(m, x, y, 80).energy;
  return (4.0 * e2 - e1) / 3.0;
}

}  // namespace

TEST_CASE("flat metric: closed forms are exact") {
  MetricField m = MetricField::identity(2);
  m.set_domain_box(Vec::Constant(2, -0.5), Vec::Constant(2, 0.5));
  Vec x = (Vec(2) << -0.2, 0.1).finished();
  Vec y = (Vec(2) << 0.3, -0.15).finished();

  ShootingResult r = invert_endpoint(m, x, y);
  CHECK(r.energy == doctest::Approx(0.25 * (y - x).squaredNorm()).epsilon(1e-12));
  CHECK((r.p0 - 0.5 * (y - x)).norm() < 1e-12);
  CHECK((r.p1 - 0.5 * (y - x)).norm() < 1e-12);
  CHECK(distance(m, x, y) == doctest::Approx(0.5 * (y - x).norm()).epsilon(1e-12));

  // Hessian of (x, y) -> |x - y|^2 / 4 in block form.
  Mat h = hessian_energy(m, x, y);
  Mat expect(4, 4);
  expect << 0.5, 0, -0.5, 0, 0, 0.5, 0, -0.5, -0.5, 0, 0.5, 0, 0, -0.5, 0, 0.5;
  CHECK((h - expect).norm() < 1e-8);
}

TEST_CASE("curved metrics: energy matches the variational oracle") {
  RandomStream rng(21);
  for (const MetricField& m : {conformal1()}) {
    for (int s = 0; s < 4; ++s) {
      Vec x = rng.uniform_vec(1, -0.4, 0.4);
      Vec y = x + rng.uniform_vec(1, -0.3, 0.3);
      const double lib = energy(m, x, y);
      const double ref = oracle_energy(m, x, y);
      CHECK(lib == doctest::Approx(ref).epsilon(2e-6));
    }
  }
  MetricField m = conformal2();
  for (int s = 0; s < 4; ++s) {
    Vec x = rng.uniform_vec(2, -0.4, 0.4);
    Vec y = x + 0.4 * rng.unit_vec(2);
    const double lib = energy(m, x, y);
    const double ref = oracle_energy(m, x, y);
    CHECK(lib == doctest::Approx(ref).epsilon(2e-6));
  }
}

TEST_CASE("initial covector matches the variational oracle") {
  MetricField m = conformal2();
  RandomStream rng(22);
  for (int s = 0; s < 3; ++s) {
    Vec x = rng.uniform_vec(2, -0.4, 0.4);
    Vec y = x + 0.35 * rng.unit_vec(2);
    ShootingResult r = invert_endpoint(m, x, y);
    oracle::EnergyMinimum ref = oracle::minimize_energy(m, x, y, 120);
    CHECK((r.p0 - ref.p0).norm() < 2e-3 * (1.0 + r.p0.norm()));
  }
}

TEST_CASE("energy gradients: sign convention and finite differences") {
  MetricField m = conformal2();
  Vec x = (Vec(2) << -0.15, 0.2).finished();
  Vec y = (Vec(2) << 0.25, -0.1).finished();

  ShootingResult r = invert_endpoint(m, x, y);
  EnergyGradients g = grad_energy(m, x, y);
  CHECK((g.dx + r.p0).norm() < 1e-12);  // D_x e = -p0
  CHECK((g.dy - r.p1).norm() < 1e-12);  // D_y e =  p1

  const double h = 1e-6;
  for (int k = 0; k < 2; ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const double fd = (energy(m, xp, y) - energy(m, xm, y)) / (2.0 * h);
    CHECK(g.dx[k] == doctest::Approx(fd).epsilon(1e-5));
    Vec yp = y, ym = y;
    yp[k] += h;
    ym[k] -= h;
    const double fdy = (energy(m, x, yp) - energy(m, x, ym)) / (2.0 * h);
    CHECK(g.dy[k] == doctest::Approx(fdy).epsilon(1e-5));
  }
}

TEST_CASE("both eikonal residuals vanish on shot pairs") {
  MetricField m = conformal2();
  RandomStream rng(23);
  for (int s = 0; s < 10; ++s) {
    Vec x = rng.uniform_vec(2, -0.4, 0.4);
    Vec y = x + rng.uniform(0.05, 0.45) * rng.unit_vec(2);
    EikonalReport rep = verify_eikonal(m, x, y);
    CHECK(rep.resid_x <= 1e-8 * (1.0 + rep.energy));
    CHECK(rep.resid_y <= 1e-8 * (1.0 + rep.energy));
  }
}

TEST_CASE("tangent flow differentiates the endpoint map") {
  MetricField m = conformal2();
  Vec x = (Vec(2) << 0.1, -0.05).finished();
  Vec p = (Vec(2) << 0.3, 0.2).finished();
  TangentState t = tangent_flow(m, x, p);
  const double h = 1e-6;
  for (int k = 0; k < 2; ++k) {
    Vec pp = p, pm = p;
    pp[k] += h;
    pm[k] -= h;
    Vec col = (endpoint_map(m, x, pp) - endpoint_map(m, x, pm)) / (2.0 * h);
    CHECK((t.alpha1.col(k) - col).norm() < 1e-8);
  }
}

TEST_CASE("hamiltonian drift stays inside its budget") {
  MetricField m = conformal2();
  RandomStream rng(24);
  for (int s = 0; s < 10; ++s) {
    Vec x = rng.uniform_vec(2, -0.4, 0.4);
    Vec p = rng.normal_vec(2);
    FlowState f = geodesic_flow(m, x, p);
    CHECK(f.drift <= 1e-8 * (1.0 + p.squaredNorm()));
  }
}

TEST_CASE("injectivity probe: identity metric certifies with tiny constants") {
  MetricField m = MetricField::identity(2);
  m.set_domain_box(Vec::Constant(2, -0.5), Vec::Constant(2, 0.5));
  GeometryReport rep = probe_injectivity(m, 30, {0.25, 0.5, 1.0}, 5);
  CHECK(rep.upsilon_estimate == doctest::Approx(1.0));
  CHECK(rep.gradsum_bound <= 1e-10);
  CHECK(rep.max_drift <= 1e-10);
  for (const RadiusStats& r : rep.radii) CHECK(r.converged == r.attempted);
}

TEST_CASE("mixed hessian block agrees with the tangent-flow formula") {
  MetricField m = conformal2();
  Vec x = (Vec(2) << -0.1, 0.15).finished();
  Vec y = (Vec(2) << 0.3, 0.05).finished();
  double gap = 0.0;
  hessian_energy(m, x, y, {}, &gap);
  CHECK(gap < 1e-6);
}
