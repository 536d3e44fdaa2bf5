#include <doctest.h>

#include <cmath>

#include "phj/metric.hpp"
#include "phj/rng.hpp"

using namespace phj;

namespace {

MetricField conformal2() {
  MetricField m = MetricField::conformal(ScalarField::sine(0.2, (Vec(2) << 1.0, 0.0).finished()));
  m.set_domain_box(Vec::Constant(2, -0.5), Vec::Constant(2, 0.5));
  return m;
}

MetricField diagonal2() {
  std::vector<ScalarField> phis{
      ScalarField::sine(0.15, (Vec(2) << 2.0, 1.0).finished(), 0.3),
      ScalarField::sine(0.1, (Vec(2) << 0.0, 3.0).finished())};
  MetricField m = MetricField::diagonal(phis);
  m.set_domain_box(Vec::Constant(2, -0.5), Vec::Constant(2, 0.5));
  return m;
}

Mat fd_dg_slice(const MetricField& m, const Vec& x, int k, double h) {
  Vec xp = x, xm = x;
  xp[k] += h;
  xm[k] -= h;
  return (m.g(xp) - m.g(xm)) / (2.0 * h);
}

Mat fd_dginv_slice(const MetricField& m, const Vec& x, int k, double h) {
  Vec xp = x, xm = x;
  xp[k] += h;
  xm[k] -= h;
  return (m.g_inv(xp) - m.g_inv(xm)) / (2.0 * h);
}

}  // namespace

TEST_CASE("metric families: g g_inv = I at random points") {
  RandomStream rng(11);
  Mat a(2, 2);
  a << 2.0, 0.3, 0.3, 1.5;
  std::vector<MetricField> fields;
  fields.push_back(MetricField::identity(2));
  fields.push_back(MetricField::constant(a));
  fields.push_back(conformal2());
  fields.push_back(diagonal2());
  for (const MetricField& m : fields)
    for (int s = 0; s < 20; ++s) {
      Vec x = rng.uniform_vec(m.dim(), -0.5, 0.5);
      CHECK((m.g(x) * m.g_inv(x) - Mat::Identity(2, 2)).norm() < 1e-13);
    }
}

TEST_CASE("metric derivatives match central differences") {
  RandomStream rng(12);
  const double h = 1e-5;
  for (const MetricField& m : {conformal2(), diagonal2()}) {
    for (int s = 0; s < 10; ++s) {
      Vec x = rng.uniform_vec(2, -0.5, 0.5);
      Tensor3 dg = m.dg(x);
      Tensor3 dginv = m.dg_inv(x);
      for (int k = 0; k < 2; ++k) {
        CHECK((dg[k] - fd_dg_slice(m, x, k, h)).norm() < 1e-8);
        CHECK((dginv[k] - fd_dginv_slice(m, x, k, h)).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("contractions agree with naive tensor sums") {
  RandomStream rng(13);
  MetricField m = diagonal2();
  for (int s = 0; s < 10; ++s) {
    Vec x = rng.uniform_vec(2, -0.5, 0.5);
    Vec p = rng.normal_vec(2);
    Tensor3 dginv = m.dg_inv(x);

    Mat contract(2, 2);
    Vec hx = Vec::Zero(2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double acc = 0.0;
        for (int c = 0; c < 2; ++c) acc += dginv[b](a, c) * p[c];
        contract(a, b) = acc;
      }
    for (int k = 0; k < 2; ++k) hx[k] = p.dot(dginv[k] * p);

    CHECK((m.dginv_contract(x, p) - contract).norm() < 1e-12);
    CHECK((m.hamiltonian_x_grad(x, p) - hx).norm() < 1e-12);

    // second derivative of the inverse metric against differences of the first
    const double h = 1e-5;
    Mat d2 = m.d2ginv_quad(x, p);
    for (int k = 0; k < 2; ++k)
      for (int b = 0; b < 2; ++b) {
        Vec xp = x, xm = x;
        xp[b] += h;
        xm[b] -= h;
        const double fd =
            (p.dot(m.dg_inv(xp)[k] * p) - p.dot(m.dg_inv(xm)[k] * p)) / (2.0 * h);
        CHECK(d2(k, b) == doctest::Approx(fd).epsilon(1e-6));
      }
  }
}

TEST_CASE("ellipticity constant sandwiches the quadratic form") {
  RandomStream rng(14);
  for (const MetricField& m : {conformal2(), diagonal2()}) {
    const double c = m.ellipticity_c();
    CHECK(c >= 1.0);
    for (int s = 0; s < 50; ++s) {
      Vec x = rng.uniform_vec(2, -0.5, 0.5);
      Vec w = rng.unit_vec(2);
      const double q = w.dot(m.g(x) * w);
      CHECK(q >= 1.0 / (c * c) - 1e-12);
      CHECK(q <= c * c + 1e-12);
    }
  }
  CHECK(MetricField::identity(1).ellipticity_c() == doctest::Approx(1.0));
}

TEST_CASE("christoffel matches finite differences of the metric") {
  // Gamma^k_ij = sum_l g^{kl} (d_i g_lj + d_j g_li - d_l g_ij), no 1/2.
  MetricField m = conformal2();
  RandomStream rng(15);
  const double h = 1e-5;
  for (int s = 0; s < 5; ++s) {
    Vec x = rng.uniform_vec(2, -0.5, 0.5);
    Mat ginv = m.g_inv(x);
    Tensor3 fd(2);
    for (int k = 0; k < 2; ++k) fd[k] = fd_dg_slice(m, x, k, h);
    Tensor3 gamma = christoffel(m, x);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double acc = 0.0;
          for (int l = 0; l < 2; ++l)
            acc += ginv(k, l) * (fd[i](l, j) + fd[j](l, i) - fd[l](i, j));
          CHECK(gamma[k](i, j) == doctest::Approx(acc).epsilon(1e-6));
        }
  }
}

TEST_CASE("hamiltonian is the inverse-metric quadratic form") {
  MetricField m = diagonal2();
  Vec x = (Vec(2) << 0.1, -0.2).finished();
  Vec p = (Vec(2) << 0.7, -0.4).finished();
  CHECK(hamiltonian(m, x, p) == doctest::Approx(p.dot(m.g_inv(x) * p)).epsilon(1e-14));
}
