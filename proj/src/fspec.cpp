#include "phj/fspec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phj {

namespace {
double trig(double base, double amp, const Vec& k, const Vec& x) {
  if (amp == 0.0 || k.size() == 0) return base;
  if (k.size() != x.size()) throw std::invalid_argument("IsaacsTerm: wave vector dimension mismatch");
  return base + amp * std::sin(k.dot(x));
}
}  // namespace

double IsaacsTerm::sigma(const Vec& x) const { return trig(sigma0, sigma1, k_sigma, x); }
double IsaacsTerm::b_coeff(const Vec& x) const {
  if (b1 == 0.0) return 0.0;
  if (k_b.size() != x.size()) throw std::invalid_argument("IsaacsTerm: wave vector dimension mismatch");
  return b1 * std::sin(k_b.dot(x));
}
double IsaacsTerm::c(const Vec& x) const { return trig(c0, c1, k_c, x); }

FSpec FSpec::zero() {
  FSpec f;
  f.kind_ = Kind::zero;
  return f;
}

FSpec FSpec::linear_diffusion(const Mat& a, double nu, double rho) {
  if (a.rows() != a.cols() || a.rows() < 1 || a.rows() > 2)
    throw std::invalid_argument("linear_diffusion: a must be 1x1 or 2x2");
  if (!a.isApprox(a.transpose(), 1e-12))
    throw std::invalid_argument("linear_diffusion: a must be symmetric");
  if (nu < 0) throw std::invalid_argument("linear_diffusion: nu must be nonnegative");
  if (!(rho > 0)) throw std::invalid_argument("linear_diffusion: rho must be positive");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw std::invalid_argument("linear_diffusion: a must be positive semidefinite");
  if (a.rows() == 2 && std::abs(a(0, 1)) > std::min(a(0, 0), a(1, 1)) + 1e-12)
    throw std::invalid_argument("linear_diffusion: need |a12| <= min(a11, a22) for a monotone stencil");
  FSpec f;
  f.kind_ = Kind::linear_diffusion;
  f.a_ = nu * a;
  f.rho_ = rho;
  f.lip_r_ = rho;
  return f;
}

FSpec FSpec::isaacs(std::vector<std::vector<IsaacsTerm>> families, Modulus f_modulus) {
  if (families.empty()) throw std::invalid_argument("isaacs: outer family is empty");
  double rho = std::numeric_limits<double>::infinity();
  double cmax = 0.0;
  for (const auto& inner : families) {
    if (inner.empty()) throw std::invalid_argument("isaacs: inner family is empty");
    for (const auto& t : inner) {
      rho = std::min(rho, t.c0 - std::abs(t.c1));
      cmax = std::max(cmax, std::abs(t.c0) + std::abs(t.c1));
    }
  }
  if (!(rho > 0))
    throw std::invalid_argument("isaacs: need c(x) >= rho > 0 on every branch (c0 - |c1| > 0)");
  FSpec f;
  f.kind_ = Kind::isaacs;
  f.families_ = std::move(families);
  f.rho_ = rho;
  f.lip_r_ = cmax;
  f.f_modulus_ = f_modulus;
  // F(0,0,0,x) = inf_a sup_b b0, independent of x for this family.
  double infsup = std::numeric_limits<double>::infinity();
  for (const auto& inner : f.families_) {
    double s = -std::numeric_limits<double>::infinity();
    for (const auto& t : inner) s = std::max(s, t.b0);
    infsup = std::min(infsup, s);
  }
  f.f_sup_ = std::abs(infsup);
  return f;
}

double FSpec::evaluate(const Mat& M, const Vec& p, double r, const Vec& x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear_diffusion:
      return (a_ * M).trace() - rho_ * r;
    case Kind::isaacs: {
      double infsup = std::numeric_limits<double>::infinity();
      for (const auto& inner : families_) {
        double s = -std::numeric_limits<double>::infinity();
        for (const auto& t : inner) {
          double sg = t.sigma(x);
          double v = sg * sg * M.trace() + t.b0 + t.b_coeff(x) * p.norm() - t.c(x) * r;
          s = std::max(s, v);
        }
        infsup = std::min(infsup, s);
      }
      return infsup;
    }
  }
  return 0.0;
}

double FSpec::max_diffusion() const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::linear_diffusion: {
      double m = 0.0;
      for (int i = 0; i < a_.rows(); ++i) m = std::max(m, a_(i, i));
      if (a_.rows() == 2) m += std::abs(a_(0, 1));
      return m;
    }
    case Kind::isaacs: {
      double m = 0.0;
      for (const auto& inner : families_)
        for (const auto& t : inner) {
          double s = std::abs(t.sigma0) + std::abs(t.sigma1);
          m = std::max(m, s * s);
        }
      return m;
    }
  }
  return 0.0;
}

double FSpec::max_drift() const {
  if (kind_ != Kind::isaacs) return 0.0;
  double m = 0.0;
  for (const auto& inner : families_)
    for (const auto& t : inner) m = std::max(m, std::abs(t.b1));
  return m;
}

}  // namespace phj
