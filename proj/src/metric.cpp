#include "phj/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace phj {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

MetricField::MetricField(int dim)
    : dim_(dim),
      phi_(ScalarField::zero(dim)),
      box_lo_(Vec::Zero(dim)),
      box_hi_(Vec::Constant(dim, kTwoPi)) {}

MetricField MetricField::identity(int dim) {
  MetricField m(dim);
  m.family_ = "identity";
  return m;
}

MetricField MetricField::constant(const Mat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("metric matrix not square");
  if ((a - a.transpose()).norm() > 1e-12 * (1.0 + a.norm()))
    throw std::invalid_argument("metric matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("metric matrix not positive definite");
  MetricField m(static_cast<int>(a.rows()));
  m.family_ = "constant";
  m.const_g_ = a;
  m.const_ginv_ = a.inverse();
  return m;
}

MetricField MetricField::conformal(const ScalarField& phi) {
  MetricField m(phi.dim());
  m.family_ = "conformal";
  m.phi_ = phi;
  return m;
}

MetricField MetricField::diagonal(const std::vector<ScalarField>& phis) {
  if (phis.empty()) throw std::invalid_argument("diagonal metric needs fields");
  MetricField m(static_cast<int>(phis.size()));
  for (const auto& f : phis)
    if (f.dim() != m.dim_) throw std::invalid_argument("diagonal field dim mismatch");
  m.family_ = "diagonal";
  m.diag_ = phis;
  return m;
}

Mat MetricField::g(const Vec& x) const {
  if (family_ == "identity") return Mat::Identity(dim_, dim_);
  if (family_ == "constant") return const_g_;
  if (family_ == "conformal")
    return std::exp(2.0 * phi_.value(x)) * Mat::Identity(dim_, dim_);
  Mat out = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) out(i, i) = std::exp(2.0 * diag_[i].value(x));
  return out;
}

Mat MetricField::g_inv(const Vec& x) const {
  if (family_ == "identity") return Mat::Identity(dim_, dim_);
  if (family_ == "constant") return const_ginv_;
  if (family_ == "conformal")
    return std::exp(-2.0 * phi_.value(x)) * Mat::Identity(dim_, dim_);
  Mat out = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) out(i, i) = std::exp(-2.0 * diag_[i].value(x));
  return out;
}

Tensor3 MetricField::dg(const Vec& x) const {
  Tensor3 out(dim_, Mat::Zero(dim_, dim_));
  if (family_ == "identity" || family_ == "constant") return out;
  if (family_ == "conformal") {
    const double e2 = std::exp(2.0 * phi_.value(x));
    const Vec gr = phi_.grad(x);
    for (int k = 0; k < dim_; ++k)
      out[k] = 2.0 * gr[k] * e2 * Mat::Identity(dim_, dim_);
    return out;
  }
  for (int i = 0; i < dim_; ++i) {
    const double e2 = std::exp(2.0 * diag_[i].value(x));
    const Vec gr = diag_[i].grad(x);
    for (int k = 0; k < dim_; ++k) out[k](i, i) = 2.0 * gr[k] * e2;
  }
  return out;
}

Tensor3 MetricField::dg_inv(const Vec& x) const {
  Tensor3 out(dim_, Mat::Zero(dim_, dim_));
  if (family_ == "identity" || family_ == "constant") return out;
  if (family_ == "conformal") {
    const double e2 = std::exp(-2.0 * phi_.value(x));
    const Vec gr = phi_.grad(x);
    for (int k = 0; k < dim_; ++k)
      out[k] = -2.0 * gr[k] * e2 * Mat::Identity(dim_, dim_);
    return out;
  }
  for (int i = 0; i < dim_; ++i) {
    const double e2 = std::exp(-2.0 * diag_[i].value(x));
    const Vec gr = diag_[i].grad(x);
    for (int k = 0; k < dim_; ++k) out[k](i, i) = -2.0 * gr[k] * e2;
  }
  return out;
}

Mat MetricField::dginv_contract(const Vec& x, const Vec& p) const {
  Mat a = Mat::Zero(dim_, dim_);
  if (family_ == "identity" || family_ == "constant") return a;
  if (family_ == "conformal") {
    const double e2 = std::exp(-2.0 * phi_.value(x));
    const Vec gr = phi_.grad(x);
    return -2.0 * e2 * p * gr.transpose();
  }
  for (int i = 0; i < dim_; ++i) {
    const double e2 = std::exp(-2.0 * diag_[i].value(x));
    const Vec gr = diag_[i].grad(x);
    for (int b = 0; b < dim_; ++b) a(i, b) = -2.0 * gr[b] * e2 * p[i];
  }
  return a;
}

Vec MetricField::hamiltonian_x_grad(const Vec& x, const Vec& p) const {
  Vec out = Vec::Zero(dim_);
  if (family_ == "identity" || family_ == "constant") return out;
  if (family_ == "conformal") {
    const double e2 = std::exp(-2.0 * phi_.value(x));
    return -2.0 * e2 * p.squaredNorm() * phi_.grad(x);
  }
  for (int i = 0; i < dim_; ++i) {
    const double e2 = std::exp(-2.0 * diag_[i].value(x));
    out -= 2.0 * e2 * p[i] * p[i] * diag_[i].grad(x);
  }
  return out;
}

Mat MetricField::d2ginv_quad(const Vec& x, const Vec& p) const {
  Mat w = Mat::Zero(dim_, dim_);
  if (family_ == "identity" || family_ == "constant") return w;
  if (family_ == "conformal") {
    const double e2 = std::exp(-2.0 * phi_.value(x));
    const Vec gr = phi_.grad(x);
    const Mat h = phi_.hess(x);
    return (4.0 * gr * gr.transpose() - 2.0 * h) * e2 * p.squaredNorm();
  }
  for (int i = 0; i < dim_; ++i) {
    const double e2 = std::exp(-2.0 * diag_[i].value(x));
    const Vec gr = diag_[i].grad(x);
    const Mat h = diag_[i].hess(x);
    w += (4.0 * gr * gr.transpose() - 2.0 * h) * e2 * p[i] * p[i];
  }
  return w;
}

double MetricField::ellipticity_c() const {
  if (family_ == "identity") return 1.0;
  if (family_ == "constant") {
    Eigen::SelfAdjointEigenSolver<Mat> es(const_g_);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(hi, 1.0 / lo));
  }
  auto field_sup = [&](const ScalarField& f) {
    if (!f.has_linear()) return f.sup_abs();
    // Linear part makes the field unbounded on R^n; fall back to the box.
    double s = 0.0;
    const int m = 33;
    for (int k = 0; k < (dim_ == 1 ? m : m * m); ++k) {
      Vec x(dim_);
      x[0] = box_lo_[0] + (box_hi_[0] - box_lo_[0]) * (k % m) / (m - 1);
      if (dim_ > 1)
        x[1] = box_lo_[1] + (box_hi_[1] - box_lo_[1]) * (k / m) / (m - 1);
      for (int d = 2; d < dim_; ++d) x[d] = 0.5 * (box_lo_[d] + box_hi_[d]);
      s = std::max(s, std::abs(f.value(x)));
    }
    return s;
  };
  double sup = 0.0;
  if (family_ == "conformal") sup = field_sup(phi_);
  else
    for (const auto& f : diag_) sup = std::max(sup, field_sup(f));
  return std::exp(sup);  // c = e^{sup|phi|}, so c^2 = e^{2 sup|phi|}
}

double MetricField::c2_bound() const {
  // Sampled sup of |g| + |Dg| + |D2g| (Frobenius norms, D2g by central
  // differences of the analytic Dg) plus the same for g^{-1}.
  const int samples = 64;
  const double h = 1e-5;
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec x(dim_);
    for (int d = 0; d < dim_; ++d) {
      const double t = (s * (d + 1) * 2654435761u % 97) / 96.0;
      x[d] = box_lo_[d] + (box_hi_[d] - box_lo_[d]) * t;
    }
    double tot = 0.0;
    tot += g(x).norm() + g_inv(x).norm();
    double d1 = 0.0, d2 = 0.0;
    const Tensor3 dgx = dg(x), dgi = dg_inv(x);
    for (int k = 0; k < dim_; ++k) d1 += dgx[k].norm() + dgi[k].norm();
    for (int k = 0; k < dim_; ++k) {
      Vec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const Tensor3 dp = dg(xp), dm = dg(xm), ip = dg_inv(xp), im = dg_inv(xm);
      for (int l = 0; l < dim_; ++l)
        d2 += ((dp[l] - dm[l]) / (2 * h)).norm() + ((ip[l] - im[l]) / (2 * h)).norm();
    }
    best = std::max(best, tot + d1 + d2);
  }
  return 1.0 + best;
}

void MetricField::set_domain_box(const Vec& lo, const Vec& hi) {
  if (lo.size() != dim_ || hi.size() != dim_)
    throw std::invalid_argument("domain box dim mismatch");
  box_lo_ = lo;
  box_hi_ = hi;
}

Tensor3 christoffel(const MetricField& m, const Vec& x) {
  const int n = m.dim();
  const Mat ginv = m.g_inv(x);
  const Tensor3 d = m.dg(x);
  Tensor3 out(n, Mat::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (d[i](l, j) + d[j](l, i) - d[l](i, j));
        out[k](i, j) = s;
      }
  return out;
}

double hamiltonian(const MetricField& m, const Vec& x, const Vec& p) {
  return p.dot(m.g_inv(x) * p);
}

}  // namespace phj
