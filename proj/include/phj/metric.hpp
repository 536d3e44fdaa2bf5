#pragma once

#include <memory>
#include <string>

#include "phj/linalg.hpp"
#include "phj/scalar_field.hpp"

namespace phj {

// Riemannian metric field g on R^n with analytic derivatives of g and g^{-1}
// up to the orders the characteristic and tangent flows need.
//
// Families:
//   identity               g = I
//   constant(A)            g = A, A symmetric positive definite
//   conformal(phi)         g = exp(2 phi(x)) I
//   diagonal(phi_1..phi_n) g = diag(exp(2 phi_i(x)))
class MetricField {
 public:
  static MetricField identity(int dim);
  static MetricField constant(const Mat& a);
  static MetricField conformal(const ScalarField& phi);
  static MetricField diagonal(const std::vector<ScalarField>& phis);

  int dim() const { return dim_; }
  const std::string& family() const { return family_; }

  Mat g(const Vec& x) const;
  Mat g_inv(const Vec& x) const;

  // dg(x)[k](i,j) = d_k g_ij(x); dg_inv analogous for g^{-1}.
  Tensor3 dg(const Vec& x) const;
  Tensor3 dg_inv(const Vec& x) const;

  // Contractions used by the flows, returned directly to avoid rank-3/4
  // temporaries in inner loops:
  //   dginv_contract(x,p)(a,b)  = sum_c d_b g^{ac}(x) p_c
  //   hamiltonian_x_grad(x,p)_k = sum_ij d_k g^{ij}(x) p_i p_j
  //   d2ginv_quad(x,p)(k,b)     = sum_ij d_k d_b g^{ij}(x) p_i p_j
  Mat dginv_contract(const Vec& x, const Vec& p) const;
  Vec hamiltonian_x_grad(const Vec& x, const Vec& p) const;
  Mat d2ginv_quad(const Vec& x, const Vec& p) const;

  // Equivalence constant c >= 1 with |w|^2 / c^2 <= (g(x)w, w) <= c^2 |w|^2.
  // Exact for constant and pure-trigonometric coefficient fields; estimated by
  // sampling over the domain box when a field has a linear part.
  double ellipticity_c() const;

  // Coarse 1 + |g|_{C^2} + |g^{-1}|_{C^2} estimate over the domain box
  // (reporting constant, not used in any computation).
  double c2_bound() const;

  // Box used for sampling-based estimates and probe draws.
  void set_domain_box(const Vec& lo, const Vec& hi);
  const Vec& box_lo() const { return box_lo_; }
  const Vec& box_hi() const { return box_hi_; }

 private:
  explicit MetricField(int dim);

  std::string family_;
  int dim_;
  Mat const_g_, const_ginv_;         // constant family
  ScalarField phi_;                  // conformal family
  std::vector<ScalarField> diag_;    // diagonal family
  Vec box_lo_, box_hi_;
};

// Christoffel array per the convention used throughout this code base:
//   Gamma^k_ij = sum_l g^{kl} (d_i g_lj + d_j g_li - d_l g_ij)
// (no 1/2 factor). Symmetric in (i, j). Returned as Tensor3 indexed by k.
Tensor3 christoffel(const MetricField& m, const Vec& x);

// H(x, p) = (g^{-1}(x) p, p).
double hamiltonian(const MetricField& m, const Vec& x, const Vec& p);

}  // namespace phj
