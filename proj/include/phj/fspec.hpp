#pragma once

#include <vector>

#include "phj/linalg.hpp"
#include "phj/modulus.hpp"

namespace phj {

// One Isaacs branch. Coefficients are low-frequency trigonometric fields:
//   sigma(x) = (sigma0 + sigma1 * sin(k_sigma . x)) * I   (diffusion scale)
//   b(p, x)  = b0 + b1 * sin(k_b . x) * |p|
//   c(x)     = c0 + c1 * sin(k_c . x)                     (zeroth order, >= rho)
struct IsaacsTerm {
  double sigma0 = 0.0, sigma1 = 0.0;
  Vec k_sigma;
  double b0 = 0.0, b1 = 0.0;
  Vec k_b;
  double c0 = 1.0, c1 = 0.0;
  Vec k_c;

  double sigma(const Vec& x) const;
  double b_coeff(const Vec& x) const;  // coefficient of |p|
  double c(const Vec& x) const;
};

// Right-hand side F(M, p, r, x) of du = F dt + (g^{-1}(x)Du, Du) dxi.
// Built-in kinds are degenerate elliptic and strictly monotone in r.
class FSpec {
 public:
  enum class Kind { zero, linear_diffusion, isaacs };

  static FSpec zero();
  // F = nu * tr(a M) - rho * r.  a symmetric PSD; for N=2 additionally
  // |a12| <= min(a11, a22) so the cross term has a monotone stencil.
  static FSpec linear_diffusion(const Mat& a, double nu, double rho);
  // F = inf over outer family, sup over inner family, of the branch value
  // tr(sigma^2 M) + b(p,x) - c(x) r.  The declared modulus feeds the
  // weighted comparison bound; obtain one from the structural check fit.
  static FSpec isaacs(std::vector<std::vector<IsaacsTerm>> families,
                      Modulus f_modulus = Modulus::linear(0.0));

  Kind kind() const { return kind_; }
  double rho() const { return rho_; }
  double lip_r() const { return lip_r_; }   // Lipschitz constant in r
  double f_sup() const { return f_sup_; }   // sup |F(0,0,0,x)|
  const Modulus& f_modulus() const { return f_modulus_; }

  const Mat& diffusion_matrix() const { return a_; }  // nu already folded in
  const std::vector<std::vector<IsaacsTerm>>& families() const { return families_; }

  // Pointwise value; the Isaacs kind resolves inf/sup over its branches.
  double evaluate(const Mat& M, const Vec& p, double r, const Vec& x) const;

  // Worst-case coefficient bounds for CFL budgeting.
  double max_diffusion() const;  // sup of the largest second-order coefficient
  double max_drift() const;      // sup |coefficient of |p||

 private:
  FSpec() = default;
  Kind kind_ = Kind::zero;
  double rho_ = 0.0, lip_r_ = 0.0, f_sup_ = 0.0;
  Mat a_;
  std::vector<std::vector<IsaacsTerm>> families_;
  Modulus f_modulus_ = Modulus::linear(0.0);
};

}  // namespace phj
