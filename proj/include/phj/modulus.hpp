#pragma once

namespace phj {

// Capped-linear modulus of continuity: omega(r) = min(lip * r, cap).
// cap may be +infinity (uncapped linear).
struct Modulus {
  double lip = 0.0;
  double cap = 0.0;

  static Modulus capped(double lip, double cap);
  static Modulus linear(double lip);

  double operator()(double r) const;
  bool is_capped() const;

  // Pointwise minimum (componentwise min is exact for this family).
  Modulus min_with(const Modulus& other) const;
};

// theta(omega, lambda) = sup_{r >= 0} omega(r) - lambda r^2 / 2, lambda > 0.
// Closed form: lip^2/(2 lambda) once the vertex lies on the linear branch
// (lambda >= lip^2/cap), otherwise cap - lambda cap^2 / (2 lip^2).
double theta(const Modulus& omega, double lambda);

// theta_tilde(omega; gamma) = sup_{r >= 0} omega(r) - gamma r / 2, gamma > 0.
// Zero when gamma/2 >= lip; cap (1 - gamma/(2 lip)) when capped; throws
// ThetaTildeInfinite for an uncapped modulus with gamma/2 < lip.
double theta_tilde(const Modulus& omega, double gamma);

}  // namespace phj
