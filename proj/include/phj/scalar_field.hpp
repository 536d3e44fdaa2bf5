#pragma once

#include <vector>

#include "phj/linalg.hpp"

namespace phj {

// Smooth scalar field with analytic first and second derivatives:
//   f(x) = lin . x + sum_m amp_m * sin(wave_m . x + phase_m)
// Enough to express every coefficient field used here (linear ramps for
// derivative tests, bounded trigonometric perturbations for everything else).
class ScalarField {
 public:
  struct Trig {
    double amp = 0.0;
    Vec wave;
    double phase = 0.0;
  };

  static ScalarField zero(int dim);
  static ScalarField linear(const Vec& coeffs);
  static ScalarField sine(double amp, const Vec& wave, double phase = 0.0);

  ScalarField& add_linear(const Vec& coeffs);
  ScalarField& add_sine(double amp, const Vec& wave, double phase = 0.0);

  int dim() const { return dim_; }
  double value(const Vec& x) const;
  Vec grad(const Vec& x) const;
  Mat hess(const Vec& x) const;

  // Crude sup bounds over all of R^n (linear part excluded from value_bound;
  // callers that need a bounded field should not add one).
  double sup_abs() const;        // sum |amp_m| + 0 for pure-trig fields
  double grad_bound() const;     // |lin| + sum |amp_m| |wave_m|
  double hess_bound() const;     // sum |amp_m| |wave_m|^2
  bool has_linear() const;

 private:
  explicit ScalarField(int dim) : dim_(dim), lin_(Vec::Zero(dim)) {}
  int dim_;
  Vec lin_;
  std::vector<Trig> trig_;
};

}  // namespace phj
