#include "phj/scalar_field.hpp"

#include <cmath>
#include <stdexcept>

namespace phj {

ScalarField ScalarField::zero(int dim) { return ScalarField(dim); }

ScalarField ScalarField::linear(const Vec& coeffs) {
  ScalarField f(static_cast<int>(coeffs.size()));
  f.lin_ = coeffs;
  return f;
}

ScalarField ScalarField::sine(double amp, const Vec& wave, double phase) {
  ScalarField f(static_cast<int>(wave.size()));
  f.add_sine(amp, wave, phase);
  return f;
}

ScalarField& ScalarField::add_linear(const Vec& coeffs) {
  if (coeffs.size() != dim_) throw std::invalid_argument("scalar field dim mismatch");
  lin_ += coeffs;
  return *this;
}

ScalarField& ScalarField::add_sine(double amp, const Vec& wave, double phase) {
  if (wave.size() != dim_) throw std::invalid_argument("scalar field dim mismatch");
  trig_.push_back({amp, wave, phase});
  return *this;
}

double ScalarField::value(const Vec& x) const {
  double v = lin_.dot(x);
  for (const auto& t : trig_) v += t.amp * std::sin(t.wave.dot(x) + t.phase);
  return v;
}

Vec ScalarField::grad(const Vec& x) const {
  Vec g = lin_;
  for (const auto& t : trig_) g += t.amp * std::cos(t.wave.dot(x) + t.phase) * t.wave;
  return g;
}

Mat ScalarField::hess(const Vec& x) const {
  Mat h = Mat::Zero(dim_, dim_);
  for (const auto& t : trig_)
    h -= t.amp * std::sin(t.wave.dot(x) + t.phase) * (t.wave * t.wave.transpose());
  return h;
}

double ScalarField::sup_abs() const {
  double s = 0.0;
  for (const auto& t : trig_) s += std::abs(t.amp);
  return s;
}

double ScalarField::grad_bound() const {
  double s = lin_.norm();
  for (const auto& t : trig_) s += std::abs(t.amp) * t.wave.norm();
  return s;
}

double ScalarField::hess_bound() const {
  double s = 0.0;
  for (const auto& t : trig_) s += std::abs(t.amp) * t.wave.squaredNorm();
  return s;
}

bool ScalarField::has_linear() const { return lin_.norm() > 0.0; }

}  // namespace phj
