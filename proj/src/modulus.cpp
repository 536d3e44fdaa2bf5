#include "phj/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "phj/errors.hpp"

namespace phj {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Modulus Modulus::capped(double lip, double cap) {
  if (lip < 0.0 || cap < 0.0) throw std::invalid_argument("modulus needs lip, cap >= 0");
  return {lip, cap};
}

Modulus Modulus::linear(double lip) {
  if (lip < 0.0) throw std::invalid_argument("modulus needs lip >= 0");
  return {lip, kInf};
}

double Modulus::operator()(double r) const {
  if (r < 0.0) throw std::invalid_argument("modulus argument must be >= 0");
  return std::min(lip * r, cap);
}

bool Modulus::is_capped() const { return std::isfinite(cap); }

Modulus Modulus::min_with(const Modulus& other) const {
  return {std::min(lip, other.lip), std::min(cap, other.cap)};
}

double theta(const Modulus& omega, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("theta needs lambda > 0");
  if (std::isinf(lambda)) return 0.0;
  if (omega.lip == 0.0) return 0.0;
  if (!omega.is_capped() || lambda >= omega.lip * omega.lip / omega.cap)
    return omega.lip * omega.lip / (2.0 * lambda);
  return omega.cap - lambda * omega.cap * omega.cap / (2.0 * omega.lip * omega.lip);
}

double theta_tilde(const Modulus& omega, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("theta_tilde needs gamma > 0");
  if (0.5 * gamma >= omega.lip) return 0.0;
  if (!omega.is_capped())
    throw ThetaTildeInfinite("theta_tilde infinite: uncapped modulus, gamma/2 < lip");
  return omega.cap * (1.0 - 0.5 * gamma / omega.lip);
}

}  // namespace phj
