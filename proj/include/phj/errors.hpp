#pragma once

#include <stdexcept>
#include <string>

namespace phj {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Hamiltonian conservation along a shot trajectory exceeded its budget.
struct DriftExceeded : Error {
  double drift, budget;
  DriftExceeded(double d, double b)
      : Error("hamiltonian drift " + std::to_string(d) + " exceeds budget " +
              std::to_string(b)),
        drift(d),
        budget(b) {}
};

// Newton shooting failed to hit the target point.
struct NoConvergence : Error {
  int iterations;
  double residual;
  NoConvergence(int it, double res)
      : Error("shooting did not converge after " + std::to_string(it) +
              " iterations, residual " + std::to_string(res)),
        iterations(it),
        residual(res) {}
};

// Derivative of the endpoint map is numerically singular.
struct SingularTangent : Error {
  using Error::Error;
};

// A signal operation was asked for a horizon past a signal's definition.
struct HorizonMismatch : Error {
  using Error::Error;
};

// theta_tilde(omega; gamma) = +inf for an uncapped modulus with gamma/2 < L.
struct ThetaTildeInfinite : Error {
  using Error::Error;
};

// The doubled test function's denominator reached zero (lambda too large
// for the signal gap on [0, t]).
struct DenominatorVanishing : Error {
  using Error::Error;
};

// Time-derivative evaluation requested at (or too close to) a breakpoint of
// a driving signal, where the signal's slope jumps.
struct BreakpointTime : Error {
  using Error::Error;
};

// No admissible lambda interval for the given constants.
struct EmptyWindow : Error {
  using Error::Error;
};

// No gamma on the grid satisfies the admissibility conditions.
struct EmptyGamma : Error {
  using Error::Error;
};

// The smallness condition relating signal gaps to the injectivity radius
// failed; carries both the checked threshold and the stricter proof-side one.
struct SmallnessViolated : Error {
  double lhs, threshold, threshold_strict;
  SmallnessViolated(double l, double t, double ts)
      : Error("signal gap " + std::to_string(l) + " not below threshold " +
              std::to_string(t) + " (strict variant " + std::to_string(ts) + ")"),
        lhs(l),
        threshold(t),
        threshold_strict(ts) {}
};

// Time-step constraint could not be met within the substep cap.
struct CFLFailure : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace phj
