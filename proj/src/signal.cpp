#include "phj/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "phj/errors.hpp"
#include "phj/rng.hpp"

namespace phj {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// exp(x) overflows a double near 709.8; stay clear of it.
constexpr double kExpGuard = 690.0;
}  // namespace

PathSignal::PathSignal(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size() || times_.size() < 2)
    throw std::invalid_argument("signal needs matching times/values, >= 2 points");
  if (times_.front() != 0.0 || values_.front() != 0.0)
    throw std::invalid_argument("signal must start at (0, 0)");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (times_[i] <= times_[i - 1])
      throw std::invalid_argument("signal times must be strictly increasing");
}

PathSignal PathSignal::zero(double horizon) {
  return PathSignal({0.0, horizon}, {0.0, 0.0});
}

PathSignal PathSignal::linear(double slope, double horizon) {
  return PathSignal({0.0, horizon}, {0.0, slope * horizon});
}

PathSignal PathSignal::zigzag(double amplitude, int periods, double horizon) {
  if (periods < 1) throw std::invalid_argument("zigzag needs periods >= 1");
  std::vector<double> t, v;
  const int half_teeth = 2 * periods;
  for (int k = 0; k <= half_teeth; ++k) {
    t.push_back(horizon * k / half_teeth);
    v.push_back(k % 2 == 0 ? 0.0 : amplitude);
  }
  return PathSignal(std::move(t), std::move(v));
}

double PathSignal::value(double t) const {
  if (t < 0.0 || t > horizon() * (1.0 + 1e-12))
    throw HorizonMismatch("signal evaluated outside [0, horizon]");
  t = std::min(t, horizon());
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k = std::min<std::size_t>(it - times_.begin(), times_.size() - 1);
  const double t0 = times_[k - 1], t1 = times_[k];
  const double w = (t - t0) / (t1 - t0);
  return values_[k - 1] + w * (values_[k] - values_[k - 1]);
}

double PathSignal::slope(double t) const {
  if (t < 0.0 || t > horizon() * (1.0 + 1e-12))
    throw HorizonMismatch("signal slope requested outside [0, horizon]");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = std::min<std::size_t>(it - times_.begin(), times_.size() - 1);
  if (k == 0) k = 1;
  return (values_[k] - values_[k - 1]) / (times_[k] - times_[k - 1]);
}

std::vector<double> merged_breakpoints(const PathSignal& xi, const PathSignal& zeta,
                                       double T) {
  if (T > xi.horizon() * (1.0 + 1e-12) || T > zeta.horizon() * (1.0 + 1e-12))
    throw HorizonMismatch("requested horizon exceeds a signal's definition");
  std::vector<double> out{0.0};
  auto push = [&](const std::vector<double>& ts) {
    for (double t : ts)
      if (t > 0.0 && t < T) out.push_back(t);
  };
  push(xi.times());
  push(zeta.times());
  out.push_back(T);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            out.end());
  return out;
}

GapPair delta_pm(const PathSignal& xi, const PathSignal& zeta, double T) {
  GapPair g;
  for (double t : merged_breakpoints(xi, zeta, T)) {
    const double d = xi.value(t) - zeta.value(t);
    g.plus = std::max(g.plus, d);
    g.minus = std::max(g.minus, -d);
  }
  return g;
}

GapPair delta_gamma_pm(const PathSignal& xi, const PathSignal& zeta, double gamma,
                       double T) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (gamma == 0.0) return delta_pm(xi, zeta, T);
  const std::vector<double> bp = merged_breakpoints(xi, zeta, T);
  GapPair g;
  double acc = 0.0;
  for (std::size_t k = 1; k < bp.size(); ++k) {
    const double a = bp[k - 1], b = bp[k];
    const double mid = 0.5 * (a + b);
    const double d = xi.slope(mid) - zeta.slope(mid);
    if (d != 0.0) {
      if (gamma * b > kExpGuard) return {kInf, kInf};
      acc += d * (std::exp(gamma * b) - std::exp(gamma * a)) / gamma;
    }
    // I is monotone within a segment, so endpoint values carry the extrema.
    g.plus = std::max(g.plus, acc);
    g.minus = std::max(g.minus, -acc);
  }
  return g;
}

double weighted_gap_integral(const PathSignal& xi, const PathSignal& zeta,
                             double gamma, double t) {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  const std::vector<double> bp = merged_breakpoints(xi, zeta, t);
  if (gamma == 0.0) return xi.value(t) - zeta.value(t);
  double acc = 0.0;
  for (std::size_t k = 1; k < bp.size(); ++k) {
    const double a = bp[k - 1], b = bp[k];
    const double d = xi.slope(0.5 * (a + b)) - zeta.slope(0.5 * (a + b));
    if (d != 0.0) {
      if (gamma * b > kExpGuard)
        throw std::overflow_error("weighted gap integral overflows for this gamma");
      acc += d * (std::exp(gamma * b) - std::exp(gamma * a)) / gamma;
    }
  }
  return acc;
}

double sup_distance(const PathSignal& xi, const PathSignal& zeta, double T) {
  double s = 0.0;
  for (double t : merged_breakpoints(xi, zeta, T))
    s = std::max(s, std::abs(xi.value(t) - zeta.value(t)));
  return s;
}

PathSignal sample_brownian(int level, double horizon, std::uint64_t seed) {
  if (level < 0 || level > 24) throw std::invalid_argument("brownian level out of range");
  RandomStream rng(seed);
  std::vector<double> v{0.0, std::sqrt(horizon) * rng.normal()};
  for (int j = 1; j <= level; ++j) {
    // Refine each interval with a bridge midpoint, left to right, so a fixed
    // seed yields nested paths across levels.
    const double half_len = horizon / std::ldexp(1.0, j);
    std::vector<double> fine(2 * v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      fine[2 * i] = v[i];
      fine[2 * i + 1] =
          0.5 * (v[i] + v[i + 1]) + std::sqrt(0.5 * half_len) * rng.normal();
    }
    fine.back() = v.back();
    v = std::move(fine);
  }
  std::vector<double> t(v.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    t[k] = horizon * static_cast<double>(k) / static_cast<double>(v.size() - 1);
  return PathSignal(std::move(t), std::move(v));
}

}  // namespace phj
