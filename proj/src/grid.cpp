#include "phj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phj {

Grid::Grid(int dim, int nodes_per_axis, double box_length, const Vec& origin)
    : dim_(dim), n_(nodes_per_axis), box_(box_length), origin_(origin) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("Grid: dim must be 1 or 2");
  if (nodes_per_axis < 4) throw std::invalid_argument("Grid: need at least 4 nodes per axis");
  if (!(box_length > 0)) throw std::invalid_argument("Grid: box_length must be positive");
  if (origin.size() != dim) throw std::invalid_argument("Grid: origin dimension mismatch");
  h_ = box_ / n_;
}

Vec Grid::point(int flat) const {
  Vec x(dim_);
  if (dim_ == 1) {
    x[0] = origin_[0] + h_ * flat;
  } else {
    x[0] = origin_[0] + h_ * (flat % n_);
    x[1] = origin_[1] + h_ * (flat / n_);
  }
  return x;
}

double Grid::periodic_distance(const Vec& a, const Vec& b) const {
  double s = 0.0;
  for (int d = 0; d < dim_; ++d) {
    double r = std::fmod(std::abs(a[d] - b[d]), box_);
    r = std::min(r, box_ - r);
    s += r * r;
  }
  return std::sqrt(s);
}

GridFunction::GridFunction(const Grid& g) : grid_(g), v_(g.size(), 0.0) {}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(const Vec&)>& f) {
  GridFunction u(g);
  for (int i = 0; i < g.size(); ++i) u[i] = f(g.point(i));
  return u;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double GridFunction::max_value() const { return *std::max_element(v_.begin(), v_.end()); }
double GridFunction::min_value() const { return *std::min_element(v_.begin(), v_.end()); }

double GridFunction::lipschitz_estimate() const {
  const Grid& g = grid_;
  double m = 0.0;
  if (g.dim() == 1) {
    for (int i = 0; i < g.nodes(); ++i)
      m = std::max(m, std::abs(v_[g.index(i + 1)] - v_[g.index(i)]));
  } else {
    for (int j = 0; j < g.nodes(); ++j)
      for (int i = 0; i < g.nodes(); ++i) {
        double u0 = v_[g.index(i, j)];
        m = std::max(m, std::abs(v_[g.index(i + 1, j)] - u0));
        m = std::max(m, std::abs(v_[g.index(i, j + 1)] - u0));
      }
  }
  return m / g.h();
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_diff: size mismatch");
  double m = 0.0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_signed_gap(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_signed_gap: size mismatch");
  double m = a[0] - b[0];
  for (int i = 1; i < a.size(); ++i) m = std::max(m, a[i] - b[i]);
  return m;
}

double restriction_sup_diff(const GridFunction& coarse, const GridFunction& fine) {
  const Grid& gc = coarse.grid();
  const Grid& gf = fine.grid();
  if (gf.nodes() != 2 * gc.nodes() || gf.dim() != gc.dim())
    throw std::invalid_argument("restriction_sup_diff: fine grid is not the refinement");
  double m = 0.0;
  if (gc.dim() == 1) {
    for (int i = 0; i < gc.nodes(); ++i)
      m = std::max(m, std::abs(coarse[i] - fine[gf.index(2 * i)]));
  } else {
    for (int j = 0; j < gc.nodes(); ++j)
      for (int i = 0; i < gc.nodes(); ++i)
        m = std::max(m, std::abs(coarse[gc.index(i, j)] - fine[gf.index(2 * i, 2 * j)]));
  }
  return m;
}

InitialData make_cone_euclidean(const Grid& g, const MetricField& m, const Vec& center,
                                double slope, double offset) {
  GridFunction u = GridFunction::sample(
      g, [&](const Vec& x) { return offset - slope * g.periodic_distance(x, center); });
  // Max distance to center on the periodic box: half the box diagonal.
  double dmax = 0.5 * g.box_length() * std::sqrt(static_cast<double>(g.dim()));
  double sup = std::max(std::abs(offset), std::abs(offset - slope * dmax));
  double c = m.ellipticity_c();
  // Cap = total oscillation of the continuum function.
  return InitialData(std::move(u), Modulus::capped(2.0 * c * slope, slope * dmax), sup);
}

InitialData make_cone(const Grid& g, const MetricField& m, const Vec& center, double lip,
                      double offset) {
  double c = m.ellipticity_c();
  InitialData d = make_cone_euclidean(g, m, center, lip / (2.0 * c), offset);
  // Stated in d_g units the requested constant is exact, not the round trip
  // through the Euclidean slope.
  d.modulus = Modulus::capped(lip, d.modulus.cap);
  return d;
}

InitialData make_sine(const Grid& g, const MetricField& m, const Vec& wave, double amp,
                      double offset) {
  if (wave.size() != g.dim()) throw std::invalid_argument("make_sine: wave dimension mismatch");
  GridFunction u = GridFunction::sample(g, [&](const Vec& x) {
    return amp * std::sin(wave.dot(x - g.origin())) + offset;
  });
  double slope = std::abs(amp) * wave.norm();
  double c = m.ellipticity_c();
  return InitialData(std::move(u), Modulus::capped(2.0 * c * slope, 2.0 * std::abs(amp)),
                     std::abs(amp) + std::abs(offset));
}

InitialData make_bump(const Grid& g, const MetricField& m, const Vec& center, double width,
                      double height) {
  if (!(width > 0)) throw std::invalid_argument("make_bump: width must be positive");
  GridFunction u = GridFunction::sample(g, [&](const Vec& x) {
    double r = g.periodic_distance(x, center);
    return height * std::exp(-r * r / (2.0 * width * width));
  });
  // Radial profile h e^{-r^2/2w^2} has max |slope| = |h|/(w sqrt(e)) at r = w.
  double slope = std::abs(height) / (width * std::sqrt(std::exp(1.0)));
  double c = m.ellipticity_c();
  return InitialData(std::move(u), Modulus::capped(2.0 * c * slope, std::abs(height)),
                     std::abs(height));
}

InitialData make_constant(const Grid& g, double value) {
  GridFunction u(g);
  for (int i = 0; i < u.size(); ++i) u[i] = value;
  return InitialData(std::move(u), Modulus::linear(0.0), std::abs(value));
}

}  // namespace phj
