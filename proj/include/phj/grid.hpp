#pragma once

#include <functional>
#include <vector>

#include "phj/linalg.hpp"
#include "phj/metric.hpp"
#include "phj/modulus.hpp"

namespace phj {

// Uniform periodic grid on [origin, origin + box_length)^dim, dim 1 or 2.
class Grid {
 public:
  Grid(int dim, int nodes_per_axis, double box_length, const Vec& origin);

  int dim() const { return dim_; }
  int nodes() const { return n_; }
  int size() const { return dim_ == 1 ? n_ : n_ * n_; }
  double h() const { return h_; }
  double box_length() const { return box_; }
  const Vec& origin() const { return origin_; }

  int wrap(int i) const { return ((i % n_) + n_) % n_; }
  int index(int i, int j = 0) const { return wrap(i) + (dim_ == 2 ? n_ * wrap(j) : 0); }
  Vec point(int flat) const;

  // Axis-wise periodic distance between two points of the box.
  double periodic_distance(const Vec& a, const Vec& b) const;

  // Same layout, twice the nodes per axis; coarse node i maps to fine node 2i.
  Grid refined() const { return Grid(dim_, 2 * n_, box_, origin_); }

 private:
  int dim_, n_;
  double box_, h_;
  Vec origin_;
};

class GridFunction {
 public:
  explicit GridFunction(const Grid& g);
  static GridFunction sample(const Grid& g, const std::function<double(const Vec&)>& f);

  const Grid& grid() const { return grid_; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }
  int size() const { return static_cast<int>(v_.size()); }

  double sup_norm() const;
  double max_value() const;
  double min_value() const;
  // Largest one-sided difference quotient across axes (periodic wrap).
  double lipschitz_estimate() const;

  double time_stamp = 0.0;

  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

 private:
  Grid grid_;
  std::vector<double> v_;
};

double sup_diff(const GridFunction& a, const GridFunction& b);       // max |a - b|
double max_signed_gap(const GridFunction& a, const GridFunction& b); // max (a - b)
// Sup over coarse nodes of |coarse - fine| where fine lives on grid.refined().
double restriction_sup_diff(const GridFunction& coarse, const GridFunction& fine);

// Named initial-data generators. The attached modulus is stated with respect
// to the Riemannian distance d_g; with the normalization d_I = |x - y| / 2 a
// Euclidean slope s corresponds to a d_g-Lipschitz constant 2 c s, so a
// requested `lip` is realized with Euclidean slope lip / (2c).
struct InitialData {
  GridFunction values;
  Modulus modulus;   // w.r.t. d_g
  double sup_norm;   // exact sup of the continuum function
  InitialData(GridFunction v, Modulus m, double s)
      : values(std::move(v)), modulus(m), sup_norm(s) {}
};

// u0(x) = offset - slope * dist_per(x, center); pass the slope either in d_g
// units (lip) or directly as the Euclidean slope.
InitialData make_cone(const Grid& g, const MetricField& m, const Vec& center,
                      double lip, double offset = 0.0);
InitialData make_cone_euclidean(const Grid& g, const MetricField& m, const Vec& center,
                                double slope, double offset = 0.0);

// u0(x) = amp * sin(wave . (x - center)) + offset.
InitialData make_sine(const Grid& g, const MetricField& m, const Vec& wave, double amp,
                      double offset = 0.0);

// u0(x) = height * exp(-dist_per(x, center)^2 / (2 width^2)).
InitialData make_bump(const Grid& g, const MetricField& m, const Vec& center,
                      double width, double height);

InitialData make_constant(const Grid& g, double value);

}  // namespace phj
