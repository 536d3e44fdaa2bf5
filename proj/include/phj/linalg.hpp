#pragma once

#include <Eigen/Dense>
#include <vector>

namespace phj {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Rank-3 array T(k,i,j), stored as one matrix per leading index k.
// Used for metric derivatives (k = differentiation axis) and Christoffel
// symbols (k = upper index).
using Tensor3 = std::vector<Mat>;

inline Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace phj
