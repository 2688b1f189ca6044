#pragma once

#include <vector>

#include <Eigen/Core>

namespace mixeig {

/// Quadrature on the reference triangle (0,0), (1,0), (0,1).
///
/// Points are stored in reference coordinates; weights sum to the reference
/// area 1/2. `degree` is the total polynomial degree integrated exactly.
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(points.size()); }
};

// Symmetric Gauss rule exact for total degree >= `degree`, 1 <= degree <= 12.
// Rules are tabulated and refined to double precision on first use.
const QuadratureRule& triangle_quadrature(int degree);

// Gauss-Legendre rule on [0,1] with `npoints` points; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_legendre(int npoints);

}  // namespace mixeig
