#pragma once

#include <Eigen/Core>

#include "mixeig/eigensolver.hpp"
#include "mixeig/spaces.hpp"

namespace mixeig {

/// Discontinuous field of degree k+1 in the per-element scaled monomial basis;
/// column t holds the coefficients on triangle t.
struct DgField {
  int degree = 0;
  Eigen::MatrixXd coeffs;

  double value(const Mesh& mesh, int t, const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(const Mesh& mesh, int t, const Eigen::Vector2d& x) const;
};

/// Continuous Lagrange field of degree k+1; one value per node of the
/// continuous dof map, boundary nodes pinned to zero.
struct CgField {
  int degree = 0;
  Eigen::VectorXd values;

  double value(const MixedSpaces& spaces, int t, const Eigen::Vector2d& ref) const;
  Eigen::Vector2d gradient(const MixedSpaces& spaces, int t, const ElementGeometry& g,
                           const Eigen::Vector2d& ref) const;
};

// Elementwise lift u* in P_{k+1}: its L2 projection onto P_k equals u_h and
// (grad u*, grad v)_K = (sigma_h, grad v)_K for v in P_{k+1} orthogonal to P_k.
DgField post_star(const MixedSpaces& spaces, const Eigen::VectorXd& u, const Eigen::VectorXd& sigma);
inline DgField post_star(const MixedSpaces& spaces, const EigenPair& pair) {
  return post_star(spaces, pair.u, pair.sigma);
}

// Oswald average: each interior node takes the arithmetic mean of the traces of
// u* from the elements that contain it; boundary nodes are zero.
CgField oswald(const MixedSpaces& spaces, const DgField& ustar);

}  // namespace mixeig
