#pragma once

#include <algorithm>
#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mixeig/spaces.hpp"

namespace mixeig {

using SparseMatrix = Eigen::SparseMatrix<double>;

// (phi_i, phi_j) over RT_k, quadrature degree 2k+2.
SparseMatrix assemble_flux_mass(const MixedSpaces& spaces);
// Rows: P_k test functions, columns: RT_k; entry (div phi_j, q_i).
SparseMatrix assemble_div(const MixedSpaces& spaces);
// (q_i, q_j) over discontinuous P_k; block diagonal.
SparseMatrix assemble_scalar_mass(const MixedSpaces& spaces);

/// The three blocks of the discrete mixed eigenproblem
///   M sigma + B^T u = 0,   B sigma = -lambda N u.
struct MixedOperators {
  SparseMatrix flux_mass;    // M
  SparseMatrix divergence;   // B
  SparseMatrix scalar_mass;  // N
  Eigen::VectorXd constant_one;  // coefficients of the function 1 in P_k, may be empty
};

MixedOperators assemble_mixed(const MixedSpaces& spaces);

using ScalarFunction = std::function<double(const Eigen::Vector2d&)>;
using VectorFunction = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

// Elementwise L2 projection onto discontinuous P_degree (degree-12 quadrature).
Eigen::VectorXd l2_project(const MixedSpaces& spaces, const ScalarFunction& f, int degree);
inline Eigen::VectorXd l2_project(const MixedSpaces& spaces, const ScalarFunction& f) {
  return l2_project(spaces, f, spaces.k());
}

// RT_k interpolant of a vector field: edge normal moments (plus interior
// moments for k = 1) matched exactly.
Eigen::VectorXd rt_interpolate(const MixedSpaces& spaces, const VectorFunction& f);

}  // namespace mixeig
