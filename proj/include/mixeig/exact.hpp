#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "mixeig/mesh.hpp"

namespace mixeig {

/// Analytic Dirichlet eigenpair with sigma = grad u and ||u||_{L2} = 1.
struct ExactSolution {
  double lambda = 0.0;
  std::function<double(const Eigen::Vector2d&)> u;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> sigma;
  std::function<double(const Eigen::Vector2d&)> laplacian;

  // Same eigenpair with u and sigma negated.
  ExactSolution negated() const;
};

// u = (2/L) sin(p pi x / L) sin(q pi y / L) on [0,L]^2, lambda = (p^2 + q^2) pi^2 / L^2.
ExactSolution square_mode(double length, int p, int q);

// Exact eigenpair with the given 1-based position in the ascending Dirichlet
// spectrum of the domain, when that eigenvalue is simple and known in closed
// form (square domains only).
std::optional<ExactSolution> exact_eigenpair(const Domain& domain, int index);

// Reference eigenvalue for eigen index 1 on domains without a closed form.
std::optional<double> reference_eigenvalue(const Domain& domain, int index);

}  // namespace mixeig
