// Regenerates the L-shape reference eigenvalue kept in reference_values.hpp.
//
// Runs the k=1 adaptive loop (theta=0.5) and fits lambda_h = lambda + c * dofs^-2
// over the finest levels. Two-level Richardson estimates are printed as well so
// the spread can be checked by eye.
//
//   lshape_reference [max_dofs] [fit_levels]
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <vector>

#include <Eigen/Dense>

#include "mixeig/adapt.hpp"
#include "mixeig/mesh.hpp"
#include "mixeig/reference_values.hpp"

int main(int argc, char** argv) {
  const long max_dofs = argc > 1 ? std::atol(argv[1]) : 400'000;
  const int fit_levels = argc > 2 ? std::atoi(argv[2]) : 6;

  mixeig::AdaptConfig cfg;
  cfg.k = 1;
  cfg.theta = 0.5;
  cfg.max_levels = 200;
  cfg.max_dofs = max_dofs;

  std::vector<double> dofs, lambdas;
  std::cout << std::setprecision(15);
  mixeig::adaptive_loop(mixeig::generate_lshape(2), cfg,
                        [&](const mixeig::Mesh&, const mixeig::LevelSolution&, const mixeig::LevelRecord& rec) {
                          dofs.push_back(static_cast<double>(rec.ndof_total()));
                          lambdas.push_back(rec.lambda_h);
                          std::cout << rec.level << ' ' << rec.ndof_total() << ' ' << rec.lambda_h;
                          const std::size_t n = lambdas.size();
                          if (n >= 2) {
                            const double a = dofs[n - 2] * dofs[n - 2], b = dofs[n - 1] * dofs[n - 1];
                            std::cout << "  richardson " << (b * lambdas[n - 1] - a * lambdas[n - 2]) / (b - a);
                          }
                          std::cout << std::endl;
                        });

  const int n = static_cast<int>(lambdas.size());
  const int m = std::min(fit_levels, n);
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const int l = n - m + i;
    A(i, 0) = 1.0;
    A(i, 1) = 1.0 / (dofs[l] * dofs[l]);
    y(i) = lambdas[l];
  }
  const Eigen::Vector2d fit = A.colPivHouseholderQr().solve(y);
  const double residual = (A * fit - y).lpNorm<Eigen::Infinity>();
  std::cout << "fit over last " << m << " levels: lambda_ref = " << fit(0) << " (c = " << fit(1)
            << ", max residual " << residual << ")\n";
  std::cout << "stored value: " << mixeig::reference::kLShapeLambda1
            << " (difference " << fit(0) - mixeig::reference::kLShapeLambda1 << ")\n";
  return 0;
}
