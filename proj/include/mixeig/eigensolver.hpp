#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "mixeig/assembly.hpp"

namespace mixeig {

/// Discrete eigenpair (lambda_h, u_h, sigma_h) with u^T N u = 1,
/// sigma = -M^{-1} B^T u and sum_K int_K u_h >= 0.
struct EigenPair {
  double lambda = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd sigma;
  double residual_norm = 0.0;  // ||B sigma + lambda N u||_{N^{-1}}
  int iterations = 0;
};

struct SolverConfig {
  int subspace_dim = 0;  // 0 selects count + 2
  double tol = 1e-12;    // relative eigenvalue change
  double residual_tol = 1e-10;  // relative to 1 + lambda
  int max_iter = 200;
  std::uint64_t seed = 20180901;
};

/// Reusable sparse LU of the saddle-point matrix [[M, B^T], [B, 0]].
class SaddleFactorization {
 public:
  SaddleFactorization(const SparseMatrix& flux_mass, const SparseMatrix& divergence);
  ~SaddleFactorization();
  SaddleFactorization(SaddleFactorization&&) noexcept;
  SaddleFactorization& operator=(SaddleFactorization&&) noexcept;

  int flux_size() const { return n_flux_; }
  int scalar_size() const { return n_scalar_; }

  // Solves M s + B^T w = f, B s = g, one column per right-hand side.
  void solve(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g, Eigen::MatrixXd& s,
             Eigen::MatrixXd& w) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_flux_ = 0;
  int n_scalar_ = 0;
};

SaddleFactorization saddle_factorize(const SparseMatrix& flux_mass, const SparseMatrix& divergence);

// The `count` smallest eigenpairs, ascending. Block inverse iteration on the
// scalar variable with Rayleigh-Ritz on the Schur form B M^{-1} B^T.
// `warm_start` columns (scalar vectors) seed the initial subspace.
// Signs: int u_h >= 0 when `ops.constant_one` is set, otherwise (or when the
// mean vanishes) the largest-magnitude coefficient of u is positive.
std::vector<EigenPair> solve_smallest(const MixedOperators& ops, int count,
                                      const SolverConfig& cfg = {},
                                      const Eigen::MatrixXd& warm_start = {});

// (lambda - lambda_h) - (||sigma - sigma_h||^2 - lambda_h ||u - u_h||^2).
double hypercircle_identity(double lambda, double lambda_h, double err_sigma_l2, double err_u_l2);

}  // namespace mixeig
