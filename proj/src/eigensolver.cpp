#include "mixeig/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "mixeig/error.hpp"

namespace mixeig {

struct SaddleFactorization::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

SaddleFactorization::SaddleFactorization(const SparseMatrix& flux_mass,
                                         const SparseMatrix& divergence)
    : impl_(std::make_unique<Impl>()),
      n_flux_(static_cast<int>(flux_mass.rows())),
      n_scalar_(static_cast<int>(divergence.rows())) {
  if (flux_mass.rows() != flux_mass.cols() || divergence.cols() != flux_mass.rows()) {
    throw SolverError("saddle_factorize: inconsistent block sizes");
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(flux_mass.nonZeros() + 2 * divergence.nonZeros());
  for (int c = 0; c < flux_mass.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(flux_mass, c); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (int c = 0; c < divergence.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(divergence, c); it; ++it) {
      trip.emplace_back(n_flux_ + it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), n_flux_ + it.row(), it.value());
    }
  }
  SparseMatrix kkt(n_flux_ + n_scalar_, n_flux_ + n_scalar_);
  kkt.setFromTriplets(trip.begin(), trip.end());
  kkt.makeCompressed();
  impl_->lu.analyzePattern(kkt);
  impl_->lu.factorize(kkt);
  if (impl_->lu.info() != Eigen::Success) {
    throw SolverError("saddle_factorize: singular saddle-point matrix (" + impl_->lu.lastErrorMessage() + ")");
  }
}

SaddleFactorization::~SaddleFactorization() = default;
SaddleFactorization::SaddleFactorization(SaddleFactorization&&) noexcept = default;
SaddleFactorization& SaddleFactorization::operator=(SaddleFactorization&&) noexcept = default;

void SaddleFactorization::solve(const Eigen::MatrixXd& f, const Eigen::MatrixXd& g,
                                Eigen::MatrixXd& s, Eigen::MatrixXd& w) const {
  const Eigen::Index cols = std::max(f.cols(), g.cols());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_flux_ + n_scalar_, cols);
  if (f.size() > 0) rhs.topRows(n_flux_) = f;
  if (g.size() > 0) rhs.bottomRows(n_scalar_) = g;
  const Eigen::MatrixXd x = impl_->lu.solve(rhs);
  s = x.topRows(n_flux_);
  w = x.bottomRows(n_scalar_);
}

SaddleFactorization saddle_factorize(const SparseMatrix& flux_mass, const SparseMatrix& divergence) {
  return SaddleFactorization(flux_mass, divergence);
}

namespace {

// Columns of X made N-orthonormal (X^T N X = I).
Eigen::MatrixXd n_orthonormalize(const SparseMatrix& mass, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd gram = x.transpose() * (mass * x);
  gram = 0.5 * (gram + gram.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd d = es.eigenvalues().cwiseMax(1e-300);
  return x * es.eigenvectors() * d.cwiseSqrt().cwiseInverse().asDiagonal();
}

}  // namespace

std::vector<EigenPair> solve_smallest(const MixedOperators& ops, int count,
                                      const SolverConfig& cfg,
                                      const Eigen::MatrixXd& warm_start) {
  const SparseMatrix& M = ops.flux_mass;
  const SparseMatrix& B = ops.divergence;
  const SparseMatrix& N = ops.scalar_mass;
  const int n = static_cast<int>(N.rows());
  if (count < 1) throw SolverError("solve_smallest: count must be >= 1");
  if (count > n) throw SolverError("solve_smallest: count exceeds the scalar space dimension");
  if (!(cfg.tol > 0.0)) throw SolverError("solve_smallest: tol must be positive");
  const int m = std::min(n, cfg.subspace_dim > 0 ? std::max(cfg.subspace_dim, count) : count + 2);

  const SaddleFactorization saddle(M, B);
  Eigen::SimplicialLLT<SparseMatrix> mass_chol(N);
  if (mass_chol.info() != Eigen::Success) throw SolverError("solve_smallest: scalar mass not SPD");

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd u(n, m);
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) u(i, j) = normal(rng);
  }
  const Eigen::Index nwarm = std::min<Eigen::Index>(warm_start.cols(), m);
  if (nwarm > 0 && warm_start.rows() == n) u.leftCols(nwarm) = warm_start.leftCols(nwarm);
  u = n_orthonormalize(N, u);

  Eigen::VectorXd theta_prev = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  Eigen::MatrixXd flux, scalar;
  Eigen::VectorXd residuals(count);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    saddle.solve(Eigen::MatrixXd(), -(N * u), flux, scalar);
    // Schur quadratic form w^T B M^{-1} B^T w = s^T M s for s = -M^{-1} B^T w.
    Eigen::MatrixXd a = flux.transpose() * (M * flux);
    Eigen::MatrixXd b = scalar.transpose() * (N * scalar);
    a = 0.5 * (a + a.transpose()).eval();
    b = 0.5 * (b + b.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(a, b);
    if (ritz.info() != Eigen::Success) throw SolverError("solve_smallest: Rayleigh-Ritz step failed");
    const Eigen::VectorXd theta = ritz.eigenvalues();
    const Eigen::MatrixXd& y = ritz.eigenvectors();
    u = scalar * y;
    flux = flux * y;

    const Eigen::MatrixXd r = B * flux.leftCols(count) + N * u.leftCols(count) * theta.head(count).asDiagonal();
    const Eigen::MatrixXd nr = mass_chol.solve(r);
    bool converged = true;
    for (int i = 0; i < count; ++i) {
      residuals(i) = std::sqrt(std::max(0.0, r.col(i).dot(nr.col(i))));
      const double change = std::abs(theta(i) - theta_prev(i)) / std::abs(theta(i));
      if (!(change < cfg.tol) || residuals(i) > cfg.residual_tol * (1.0 + std::abs(theta(i)))) {
        converged = false;
      }
    }
    theta_prev = theta;
    if (!converged) continue;

    std::vector<EigenPair> pairs(count);
    for (int i = 0; i < count; ++i) {
      EigenPair& p = pairs[i];
      p.lambda = theta(i);
      p.u = u.col(i);
      p.sigma = flux.col(i);
      p.residual_norm = residuals(i);
      p.iterations = it;
      double mean = ops.constant_one.size() == n ? ops.constant_one.dot(N * p.u) : 0.0;
      if (std::abs(mean) < 1e-12) {
        Eigen::Index imax = 0;
        p.u.cwiseAbs().maxCoeff(&imax);
        mean = p.u(imax);
      }
      if (mean < 0.0) {
        p.u = -p.u;
        p.sigma = -p.sigma;
      }
    }
    return pairs;
  }
  std::ostringstream msg;
  msg << "solve_smallest: no convergence in " << cfg.max_iter << " iterations; last residuals";
  for (int i = 0; i < count; ++i) msg << ' ' << residuals(i);
  throw SolverError(msg.str());
}

double hypercircle_identity(double lambda, double lambda_h, double err_sigma_l2, double err_u_l2) {
  return (lambda - lambda_h) - (err_sigma_l2 * err_sigma_l2 - lambda_h * err_u_l2 * err_u_l2);
}

}  // namespace mixeig
