#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature tables or solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "mixeig/assembly.hpp"
#include "mixeig/mesh.hpp"

namespace oracle {

// int_T x^a y^b over the reference triangle = a! b! / (a + b + 2)!
inline double monomial_integral(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

struct Gauss1d {
  Eigen::VectorXd x, w;  // on [0,1]
};

// Golub-Welsch: nodes are the eigenvalues of the Legendre Jacobi matrix.
inline Gauss1d gauss_golub_welsch(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Gauss1d g;
  g.x = (es.eigenvalues().array() + 1.0) / 2.0;
  g.w = es.eigenvectors().row(0).transpose().array().square();  // sums to 1
  return g;
}

// Collapsed-coordinate tensor Gauss rule over the triangle (a, b, c),
// exact for polynomials of degree <= 2n - 2.
inline double integrate_triangle(const std::function<double(const Eigen::Vector2d&)>& f,
                                 const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                 const Eigen::Vector2d& c, int n = 12) {
  const Gauss1d g = gauss_golub_welsch(n);
  const double det = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = g.x(i), t = g.x(j) * (1.0 - g.x(i));
      sum += g.w(i) * g.w(j) * (1.0 - s) * f(a + s * (b - a) + t * (c - a));
    }
  }
  return sum * det;
}

inline double integrate_segment(const std::function<double(double)>& f, int n = 12) {
  const Gauss1d g = gauss_golub_welsch(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += g.w(i) * f(g.x(i));
  return sum;
}

struct DenseEigen {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd u;  // N-orthonormal columns
};

// Smallest eigenpairs of B M^{-1} B^T u = lambda N u by dense linear algebra.
inline DenseEigen dense_schur_eigen(const mixeig::MixedOperators& ops) {
  const Eigen::MatrixXd M(ops.flux_mass), B(ops.divergence), N(ops.scalar_mass);
  const Eigen::MatrixXd S = B * M.ldlt().solve(B.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()), N);
  return {es.eigenvalues(), es.eigenvectors()};
}

// Exhaustive search for the smallest subset whose squared sum reaches
// theta^2 of the total. Returns its size; n must be small.
inline int brute_force_min_mark_count(const std::vector<double>& etas, double theta) {
  const int n = static_cast<int>(etas.size());
  double total = 0.0;
  for (double e : etas) total += e * e;
  int best = n;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double s = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        s += etas[i] * etas[i];
        ++count;
      }
    }
    if (s >= theta * theta * total * (1 - 1e-14) && count < best) best = count;
  }
  return best;
}

// Hand-rolled generators.

inline std::vector<int> random_marks(const mixeig::Mesh& mesh, double fraction, std::mt19937_64& rng) {
  std::bernoulli_distribution pick(fraction);
  std::vector<int> marked;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (pick(rng)) marked.push_back(t);
  }
  if (marked.empty()) marked.push_back(static_cast<int>(rng() % mesh.num_triangles()));
  return marked;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline mixeig::Mesh random_refined(const mixeig::Mesh& start, int steps, double fraction,
                                   std::mt19937_64& rng) {
  mixeig::Mesh mesh = start;
  for (int s = 0; s < steps; ++s) {
    const auto marked = random_marks(mesh, fraction, rng);
    mesh = mixeig::refine(mesh, marked);
  }
  return mesh;
}

// Reference triangle vertices as a convenience.
inline const Eigen::Vector2d kRef0{0.0, 0.0}, kRef1{1.0, 0.0}, kRef2{0.0, 1.0};

}  // namespace oracle
