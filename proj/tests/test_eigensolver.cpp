#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "mixeig/adapt.hpp"
#include "mixeig/eigensolver.hpp"
#include "mixeig/error.hpp"
#include "oracles.hpp"

using namespace mixeig;

namespace {

MixedOperators operators(const Mesh& mesh, int k) { return assemble_mixed(MixedSpaces(mesh, k)); }

}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("saddle solve residuals") {
  const Mesh mesh = generate_lshape(2);
  const MixedOperators ops = operators(mesh, 1);
  const SaddleFactorization fact = saddle_factorize(ops.flux_mass, ops.divergence);
  std::mt19937_64 rng(37);
  const Eigen::Index nf = ops.flux_mass.rows(), ns = ops.scalar_mass.rows();
  const Eigen::VectorXd c = oracle::random_vector(ns, rng);
  Eigen::MatrixXd s, w;
  fact.solve(Eigen::MatrixXd::Zero(nf, 1), ops.scalar_mass * c, s, w);
  const Eigen::VectorXd r1 = ops.flux_mass * s.col(0) + ops.divergence.transpose() * w.col(0);
  const Eigen::VectorXd r2 = ops.divergence * s.col(0) - ops.scalar_mass * c;
  CHECK(r1.norm() <= 1e-10 * (ops.scalar_mass * c).norm());
  CHECK(r2.norm() <= 1e-10 * (ops.scalar_mass * c).norm());

  fact.solve(Eigen::MatrixXd::Zero(nf, 2), Eigen::MatrixXd::Zero(ns, 2), s, w);
  CHECK(s.norm() == 0.0);
  CHECK(w.norm() == 0.0);
}

TEST_CASE("saddle solve agrees with a dense LU") {
  std::mt19937_64 rng(41);
  for (int k = 0; k <= 1; ++k) {
    const Mesh mesh = generate_square(k == 0 ? 6 : 3);
    const MixedOperators ops = operators(mesh, k);
    const Eigen::Index nf = ops.flux_mass.rows(), ns = ops.scalar_mass.rows();
    REQUIRE(nf + ns <= 500);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf + ns, nf + ns);
    K.topLeftCorner(nf, nf) = Eigen::MatrixXd(ops.flux_mass);
    K.topRightCorner(nf, ns) = Eigen::MatrixXd(ops.divergence).transpose();
    K.bottomLeftCorner(ns, nf) = Eigen::MatrixXd(ops.divergence);
    const Eigen::VectorXd f = oracle::random_vector(nf, rng), g = oracle::random_vector(ns, rng);
    Eigen::VectorXd rhs(nf + ns);
    rhs << f, g;
    const Eigen::VectorXd dense = K.fullPivLu().solve(rhs);
    Eigen::MatrixXd s, w;
    saddle_factorize(ops.flux_mass, ops.divergence).solve(f, g, s, w);
    CHECK((s.col(0) - dense.head(nf)).norm() <= 1e-8 * dense.norm());
    CHECK((w.col(0) - dense.tail(ns)).norm() <= 1e-8 * dense.norm());
  }
}

TEST_CASE("smallest eigenpairs match the dense schur complement") {
  const Mesh mesh = generate_square(2);
  const MixedOperators ops = operators(mesh, 0);
  const auto pairs = solve_smallest(ops, 3);
  const oracle::DenseEigen dense = oracle::dense_schur_eigen(ops);
  REQUIRE(pairs.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(pairs[i].lambda - dense.lambda(i)) <= 1e-9 * dense.lambda(i));
}

TEST_CASE("eigenpair invariants") {
  std::mt19937_64 rng(43);
  for (int k = 0; k <= 1; ++k) {
    const Mesh mesh = oracle::random_refined(generate_lshape(1), 4, 0.4, rng);
    const MixedOperators ops = operators(mesh, k);
    const auto pairs = solve_smallest(ops, 4);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const EigenPair& p = pairs[i];
      CHECK(p.lambda > 0.0);
      if (i > 0) CHECK(p.lambda >= pairs[i - 1].lambda);
      CHECK(p.u.dot(ops.scalar_mass * p.u) == doctest::Approx(1.0).epsilon(1e-12));
      const Eigen::VectorXd r1 = ops.flux_mass * p.sigma + ops.divergence.transpose() * p.u;
      CHECK(r1.norm() <= 1e-9 * (1 + p.sigma.norm()));
      const Eigen::VectorXd r2 = ops.divergence * p.sigma + p.lambda * (ops.scalar_mass * p.u);
      CHECK(r2.norm() <= 1e-9 * (1 + p.lambda) * (1 + p.u.norm()));
      CHECK(p.residual_norm <= 1e-9 * (1 + p.lambda));
      for (std::size_t j = 0; j < i; ++j) CHECK(std::abs(pairs[j].u.dot(ops.scalar_mass * p.u)) <= 1e-8);
    }
    CHECK(ops.constant_one.dot(ops.scalar_mass * pairs[0].u) > 0.0);
  }
}

TEST_CASE("solver is deterministic") {
  const MixedOperators ops = operators(generate_lshape(2), 0);
  const auto a = solve_smallest(ops, 2), b = solve_smallest(ops, 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(a[i].lambda == b[i].lambda);
    CHECK((a[i].u - b[i].u).norm() == 0.0);
  }
}

TEST_CASE("bad counts are rejected") {
  const MixedOperators ops = operators(generate_square(1), 0);
  CHECK_THROWS_AS(solve_smallest(ops, 0), SolverError);
  CHECK_THROWS_AS(solve_smallest(ops, 3), SolverError);
  const auto all = solve_smallest(ops, 2);
  const oracle::DenseEigen dense = oracle::dense_schur_eigen(ops);
  CHECK(all[1].lambda == doctest::Approx(dense.lambda(1)).epsilon(1e-10));
  SolverConfig bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(solve_smallest(ops, 1, bad), SolverError);
}

TEST_CASE("first eigenvalue on the unit-pi square converges at second order in h") {
  double previous = 0.0;
  for (int n : {8, 16, 32}) {
    const double lambda = solve_smallest(operators(generate_square(n), 0), 1)[0].lambda;
    const double err = std::abs(lambda - 2.0);
    if (n == 32) CHECK(err < 0.02 * 2.0);
    if (previous > 0.0) {
      CHECK(previous / err > 3.6);
      CHECK(previous / err < 4.4);
    }
    previous = err;
  }
}

TEST_CASE("eigenvalue index selects larger eigenvalues") {
  // On [0, 2pi]^2 the eigenvalue 2 is the fourth, after 1/2 and the double 5/4.
  const Mesh mesh = generate_square(8, 2 * std::numbers::pi);
  const LevelSolution sol = solve_level(mesh, 1, 4, SolverConfig{});
  CHECK(sol.pair.lambda == doctest::Approx(2.0).epsilon(1e-3));
  REQUIRE(sol.errors.has_value());
  CHECK(std::abs(hypercircle_identity(sol.pair, *sol.errors)) <= 1e-8 * 2.0);
}

TEST_CASE("hypercircle identity") {
  CHECK(hypercircle_identity(3.0, 3.0, 0.0, 0.0) == 0.0);
  CHECK(hypercircle_identity(2.0, 1.9, 0.5, 0.3) == doctest::Approx(0.1 - (0.25 - 1.9 * 0.09)));
  for (auto [n, k] : {std::pair{8, 0}, std::pair{4, 1}}) {
    const LevelSolution sol = solve_level(generate_square(n), k, 1, SolverConfig{});
    REQUIRE(sol.errors.has_value());
    CHECK(std::abs(hypercircle_identity(sol.pair, *sol.errors)) <= 1e-8 * 2.0);
  }
}

}  // TEST_SUITE
