#include "mixeig/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "mixeig/assembly.hpp"
#include "mixeig/exact.hpp"
#include "mixeig/quadrature.hpp"

namespace mixeig {

std::vector<int> doerfler_mark(std::span<const double> etas, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("doerfler_mark: theta must lie in (0, 1]");
  for (double e : etas) {
    if (!(e >= 0.0)) throw std::invalid_argument("doerfler_mark: indicators must be nonnegative");
  }
  std::vector<int> order(etas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return etas[a] > etas[b]; });
  // Summing in the marking order makes theta = 1 reach the total exactly.
  double total = 0.0;
  for (int i : order) total += etas[i] * etas[i];
  const double target = theta * theta * total;
  std::vector<int> marked;
  double sum = 0.0;
  for (int i : order) {
    if (sum >= target || etas[i] == 0.0) break;
    marked.push_back(i);
    sum += etas[i] * etas[i];
  }
  return marked;
}

Eigen::VectorXd transfer_scalar(const Mesh& coarse, const Eigen::VectorXd& u, int k, const Mesh& fine) {
  const int dim = ScaledMonomials::dim(k);
  const QuadratureRule& rule = triangle_quadrature(std::max(1, 2 * k));
  Eigen::VectorXd out(static_cast<Eigen::Index>(fine.num_triangles()) * dim);
  for (int t = 0; t < fine.num_triangles(); ++t) {
    const int parent = fine.parents()[t];
    if (parent < 0 || parent >= coarse.num_triangles()) {
      throw std::invalid_argument("transfer_scalar: fine mesh is not a refinement of coarse");
    }
    const ElementGeometry g = ElementGeometry::of(fine, t);
    const ScaledMonomials fine_basis(fine, t, k);
    const ScaledMonomials coarse_basis(coarse, parent, k);
    const Eigen::VectorXd cu = u.segment(static_cast<Eigen::Index>(parent) * dim, dim);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = g.map(rule.points[q]);
      const double w = rule.weights[q] * g.det;
      const Eigen::RowVectorXd phi = fine_basis.values(x);
      mass.noalias() += w * phi.transpose() * phi;
      rhs += (w * coarse_basis.values(x).dot(cu)) * phi.transpose();
    }
    out.segment(static_cast<Eigen::Index>(t) * dim, dim) = mass.ldlt().solve(rhs);
  }
  return out;
}

LevelSolution solve_level(const Mesh& mesh, int k, int eigen_index, const SolverConfig& solver,
                          const Eigen::VectorXd& warm) {
  if (eigen_index < 1) throw std::invalid_argument("solve_level: eigen_index must be >= 1");
  const MixedSpaces spaces(mesh, k);
  const MixedOperators ops = assemble_mixed(spaces);
  Eigen::MatrixXd seed;
  if (warm.size() == ops.scalar_mass.rows()) seed = warm;
  std::vector<EigenPair> pairs = solve_smallest(ops, eigen_index, solver, seed);

  LevelSolution sol;
  sol.pair = std::move(pairs[eigen_index - 1]);
  sol.ustar = post_star(spaces, sol.pair);
  sol.ustar2 = oswald(spaces, sol.ustar);
  sol.report = estimate(spaces, sol.pair.sigma, sol.ustar2);
  sol.ndof_flux = spaces.dofs().rt.num_dofs;
  sol.ndof_scalar = spaces.dofs().dg.num_dofs;
  if (auto exact = exact_eigenpair(mesh.domain(), eigen_index)) {
    const ExactSolution aligned = align_sign(spaces, sol.pair, *exact);
    sol.errors = compute_errors(spaces, sol.pair, aligned, sol.ustar2, &sol.ustar);
  }
  return sol;
}

LevelRecord make_record(int level, const Mesh& mesh, const LevelSolution& sol, const Domain& domain,
                        int eigen_index) {
  LevelRecord rec;
  rec.level = level;
  rec.num_triangles = mesh.num_triangles();
  rec.ndof_flux = sol.ndof_flux;
  rec.ndof_scalar = sol.ndof_scalar;
  rec.lambda_h = sol.pair.lambda;
  rec.eta = sol.report.eta;
  rec.iterations = sol.pair.iterations;
  if (auto ref = reference_eigenvalue(domain, eigen_index)) rec.lambda_ref_error = std::abs(sol.pair.lambda - *ref);
  if (sol.errors) {
    rec.errors = sol.errors;
    rec.identity_residual = hypercircle_identity(sol.pair, *sol.errors);
    rec.efficiency = efficiency_index(sol.report, *sol.errors);
    rec.gap = reliability_gap(sol.report, *sol.errors);
    rec.local_slack = local_efficiency_check(sol.report, *sol.errors);
  }
  return rec;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<int> all_triangles(const Mesh& mesh) {
  std::vector<int> ids(mesh.num_triangles());
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

}  // namespace

RunRecord adaptive_loop(const Mesh& initial, const AdaptConfig& cfg, const LevelCallback& on_level) {
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw std::invalid_argument("adaptive_loop: theta must lie in (0, 1]");
  if (cfg.max_levels < 0 || cfg.max_dofs <= 0) throw std::invalid_argument("adaptive_loop: bad level/dof limits");
  RunRecord run;
  Mesh mesh = initial;
  Eigen::VectorXd warm;
  for (int level = 0;; ++level) {
    const auto start = Clock::now();
    const LevelSolution sol = solve_level(mesh, cfg.k, cfg.eigen_index, cfg.solver, warm);
    LevelRecord rec = make_record(level, mesh, sol, mesh.domain(), cfg.eigen_index);
    const bool last = level >= cfg.max_levels || rec.ndof_total() >= cfg.max_dofs;
    std::vector<int> marked;
    if (!last) marked = cfg.uniform ? all_triangles(mesh) : doerfler_mark({sol.report.local.data(), static_cast<std::size_t>(sol.report.local.size())}, cfg.theta);
    rec.marked = static_cast<int>(marked.size());
    rec.seconds = seconds_since(start);
    run.levels.push_back(rec);
    if (on_level) on_level(mesh, sol, rec);
    if (last) break;
    if (marked.empty()) {
      run.converged = true;
      break;
    }
    Mesh fine = refine(mesh, marked);
    warm = transfer_scalar(mesh, sol.pair.u, cfg.k, fine);
    mesh = std::move(fine);
  }
  run.final_mesh = std::move(mesh);
  return run;
}

RunRecord uniform_sweep(const Mesh& initial, int levels, int k, int eigen_index,
                        const SolverConfig& solver, const LevelCallback& on_level) {
  if (levels < 1) throw std::invalid_argument("uniform_sweep: need at least one level");
  RunRecord run;
  Mesh mesh = initial;
  Eigen::VectorXd warm;
  for (int level = 0; level < levels; ++level) {
    const auto start = Clock::now();
    const LevelSolution sol = solve_level(mesh, k, eigen_index, solver, warm);
    LevelRecord rec = make_record(level, mesh, sol, mesh.domain(), eigen_index);
    rec.marked = level + 1 < levels ? mesh.num_triangles() : 0;
    rec.seconds = seconds_since(start);
    run.levels.push_back(rec);
    if (on_level) on_level(mesh, sol, rec);
    if (level + 1 == levels) break;
    Mesh fine = uniform_refine(mesh);
    warm = transfer_scalar(mesh, sol.pair.u, k, fine);
    mesh = std::move(fine);
  }
  run.final_mesh = std::move(mesh);
  return run;
}

}  // namespace mixeig
