#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mixeig/eigensolver.hpp"
#include "mixeig/estimator.hpp"
#include "mixeig/mesh.hpp"
#include "mixeig/postprocess.hpp"

namespace mixeig {

// Smallest set of elements, taken by descending eta(K) (ties: ascending id),
// whose squared indicators reach theta^2 of the total. Elements with
// eta(K) = 0 are never marked; an all-zero input yields an empty set.
std::vector<int> doerfler_mark(std::span<const double> etas, double theta);

/// Everything computed on one mesh: eigenpair, both postprocessed fields,
/// the estimator and, when an analytic solution is known, the errors.
struct LevelSolution {
  EigenPair pair;
  DgField ustar;
  CgField ustar2;
  EstimateReport report;
  std::optional<ErrorBundle> errors;
  int ndof_flux = 0;
  int ndof_scalar = 0;
};

// Solves the eigenproblem on `mesh` and selects the pair at 1-based
// `eigen_index`; `warm` seeds the eigensolver subspace.
LevelSolution solve_level(const Mesh& mesh, int k, int eigen_index, const SolverConfig& solver,
                          const Eigen::VectorXd& warm = {});

// Elementwise L2 projection of a P_k field on `coarse` onto `fine`, whose
// parents() refer to triangles of `coarse`.
Eigen::VectorXd transfer_scalar(const Mesh& coarse, const Eigen::VectorXd& u, int k, const Mesh& fine);

struct AdaptConfig {
  double theta = 0.5;
  int max_levels = 19;     // refinement steps
  long max_dofs = 2'000'000;
  int eigen_index = 1;
  int k = 0;
  bool uniform = false;    // refine every element instead of marking
  SolverConfig solver;
};

/// One row of the adaptive history.
struct LevelRecord {
  int level = 0;
  int num_triangles = 0;
  int ndof_flux = 0;
  int ndof_scalar = 0;
  double lambda_h = 0.0;
  double eta = 0.0;
  std::optional<double> lambda_ref_error;  // |lambda_h - lambda_ref| when a reference exists
  std::optional<ErrorBundle> errors;
  std::optional<double> identity_residual;
  std::optional<double> efficiency;
  std::optional<ReliabilityGap> gap;
  std::optional<double> local_slack;
  int marked = 0;
  int iterations = 0;
  double seconds = 0.0;

  long ndof_total() const { return static_cast<long>(ndof_flux) + ndof_scalar; }
};

struct RunRecord {
  std::vector<LevelRecord> levels;
  bool converged = false;  // marking returned an empty set
  Mesh final_mesh;
};

using LevelCallback = std::function<void(const Mesh&, const LevelSolution&, const LevelRecord&)>;

// Fills the diagnostic fields of a record from a solved level.
LevelRecord make_record(int level, const Mesh& mesh, const LevelSolution& sol, const Domain& domain,
                        int eigen_index);

// solve -> post_star -> oswald -> estimate -> mark -> refine until max_levels
// refinements or max_dofs. `on_level` runs after every solve.
RunRecord adaptive_loop(const Mesh& initial, const AdaptConfig& cfg, const LevelCallback& on_level = {});

// `levels` meshes: initial followed by repeated uniform_refine.
RunRecord uniform_sweep(const Mesh& initial, int levels, int k, int eigen_index,
                        const SolverConfig& solver, const LevelCallback& on_level = {});

}  // namespace mixeig
