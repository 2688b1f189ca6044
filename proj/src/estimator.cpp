#include "mixeig/estimator.hpp"

#include <cmath>

#include "mixeig/assembly.hpp"
#include "mixeig/error.hpp"
#include "mixeig/quadrature.hpp"

namespace mixeig {

EstimateReport estimate(const MixedSpaces& spaces, const Eigen::VectorXd& sigma, const CgField& ustar2) {
  const Mesh& mesh = spaces.mesh();
  const QuadratureRule& rule = triangle_quadrature(2 * (spaces.k() + 1));
  EstimateReport report;
  report.local.resize(mesh.num_triangles());
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    double sq = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d diff =
          ustar2.gradient(spaces, t, g, rule.points[q]) - spaces.flux_value(sigma, t, g, rule.points[q]);
      sq += rule.weights[q] * g.det * diff.squaredNorm();
    }
    report.local(t) = std::sqrt(sq);
    total += sq;
  }
  report.eta = std::sqrt(total);
  return report;
}

double ErrorBundle::total() const {
  return std::sqrt(grad_ustar2 * grad_ustar2 + sigma_l2 * sigma_l2);
}

ExactSolution align_sign(const MixedSpaces& spaces, const EigenPair& pair, const ExactSolution& exact) {
  const Mesh& mesh = spaces.mesh();
  const QuadratureRule& rule = triangle_quadrature(12);
  double inner = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = g.map(rule.points[q]);
      inner += rule.weights[q] * g.det * exact.u(x) * spaces.scalar_value(pair.u, t, x);
    }
  }
  return inner < 0.0 ? exact.negated() : exact;
}

ErrorBundle compute_errors(const MixedSpaces& spaces, const EigenPair& pair, const ExactSolution& exact,
                           const CgField& ustar2, const DgField* ustar) {
  const Mesh& mesh = spaces.mesh();
  const QuadratureRule& rule = triangle_quadrature(12);
  const Eigen::VectorXd projected = l2_project(spaces, exact.u);
  const double lh = pair.lambda;

  ErrorBundle e;
  e.lambda = exact.lambda;
  e.lambda_error = std::abs(exact.lambda - lh);
  e.grad_ustar2_local.resize(mesh.num_triangles());
  e.sigma_local.resize(mesh.num_triangles());
  double u_sq = 0, sigma_sq = 0, grad_sq = 0, u2_sq = 0, u1_sq = 0, proj_sq = 0, lu_sq = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    double grad_local = 0, sigma_loc = 0;
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d& ref = rule.points[q];
      const Eigen::Vector2d x = g.map(ref);
      const double w = rule.weights[q] * g.det;
      const double u = exact.u(x);
      const Eigen::Vector2d sigma = exact.sigma(x);
      const double uh = spaces.scalar_value(pair.u, t, x);
      const double ph = spaces.scalar_value(projected, t, x);
      const Eigen::Vector2d sh = spaces.flux_value(pair.sigma, t, g, ref);
      const Eigen::Vector2d grad2 = ustar2.gradient(spaces, t, g, ref);
      const double u2 = ustar2.value(spaces, t, ref);

      u_sq += w * (u - uh) * (u - uh);
      sigma_loc += w * (sigma - sh).squaredNorm();
      grad_local += w * (sigma - grad2).squaredNorm();
      u2_sq += w * (u - u2) * (u - u2);
      proj_sq += w * (ph - uh) * (ph - uh);
      lu_sq += w * (exact.lambda * u - lh * uh) * (exact.lambda * u - lh * uh);
      if (ustar) {
        const double u1 = ustar->value(mesh, t, x);
        u1_sq += w * (u - u1) * (u - u1);
      }
    }
    e.grad_ustar2_local(t) = std::sqrt(grad_local);
    e.sigma_local(t) = std::sqrt(sigma_loc);
    sigma_sq += sigma_loc;
    grad_sq += grad_local;
  }
  e.u_l2 = std::sqrt(u_sq);
  e.sigma_l2 = std::sqrt(sigma_sq);
  e.grad_ustar2 = std::sqrt(grad_sq);
  e.u_ustar2 = std::sqrt(u2_sq);
  e.u_ustar = std::sqrt(u1_sq);
  e.projection_l2 = std::sqrt(proj_sq);
  e.lambda_u_l2 = std::sqrt(lu_sq);
  return e;
}

ErrorBundle compute_errors(const MixedSpaces& spaces, const EigenPair& pair,
                           const std::optional<ExactSolution>& exact, const CgField& ustar2,
                           const DgField* ustar) {
  if (!exact) throw MissingExactSolution("no analytic eigenpair is known for this domain/index");
  return compute_errors(spaces, pair, *exact, ustar2, ustar);
}

double hypercircle_identity(const EigenPair& pair, const ErrorBundle& errors) {
  return hypercircle_identity(errors.lambda, pair.lambda, errors.sigma_l2, errors.u_l2);
}

std::optional<double> efficiency_index(const EstimateReport& report, const ErrorBundle& errors) {
  const double err = errors.total();
  if (err == 0.0) return std::nullopt;
  return report.eta / err;
}

ReliabilityGap reliability_gap(const EstimateReport& report, const ErrorBundle& errors) {
  const double err = errors.total();
  ReliabilityGap r;
  r.gap = err - report.eta;
  const double denom = err + report.eta;
  r.bound = denom > 0.0 ? 2.0 * errors.u_ustar2 * errors.lambda_u_l2 / denom : 0.0;
  return r;
}

double local_efficiency_check(const EstimateReport& report, const ErrorBundle& errors) {
  const Eigen::VectorXd slack = errors.grad_ustar2_local + errors.sigma_local - report.local;
  const double worst = slack.size() > 0 ? slack.minCoeff() : 0.0;
  if (worst < -1e-10) throw Error("local efficiency violated: eta(K) exceeds the triangle-inequality bound");
  return worst;
}

}  // namespace mixeig
