#include "mixeig/postprocess.hpp"

#include <Eigen/Dense>

#include "mixeig/error.hpp"
#include "mixeig/quadrature.hpp"

namespace mixeig {

double DgField::value(const Mesh& mesh, int t, const Eigen::Vector2d& x) const {
  return ScaledMonomials(mesh, t, degree).values(x).dot(coeffs.col(t));
}

Eigen::Vector2d DgField::gradient(const Mesh& mesh, int t, const Eigen::Vector2d& x) const {
  return ScaledMonomials(mesh, t, degree).gradients(x) * coeffs.col(t);
}

double CgField::value(const MixedSpaces& spaces, int t, const Eigen::Vector2d& ref) const {
  Eigen::RowVectorXd vals;
  Eigen::Matrix2Xd grads;
  spaces.lagrange().evaluate(ref, vals, grads);
  const int* d = spaces.dofs().cg.element_dofs(t);
  double out = 0.0;
  for (int i = 0; i < vals.size(); ++i) out += vals(i) * values(d[i]);
  return out;
}

Eigen::Vector2d CgField::gradient(const MixedSpaces& spaces, int t, const ElementGeometry& g,
                                  const Eigen::Vector2d& ref) const {
  Eigen::RowVectorXd vals;
  Eigen::Matrix2Xd grads;
  spaces.lagrange().evaluate(ref, vals, grads);
  const int* d = spaces.dofs().cg.element_dofs(t);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < vals.size(); ++i) out += values(d[i]) * grads.col(i);
  return g.inverse_transpose * out;
}

DgField post_star(const MixedSpaces& spaces, const Eigen::VectorXd& u, const Eigen::VectorXd& sigma) {
  const Mesh& mesh = spaces.mesh();
  const int k = spaces.k();
  const int low = ScaledMonomials::dim(k);
  const int full = ScaledMonomials::dim(k + 1);
  const int extra = full - low;
  const QuadratureRule& rule = triangle_quadrature(2 * k + 2);
  const DofMap& dg = spaces.dofs().dg;

  DgField out;
  out.degree = k + 1;
  out.coeffs.resize(full, mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    const ScaledMonomials basis = spaces.monomials(t, k + 1);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(full, full);
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(full, full);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(full);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = g.map(rule.points[q]);
      const double w = rule.weights[q] * g.det;
      const Eigen::RowVectorXd phi = basis.values(x);
      const Eigen::Matrix2Xd grad = basis.gradients(x);
      mass.noalias() += w * phi.transpose() * phi;
      stiff.noalias() += w * grad.transpose() * grad;
      load.noalias() += w * grad.transpose() * spaces.flux_value(sigma, t, g, rule.points[q]);
    }
    // Complement of P_k in P_{k+1}: higher monomials minus their L2(K) projection onto P_k.
    Eigen::MatrixXd complement = Eigen::MatrixXd::Zero(full, extra);
    complement.bottomRows(extra).setIdentity();
    complement.topRows(low) = -mass.topLeftCorner(low, low).ldlt().solve(mass.topRightCorner(low, extra));

    Eigen::VectorXd lifted = Eigen::VectorXd::Zero(full);
    const int* d = dg.element_dofs(t);
    for (int i = 0; i < low; ++i) lifted(i) = u(d[i]);

    const Eigen::MatrixXd lhs = complement.transpose() * stiff * complement;
    const Eigen::VectorXd rhs = complement.transpose() * (load - stiff * lifted);
    const Eigen::LLT<Eigen::MatrixXd> llt(lhs);
    if (llt.info() != Eigen::Success) throw GeometryError("post_star: singular local system");
    lifted += complement * llt.solve(rhs);
    out.coeffs.col(t) = lifted;
  }
  return out;
}

CgField oswald(const MixedSpaces& spaces, const DgField& ustar) {
  const Mesh& mesh = spaces.mesh();
  const DofMap& cg = spaces.dofs().cg;
  const auto& nodes = spaces.lagrange().nodes();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(cg.num_dofs);
  Eigen::VectorXi count = Eigen::VectorXi::Zero(cg.num_dofs);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    const int* d = cg.element_dofs(t);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sum(d[i]) += ustar.value(mesh, t, g.map(nodes[i]));
      count(d[i]) += 1;
    }
  }
  CgField out;
  out.degree = spaces.k() + 1;
  out.values = Eigen::VectorXd::Zero(cg.num_dofs);
  for (int i = 0; i < cg.num_dofs; ++i) {
    if (!cg.is_boundary[i] && count(i) > 0) out.values(i) = sum(i) / count(i);
  }
  return out;
}

}  // namespace mixeig
