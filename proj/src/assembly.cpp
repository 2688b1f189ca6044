#include "mixeig/assembly.hpp"

#include <vector>

#include <Eigen/Dense>

#include "mixeig/quadrature.hpp"

namespace mixeig {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& out, const int* rows, const int* cols, const Eigen::MatrixXd& local) {
  for (Eigen::Index i = 0; i < local.rows(); ++i) {
    for (Eigen::Index j = 0; j < local.cols(); ++j) {
      if (local(i, j) != 0.0) out.emplace_back(rows[i], cols[j], local(i, j));
    }
  }
}

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(0.0);
  return m;
}

}  // namespace

SparseMatrix assemble_flux_mass(const MixedSpaces& spaces) {
  const Mesh& mesh = spaces.mesh();
  const DofMap& rt = spaces.dofs().rt;
  const QuadratureRule& rule = triangle_quadrature(2 * spaces.k() + 2);
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_triangles()) * rt.local_dim * rt.local_dim);
  Eigen::Matrix2Xd vals;
  Eigen::RowVectorXd divs;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(rt.local_dim, rt.local_dim);
    for (int q = 0; q < rule.size(); ++q) {
      spaces.flux_basis(g, t, rule.points[q], vals, divs);
      local.noalias() += (rule.weights[q] * g.det) * vals.transpose() * vals;
    }
    scatter(trip, rt.element_dofs(t), rt.element_dofs(t), local);
  }
  return from_triplets(rt.num_dofs, rt.num_dofs, trip);
}

SparseMatrix assemble_div(const MixedSpaces& spaces) {
  const Mesh& mesh = spaces.mesh();
  const DofMap& rt = spaces.dofs().rt;
  const DofMap& dg = spaces.dofs().dg;
  const QuadratureRule& rule = triangle_quadrature(std::max(1, 2 * spaces.k()));
  Triplets trip;
  Eigen::Matrix2Xd vals;
  Eigen::RowVectorXd divs;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    const ScaledMonomials basis = spaces.monomials(t, spaces.k());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(dg.local_dim, rt.local_dim);
    for (int q = 0; q < rule.size(); ++q) {
      spaces.flux_basis(g, t, rule.points[q], vals, divs);
      const Eigen::RowVectorXd phi = basis.values(g.map(rule.points[q]));
      local.noalias() += (rule.weights[q] * g.det) * phi.transpose() * divs;
    }
    scatter(trip, dg.element_dofs(t), rt.element_dofs(t), local);
  }
  return from_triplets(dg.num_dofs, rt.num_dofs, trip);
}

SparseMatrix assemble_scalar_mass(const MixedSpaces& spaces) {
  const Mesh& mesh = spaces.mesh();
  const DofMap& dg = spaces.dofs().dg;
  const QuadratureRule& rule = triangle_quadrature(std::max(1, 2 * spaces.k()));
  Triplets trip;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    const ScaledMonomials basis = spaces.monomials(t, spaces.k());
    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(dg.local_dim, dg.local_dim);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::RowVectorXd phi = basis.values(g.map(rule.points[q]));
      local.noalias() += (rule.weights[q] * g.det) * phi.transpose() * phi;
    }
    scatter(trip, dg.element_dofs(t), dg.element_dofs(t), local);
  }
  return from_triplets(dg.num_dofs, dg.num_dofs, trip);
}

MixedOperators assemble_mixed(const MixedSpaces& spaces) {
  MixedOperators ops{assemble_flux_mass(spaces), assemble_div(spaces), assemble_scalar_mass(spaces),
                     Eigen::VectorXd::Zero(spaces.dofs().dg.num_dofs)};
  const int dim = spaces.dofs().dg.local_dim;
  for (int t = 0; t < spaces.mesh().num_triangles(); ++t) ops.constant_one(t * dim) = 1.0;
  return ops;
}

Eigen::VectorXd l2_project(const MixedSpaces& spaces, const ScalarFunction& f, int degree) {
  const Mesh& mesh = spaces.mesh();
  const int dim = ScaledMonomials::dim(degree);
  const QuadratureRule& rule = triangle_quadrature(12);
  Eigen::VectorXd out(static_cast<Eigen::Index>(mesh.num_triangles()) * dim);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    const ScaledMonomials basis = spaces.monomials(t, degree);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = g.map(rule.points[q]);
      const Eigen::RowVectorXd phi = basis.values(x);
      const double w = rule.weights[q] * g.det;
      mass.noalias() += w * phi.transpose() * phi;
      rhs += (w * f(x)) * phi.transpose();
    }
    out.segment(static_cast<Eigen::Index>(t) * dim, dim) = mass.ldlt().solve(rhs);
  }
  return out;
}

Eigen::VectorXd rt_interpolate(const MixedSpaces& spaces, const VectorFunction& f) {
  const Mesh& mesh = spaces.mesh();
  const DofMap& rt = spaces.dofs().rt;
  const int k = spaces.k();
  const LineRule line = gauss_legendre(10);
  const QuadratureRule& rule = triangle_quadrature(12);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rt.num_dofs);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = spaces.geometry(t);
    const auto& v = mesh.triangles()[t].v;
    const int* d = rt.element_dofs(t);
    const double* s = rt.element_signs(t);
    for (int e = 0; e < 3; ++e) {
      const Eigen::Vector2d start = mesh.point(v[(e + 1) % 3]);
      const Eigen::Vector2d tangent = mesh.point(v[(e + 2) % 3]) - start;
      const Eigen::Vector2d scaled_normal(tangent.y(), -tangent.x());
      for (int j = 0; j <= k; ++j) {
        double moment = 0.0;
        for (std::size_t q = 0; q < line.points.size(); ++q) {
          const double tau = line.points[q];
          const double leg = j == 0 ? 1.0 : 2.0 * tau - 1.0;
          moment += line.weights[q] * leg * f(start + tau * tangent).dot(scaled_normal);
        }
        out(d[e * (k + 1) + j]) = s[e * (k + 1) + j] * moment;
      }
    }
    if (k == 1) {
      // Interior functionals act on the Piola pull-back det J * J^{-1} f.
      Eigen::Vector2d moment = Eigen::Vector2d::Zero();
      for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d x = g.map(rule.points[q]);
        moment += rule.weights[q] * g.det * (g.inverse_transpose.transpose() * f(x));
      }
      out(d[6]) = moment.x();
      out(d[7]) = moment.y();
    }
  }
  return out;
}

}  // namespace mixeig
