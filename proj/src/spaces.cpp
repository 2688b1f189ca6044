#include "mixeig/spaces.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "mixeig/error.hpp"
#include "mixeig/quadrature.hpp"

namespace mixeig {

ElementGeometry ElementGeometry::from_vertices(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                               const Eigen::Vector2d& c) {
  ElementGeometry g;
  g.origin = a;
  g.jacobian.col(0) = b - a;
  g.jacobian.col(1) = c - a;
  g.det = g.jacobian.determinant();
  const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), (c - b).squaredNorm()});
  if (!(std::abs(g.det) > 1e-12 * scale)) throw GeometryError("degenerate element: |det J| below 1e-12 h^2");
  g.inverse_transpose = g.jacobian.inverse().transpose();
  return g;
}

ElementGeometry ElementGeometry::of(const Mesh& mesh, int t) {
  const auto& v = mesh.triangles()[t].v;
  return from_vertices(mesh.point(v[0]), mesh.point(v[1]), mesh.point(v[2]));
}

// ---------------------------------------------------------------------------
// Raviart-Thomas

namespace {

const std::array<Eigen::Vector2d, 3> kRefVertices = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0),
                                                     Eigen::Vector2d(0, 1)};

// Shifted Legendre polynomial of degree j on [0,1].
double legendre01(int j, double s) { return j == 0 ? 1.0 : 2.0 * s - 1.0; }

}  // namespace

RaviartThomas::RaviartThomas(int k) : k_(k) {
  if (k != 0 && k != 1) throw std::invalid_argument("RaviartThomas: only k = 0 and k = 1 are supported");
  coeffs_ = Eigen::MatrixXd::Identity(dim(), dim());
  coeffs_ = dof_matrix().inverse();
}

void RaviartThomas::evaluate_raw(const Eigen::Vector2d& p, Eigen::Matrix2Xd& values,
                                 Eigen::RowVectorXd& divergence) const {
  const double x = p.x(), y = p.y();
  values.resize(2, dim());
  divergence.resize(dim());
  if (k_ == 0) {
    values << 1, 0, x,
              0, 1, y;
    divergence << 0, 0, 2;
  } else {
    values << 1, x, y, 0, 0, 0, x * x, x * y,
              0, 0, 0, 1, x, y, x * y, y * y;
    divergence << 0, 1, 0, 0, 0, 1, 3 * x, 3 * y;
  }
}

Eigen::MatrixXd RaviartThomas::dof_matrix() const {
  const int n = dim();
  Eigen::MatrixXd dofs = Eigen::MatrixXd::Zero(n, n);
  Eigen::Matrix2Xd vals;
  Eigen::RowVectorXd divs;
  const LineRule line = gauss_legendre(k_ + 2);
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d start = kRefVertices[(e + 1) % 3];
    const Eigen::Vector2d tangent = kRefVertices[(e + 2) % 3] - start;
    // Outward normal scaled by the edge length (ds = |t| dtau).
    const Eigen::Vector2d scaled_normal(tangent.y(), -tangent.x());
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const double s = line.points[q];
      evaluate_raw(start + s * tangent, vals, divs);
      vals = vals * coeffs_;
      const Eigen::RowVectorXd flux = scaled_normal.transpose() * vals;
      for (int j = 0; j <= k_; ++j) {
        dofs.row(e * (k_ + 1) + j) += line.weights[q] * legendre01(j, s) * flux;
      }
    }
  }
  if (k_ == 1) {
    const QuadratureRule& rule = triangle_quadrature(2);
    for (int q = 0; q < rule.size(); ++q) {
      evaluate_raw(rule.points[q], vals, divs);
      vals = vals * coeffs_;
      dofs.row(6) += rule.weights[q] * vals.row(0);
      dofs.row(7) += rule.weights[q] * vals.row(1);
    }
  }
  return dofs;
}

void RaviartThomas::evaluate(const Eigen::Vector2d& p, Eigen::Matrix2Xd& values,
                             Eigen::RowVectorXd& divergence) const {
  Eigen::Matrix2Xd raw;
  Eigen::RowVectorXd raw_div;
  evaluate_raw(p, raw, raw_div);
  values = raw * coeffs_;
  divergence = raw_div * coeffs_;
}

std::vector<RtBasisValue> rt_basis(int k, const Eigen::Vector2d& p) {
  const RaviartThomas rt(k);
  Eigen::Matrix2Xd vals;
  Eigen::RowVectorXd divs;
  rt.evaluate(p, vals, divs);
  std::vector<RtBasisValue> out(rt.dim());
  for (int i = 0; i < rt.dim(); ++i) out[i] = {vals.col(i), divs(i)};
  return out;
}

// ---------------------------------------------------------------------------
// Lagrange

Lagrange::Lagrange(int degree) : m_(degree) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("Lagrange: only degrees 1 and 2 are supported");
  nodes_.assign(kRefVertices.begin(), kRefVertices.end());
  if (m_ == 2) {
    for (int e = 0; e < 3; ++e) {
      nodes_.push_back(0.5 * (kRefVertices[(e + 1) % 3] + kRefVertices[(e + 2) % 3]));
    }
  }
}

void Lagrange::evaluate(const Eigen::Vector2d& p, Eigen::RowVectorXd& values,
                        Eigen::Matrix2Xd& gradients) const {
  const std::array<double, 3> l = {1.0 - p.x() - p.y(), p.x(), p.y()};
  const std::array<Eigen::Vector2d, 3> dl = {Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 0),
                                             Eigen::Vector2d(0, 1)};
  values.resize(dim());
  gradients.resize(2, dim());
  if (m_ == 1) {
    for (int i = 0; i < 3; ++i) {
      values(i) = l[i];
      gradients.col(i) = dl[i];
    }
    return;
  }
  for (int i = 0; i < 3; ++i) {
    values(i) = l[i] * (2.0 * l[i] - 1.0);
    gradients.col(i) = (4.0 * l[i] - 1.0) * dl[i];
  }
  for (int e = 0; e < 3; ++e) {
    const int a = (e + 1) % 3, b = (e + 2) % 3;
    values(3 + e) = 4.0 * l[a] * l[b];
    gradients.col(3 + e) = 4.0 * (l[a] * dl[b] + l[b] * dl[a]);
  }
}

std::vector<LagrangeValue> lagrange_basis(int degree, const Eigen::Vector2d& p) {
  const Lagrange element(degree);
  Eigen::RowVectorXd vals;
  Eigen::Matrix2Xd grads;
  element.evaluate(p, vals, grads);
  std::vector<LagrangeValue> out(element.dim());
  for (int i = 0; i < element.dim(); ++i) out[i] = {vals(i), grads.col(i)};
  return out;
}

// ---------------------------------------------------------------------------
// Scaled monomials

ScaledMonomials::ScaledMonomials(const Mesh& mesh, int t, int degree)
    : ScaledMonomials(mesh.centroid(t), mesh.diameter(t), degree) {}

ScaledMonomials::ScaledMonomials(Eigen::Vector2d center, double scale, int degree)
    : center_(std::move(center)), scale_(scale), degree_(degree) {
  if (degree < 0 || degree > 2) throw std::invalid_argument("ScaledMonomials: degree must be in [0, 2]");
}

Eigen::RowVectorXd ScaledMonomials::values(const Eigen::Vector2d& x) const {
  const Eigen::Vector2d r = (x - center_) / scale_;
  Eigen::RowVectorXd v(size());
  v(0) = 1.0;
  if (degree_ >= 1) {
    v(1) = r.x();
    v(2) = r.y();
  }
  if (degree_ >= 2) {
    v(3) = r.x() * r.x();
    v(4) = r.x() * r.y();
    v(5) = r.y() * r.y();
  }
  return v;
}

Eigen::Matrix2Xd ScaledMonomials::gradients(const Eigen::Vector2d& x) const {
  const Eigen::Vector2d r = (x - center_) / scale_;
  Eigen::Matrix2Xd g = Eigen::Matrix2Xd::Zero(2, size());
  if (degree_ >= 1) {
    g(0, 1) = 1.0;
    g(1, 2) = 1.0;
  }
  if (degree_ >= 2) {
    g(0, 3) = 2.0 * r.x();
    g(0, 4) = r.y();
    g(1, 4) = r.x();
    g(1, 5) = 2.0 * r.y();
  }
  return g / scale_;
}

// ---------------------------------------------------------------------------
// Dof maps

namespace {

DofMap discontinuous_map(const Mesh& mesh, int degree) {
  DofMap map;
  map.kind = SpaceKind::DiscontinuousP;
  map.degree = degree;
  map.local_dim = ScaledMonomials::dim(degree);
  map.num_dofs = mesh.num_triangles() * map.local_dim;
  map.dofs.resize(map.num_dofs);
  for (int i = 0; i < map.num_dofs; ++i) map.dofs[i] = i;
  map.signs.assign(map.num_dofs, 1.0);
  return map;
}

}  // namespace

DofMaps build_dofmaps(const Mesh& mesh, int k) {
  if (k != 0 && k != 1) throw std::invalid_argument("build_dofmaps: k must be 0 or 1");
  const int nt = mesh.num_triangles();
  const int ne = mesh.num_edges();
  const int nv = mesh.num_vertices();
  DofMaps maps;

  DofMap& rt = maps.rt;
  rt.kind = SpaceKind::RaviartThomas;
  rt.degree = k;
  rt.local_dim = (k + 1) * (k + 3);
  const int per_edge = k + 1;
  const int per_cell = k * (k + 1);
  rt.num_dofs = per_edge * ne + per_cell * nt;
  rt.dofs.resize(static_cast<std::size_t>(nt) * rt.local_dim);
  rt.signs.resize(rt.dofs.size());
  for (int t = 0; t < nt; ++t) {
    const auto& v = mesh.triangles()[t].v;
    int* d = rt.dofs.data() + static_cast<std::size_t>(t) * rt.local_dim;
    double* s = rt.signs.data() + static_cast<std::size_t>(t) * rt.local_dim;
    for (int e = 0; e < 3; ++e) {
      // Global edge orientation runs from the lower to the higher vertex id;
      // the local (counterclockwise) traversal agrees when v[e+1] < v[e+2].
      const double orient = v[(e + 1) % 3] < v[(e + 2) % 3] ? 1.0 : -1.0;
      const int edge = mesh.triangle_edges(t)[e];
      for (int j = 0; j < per_edge; ++j) {
        d[e * per_edge + j] = edge * per_edge + j;
        // Normal flips with the orientation; odd Legendre moments flip again
        // with the parameter direction.
        s[e * per_edge + j] = (j % 2 == 0) ? orient : 1.0;
      }
    }
    for (int i = 0; i < per_cell; ++i) {
      d[3 * per_edge + i] = per_edge * ne + per_cell * t + i;
      s[3 * per_edge + i] = 1.0;
    }
  }

  maps.dg = discontinuous_map(mesh, k);
  maps.dg_post = discontinuous_map(mesh, k + 1);

  DofMap& cg = maps.cg;
  cg.kind = SpaceKind::ContinuousP;
  cg.degree = k + 1;
  cg.local_dim = (k + 2) * (k + 3) / 2;
  cg.num_dofs = nv + (k == 1 ? ne : 0);
  cg.dofs.resize(static_cast<std::size_t>(nt) * cg.local_dim);
  cg.signs.assign(cg.dofs.size(), 1.0);
  for (int t = 0; t < nt; ++t) {
    int* d = cg.dofs.data() + static_cast<std::size_t>(t) * cg.local_dim;
    for (int i = 0; i < 3; ++i) d[i] = mesh.triangles()[t].v[i];
    if (k == 1) {
      for (int e = 0; e < 3; ++e) d[3 + e] = nv + mesh.triangle_edges(t)[e];
    }
  }
  cg.is_boundary.assign(cg.num_dofs, 0);
  for (int i = 0; i < nv; ++i) cg.is_boundary[i] = mesh.vertices()[i].on_boundary;
  if (k == 1) {
    for (int e = 0; e < ne; ++e) cg.is_boundary[nv + e] = mesh.edges()[e].on_boundary;
  }
  for (int i = 0; i < cg.num_dofs; ++i) {
    if (cg.is_boundary[i]) cg.boundary_dofs.push_back(i);
  }
  return maps;
}

// ---------------------------------------------------------------------------
// MixedSpaces

MixedSpaces::MixedSpaces(const Mesh& mesh, int k)
    : mesh_(&mesh), k_(k), dofs_(build_dofmaps(mesh, k)), rt_(k), lagrange_(k + 1) {}

void MixedSpaces::flux_basis(const ElementGeometry& g, int t, const Eigen::Vector2d& ref,
                             Eigen::Matrix2Xd& values, Eigen::RowVectorXd& divergence) const {
  rt_.evaluate(ref, values, divergence);
  const double* s = dofs_.rt.element_signs(t);
  for (int i = 0; i < rt_.dim(); ++i) {
    values.col(i) = s[i] * piola(g, values.col(i));
    divergence(i) = s[i] * piola_div(g, divergence(i));
  }
}

Eigen::Vector2d MixedSpaces::flux_value(const Eigen::VectorXd& sigma, int t,
                                        const ElementGeometry& g, const Eigen::Vector2d& ref) const {
  Eigen::Matrix2Xd vals;
  Eigen::RowVectorXd divs;
  flux_basis(g, t, ref, vals, divs);
  const int* d = dofs_.rt.element_dofs(t);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < rt_.dim(); ++i) out += sigma(d[i]) * vals.col(i);
  return out;
}

double MixedSpaces::flux_divergence(const Eigen::VectorXd& sigma, int t, const ElementGeometry& g,
                                    const Eigen::Vector2d& ref) const {
  Eigen::Matrix2Xd vals;
  Eigen::RowVectorXd divs;
  flux_basis(g, t, ref, vals, divs);
  const int* d = dofs_.rt.element_dofs(t);
  double out = 0.0;
  for (int i = 0; i < rt_.dim(); ++i) out += sigma(d[i]) * divs(i);
  return out;
}

double MixedSpaces::scalar_value(const Eigen::VectorXd& u, int t, const Eigen::Vector2d& x) const {
  const ScaledMonomials basis = monomials(t, k_);
  const int* d = dofs_.dg.element_dofs(t);
  const Eigen::RowVectorXd vals = basis.values(x);
  double out = 0.0;
  for (int i = 0; i < basis.size(); ++i) out += u(d[i]) * vals(i);
  return out;
}

}  // namespace mixeig
