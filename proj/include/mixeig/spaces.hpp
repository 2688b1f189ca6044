#pragma once

#include <vector>

#include <Eigen/Core>

#include "mixeig/mesh.hpp"

namespace mixeig {

/// Affine map x = origin + J * xhat from the reference triangle onto one element.
struct ElementGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse_transpose;  // J^{-T}
  double det = 0.0;

  // Throws GeometryError when |det J| <= 1e-12 times the squared longest edge.
  static ElementGeometry of(const Mesh& mesh, int t);
  static ElementGeometry from_vertices(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                       const Eigen::Vector2d& c);

  Eigen::Vector2d map(const Eigen::Vector2d& ref) const { return origin + jacobian * ref; }
  Eigen::Vector2d inverse_map(const Eigen::Vector2d& x) const {
    return inverse_transpose.transpose() * (x - origin);
  }
  double area() const { return 0.5 * det; }
};

// Contravariant Piola transform of a reference vector value: J v / det J.
inline Eigen::Vector2d piola(const ElementGeometry& g, const Eigen::Vector2d& ref_value) {
  return g.jacobian * ref_value / g.det;
}
inline double piola_div(const ElementGeometry& g, double ref_div) { return ref_div / g.det; }

/// Raviart-Thomas element of order k in {0, 1} on the reference triangle.
///
/// Local dofs: for each local edge e, (k+1) normal moments against shifted
/// Legendre polynomials along the edge (oriented v[e+1] -> v[e+2], outward
/// normal), then for k = 1 two interior moments against the constant fields
/// e_x and e_y. Basis functions are dual to these functionals.
class RaviartThomas {
 public:
  explicit RaviartThomas(int k);

  int order() const { return k_; }
  int dim() const { return (k_ + 1) * (k_ + 3); }
  int edge_dofs() const { return k_ + 1; }
  int interior_dofs() const { return k_ * (k_ + 1); }

  // Reference values (2 x dim) and divergences (dim).
  void evaluate(const Eigen::Vector2d& p, Eigen::Matrix2Xd& values,
                Eigen::RowVectorXd& divergence) const;

  // Applies every dof functional to the raw-basis fields; identity once
  // composed with `coefficients()`.
  Eigen::MatrixXd dof_matrix() const;
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }

 private:
  void evaluate_raw(const Eigen::Vector2d& p, Eigen::Matrix2Xd& values,
                    Eigen::RowVectorXd& divergence) const;

  int k_;
  Eigen::MatrixXd coeffs_;  // raw -> nodal
};

struct RtBasisValue {
  Eigen::Vector2d value;
  double divergence;
};
std::vector<RtBasisValue> rt_basis(int k, const Eigen::Vector2d& p);

/// Lagrange element of degree m in {1, 2} with equispaced nodes.
/// Node order: vertices 0..2, then (m = 2) midpoints of local edges 0..2.
class Lagrange {
 public:
  explicit Lagrange(int degree);

  int degree() const { return m_; }
  int dim() const { return (m_ + 1) * (m_ + 2) / 2; }
  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }

  void evaluate(const Eigen::Vector2d& p, Eigen::RowVectorXd& values,
                Eigen::Matrix2Xd& gradients) const;

 private:
  int m_;
  std::vector<Eigen::Vector2d> nodes_;
};

struct LagrangeValue {
  double value;
  Eigen::Vector2d gradient;
};
std::vector<LagrangeValue> lagrange_basis(int degree, const Eigen::Vector2d& p);

/// Monomials (x - c)^i (y - c)^j / h^(i+j) on one physical element, with c the
/// centroid and h the diameter. Ordered by total degree: 1, X, Y, X^2, XY, Y^2.
class ScaledMonomials {
 public:
  ScaledMonomials(const Mesh& mesh, int t, int degree);
  ScaledMonomials(Eigen::Vector2d center, double scale, int degree);

  static int dim(int degree) { return (degree + 1) * (degree + 2) / 2; }
  int degree() const { return degree_; }
  int size() const { return dim(degree_); }

  Eigen::RowVectorXd values(const Eigen::Vector2d& x) const;
  Eigen::Matrix2Xd gradients(const Eigen::Vector2d& x) const;

 private:
  Eigen::Vector2d center_;
  double scale_;
  int degree_;
};

enum class SpaceKind { RaviartThomas, DiscontinuousP, ContinuousP };

/// Element-to-global dof table. `dofs` and `signs` are stored per triangle,
/// `local_dim` entries each.
struct DofMap {
  SpaceKind kind = SpaceKind::DiscontinuousP;
  int degree = 0;
  int local_dim = 0;
  int num_dofs = 0;
  std::vector<int> dofs;
  std::vector<double> signs;          // RT orientation signs, 1 otherwise
  std::vector<char> is_boundary;      // continuous space only, per global dof
  std::vector<int> boundary_dofs;     // continuous space only

  const int* element_dofs(int t) const { return dofs.data() + static_cast<std::size_t>(t) * local_dim; }
  const double* element_signs(int t) const { return signs.data() + static_cast<std::size_t>(t) * local_dim; }
  int num_free() const { return num_dofs - static_cast<int>(boundary_dofs.size()); }
};

struct DofMaps {
  DofMap rt;       // RT_k flux space
  DofMap dg;       // discontinuous P_k
  DofMap dg_post;  // discontinuous P_{k+1}
  DofMap cg;       // continuous P_{k+1}, boundary nodes flagged
};

DofMaps build_dofmaps(const Mesh& mesh, int k);

/// Mesh, polynomial order and every discrete space of the mixed method.
/// Holds a reference to the mesh, which must outlive this object.
class MixedSpaces {
 public:
  MixedSpaces(const Mesh& mesh, int k);

  const Mesh& mesh() const { return *mesh_; }
  int k() const { return k_; }
  const DofMaps& dofs() const { return dofs_; }
  const RaviartThomas& rt() const { return rt_; }
  const Lagrange& lagrange() const { return lagrange_; }

  ElementGeometry geometry(int t) const { return ElementGeometry::of(*mesh_, t); }
  ScaledMonomials monomials(int t, int degree) const { return ScaledMonomials(*mesh_, t, degree); }

  // Physical RT basis (signs applied) on element t at a reference point.
  void flux_basis(const ElementGeometry& g, int t, const Eigen::Vector2d& ref,
                  Eigen::Matrix2Xd& values, Eigen::RowVectorXd& divergence) const;

  Eigen::Vector2d flux_value(const Eigen::VectorXd& sigma, int t, const ElementGeometry& g,
                             const Eigen::Vector2d& ref) const;
  double flux_divergence(const Eigen::VectorXd& sigma, int t, const ElementGeometry& g,
                         const Eigen::Vector2d& ref) const;
  double scalar_value(const Eigen::VectorXd& u, int t, const Eigen::Vector2d& x) const;

 private:
  const Mesh* mesh_;
  int k_;
  DofMaps dofs_;
  RaviartThomas rt_;
  Lagrange lagrange_;
};

}  // namespace mixeig
