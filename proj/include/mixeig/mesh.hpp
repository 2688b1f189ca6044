#pragma once

#include <array>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace mixeig {

enum class DomainKind { Square, LShape };

// Square [0,L]^2 or the L-shape [-1,1]^2 \ [0,1]^2.
struct Domain {
  DomainKind kind = DomainKind::Square;
  double length = std::numbers::pi;

  static Domain square(double length = std::numbers::pi) { return {DomainKind::Square, length}; }
  static Domain lshape() { return {DomainKind::LShape, 2.0}; }

  double area() const;
};

struct Vertex {
  Eigen::Vector2d p;
  bool on_boundary = false;
};

// Local edge i is the edge opposite local vertex i, running from v[i+1] to v[i+2].
struct Triangle {
  std::array<int, 3> v{};
  int refinement_edge = 0;
  int generation = 0;
};

struct Edge {
  std::array<int, 2> v{};          // sorted
  std::array<int, 2> tri{-1, -1};  // tri[1] == -1 on the boundary
  bool on_boundary = false;
  double length = 0.0;
};

/// Conforming triangulation of a 2D domain.
///
/// Immutable after construction; edges, boundary flags and the
/// triangle-to-edge table are derived from the triangle list. Refinement
/// returns a new mesh whose `parents()` map each triangle to the triangle of
/// the previous mesh that contains it.
class Mesh {
 public:
  Mesh() = default;
  Mesh(Domain domain, std::vector<Eigen::Vector2d> points, std::vector<Triangle> triangles,
       std::vector<int> parents = {});

  const Domain& domain() const { return domain_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& parents() const { return parents_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Eigen::Vector2d& point(int vertex) const { return vertices_[vertex].p; }
  // Global edge ids of the three local edges of triangle t.
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }

  double area(int t) const;
  double diameter(int t) const;
  double min_angle(int t) const;
  Eigen::Vector2d centroid(int t) const;

  // Vertex at the reentrant corner of the L-shape, if any.
  std::optional<int> reentrant_corner() const;

 private:
  void build_topology();

  Domain domain_;
  std::vector<Vertex> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<int> parents_;
};

struct MeshCheck {
  bool conforming = true;
  bool positive_areas = true;
  int euler_characteristic = 0;  // V - E + T
  double total_area = 0.0;
};

// Topological and geometric invariants of a mesh.
MeshCheck check_mesh(const Mesh& mesh);

Mesh generate_square(int n, double length = std::numbers::pi);
Mesh generate_lshape(int n);

// Newest-vertex bisection of the marked triangles plus conforming closure.
Mesh refine(const Mesh& mesh, std::span<const int> marked);
// Every triangle split into four children (two bisection sweeps).
Mesh uniform_refine(const Mesh& mesh);

// Text dump: header line, then `v x y b`, `t i j k r g`, `e i j b` records.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace mixeig
