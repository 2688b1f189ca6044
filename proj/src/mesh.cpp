#include "mixeig/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "mixeig/error.hpp"

namespace mixeig {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

// Longest edge, ties broken by the smallest opposite vertex id.
int longest_edge(const Triangle& tri, const std::vector<Eigen::Vector2d>& pts) {
  int best = -1;
  double best_len = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double len = (pts[tri.v[(i + 1) % 3]] - pts[tri.v[(i + 2) % 3]]).norm();
    const double tol = 1e-12 * std::max(len, best_len);
    if (best < 0 || len > best_len + tol ||
        (std::abs(len - best_len) <= tol && tri.v[i] < tri.v[best])) {
      best = i;
      best_len = std::max(len, best_len);
    }
  }
  return best;
}

bool on_domain_boundary(const Domain& domain, const Eigen::Vector2d& p) {
  const double tol = 1e-10 * std::max(1.0, domain.length);
  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  if (domain.kind == DomainKind::Square) {
    const double L = domain.length;
    return near(p.x(), 0) || near(p.x(), L) || near(p.y(), 0) || near(p.y(), L);
  }
  return near(std::abs(p.x()), 1) || near(std::abs(p.y()), 1) ||
         (near(p.y(), 0) && p.x() >= -tol) || (near(p.x(), 0) && p.y() >= -tol);
}

}  // namespace

double Domain::area() const {
  return kind == DomainKind::Square ? length * length : 3.0;
}

Mesh::Mesh(Domain domain, std::vector<Eigen::Vector2d> points, std::vector<Triangle> triangles,
           std::vector<int> parents)
    : domain_(domain), triangles_(std::move(triangles)), parents_(std::move(parents)) {
  vertices_.reserve(points.size());
  for (const auto& p : points) {
    if (!p.allFinite()) throw GeometryError("mesh: non-finite vertex coordinate");
    vertices_.push_back({p, false});
  }
  if (parents_.empty()) parents_.assign(triangles_.size(), -1);
  if (parents_.size() != triangles_.size()) throw GeometryError("mesh: parent map size mismatch");
  const int nv = num_vertices();
  for (const auto& t : triangles_) {
    for (int i = 0; i < 3; ++i) {
      if (t.v[i] < 0 || t.v[i] >= nv) throw GeometryError("mesh: vertex id out of range");
    }
    if (t.v[0] == t.v[1] || t.v[1] == t.v[2] || t.v[0] == t.v[2]) {
      throw GeometryError("mesh: repeated vertex in triangle");
    }
    if (signed_area(points[t.v[0]], points[t.v[1]], points[t.v[2]]) <= 0.0) {
      throw GeometryError("mesh: triangle not counterclockwise");
    }
  }
  build_topology();
}

void Mesh::build_topology() {
  struct Side {
    int a, b, tri, local;
  };
  std::vector<Side> sides;
  sides.reserve(3 * triangles_.size());
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& v = triangles_[t].v;
    for (int i = 0; i < 3; ++i) {
      const int a = v[(i + 1) % 3];
      const int b = v[(i + 2) % 3];
      sides.push_back({std::min(a, b), std::max(a, b), t, i});
    }
  }
  std::sort(sides.begin(), sides.end(), [](const Side& l, const Side& r) {
    return std::tie(l.a, l.b, l.tri) < std::tie(r.a, r.b, r.tri);
  });

  edges_.clear();
  triangle_edges_.assign(triangles_.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < sides.size();) {
    std::size_t j = i;
    while (j < sides.size() && sides[j].a == sides[i].a && sides[j].b == sides[i].b) ++j;
    if (j - i > 2) throw GeometryError("mesh: edge shared by more than two triangles");
    Edge e;
    e.v = {sides[i].a, sides[i].b};
    e.tri[0] = sides[i].tri;
    e.tri[1] = (j - i == 2) ? sides[i + 1].tri : -1;
    e.on_boundary = (j - i == 1);
    e.length = (point(e.v[1]) - point(e.v[0])).norm();
    const int id = static_cast<int>(edges_.size());
    for (std::size_t s = i; s < j; ++s) triangle_edges_[sides[s].tri][sides[s].local] = id;
    edges_.push_back(e);
    i = j;
  }
  for (auto& v : vertices_) v.on_boundary = false;
  for (const auto& e : edges_) {
    if (e.on_boundary) {
      vertices_[e.v[0]].on_boundary = true;
      vertices_[e.v[1]].on_boundary = true;
    }
  }
}

double Mesh::area(int t) const {
  const auto& v = triangles_[t].v;
  return signed_area(point(v[0]), point(v[1]), point(v[2]));
}

double Mesh::diameter(int t) const {
  double d = 0.0;
  for (int e : triangle_edges_[t]) d = std::max(d, edges_[e].length);
  return d;
}

double Mesh::min_angle(int t) const {
  const auto& v = triangles_[t].v;
  double best = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d a = point(v[(i + 1) % 3]) - point(v[i]);
    const Eigen::Vector2d b = point(v[(i + 2) % 3]) - point(v[i]);
    best = std::min(best, std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0)));
  }
  return best;
}

Eigen::Vector2d Mesh::centroid(int t) const {
  const auto& v = triangles_[t].v;
  return (point(v[0]) + point(v[1]) + point(v[2])) / 3.0;
}

std::optional<int> Mesh::reentrant_corner() const {
  if (domain_.kind != DomainKind::LShape) return std::nullopt;
  for (int i = 0; i < num_vertices(); ++i) {
    if (point(i).norm() < 1e-12) return i;
  }
  return std::nullopt;
}

MeshCheck check_mesh(const Mesh& mesh) {
  MeshCheck check;
  for (const auto& e : mesh.edges()) {
    const int count = e.tri[1] < 0 ? 1 : 2;
    if (e.on_boundary != (count == 1)) check.conforming = false;
    // A one-sided edge away from the domain boundary is a hanging-node edge.
    if (e.on_boundary &&
        !on_domain_boundary(mesh.domain(), 0.5 * (mesh.point(e.v[0]) + mesh.point(e.v[1])))) {
      check.conforming = false;
    }
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double a = mesh.area(t);
    if (!(a > 0.0)) check.positive_areas = false;
    check.total_area += a;
  }
  check.euler_characteristic = mesh.num_vertices() - mesh.num_edges() + mesh.num_triangles();
  return check;
}

namespace {

// Diagonally split structured grid over the cells accepted by `keep`.
template <class Keep>
Mesh structured_mesh(Domain domain, int cells_x, int cells_y, Eigen::Vector2d origin, double h,
                     Keep keep) {
  const int nx = cells_x + 1;
  std::vector<int> id(static_cast<std::size_t>(nx) * (cells_y + 1), -1);
  auto node = [&](int i, int j) -> int& { return id[static_cast<std::size_t>(j) * nx + i]; };
  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x; ++i) {
      if (!keep(i, j)) continue;
      node(i, j) = node(i + 1, j) = node(i, j + 1) = node(i + 1, j + 1) = 0;
    }
  }
  std::vector<Eigen::Vector2d> points;
  for (int j = 0; j <= cells_y; ++j) {
    for (int i = 0; i <= cells_x; ++i) {
      if (node(i, j) < 0) continue;
      node(i, j) = static_cast<int>(points.size());
      points.push_back(origin + h * Eigen::Vector2d(i, j));
    }
  }
  std::vector<Triangle> tris;
  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x; ++i) {
      if (!keep(i, j)) continue;
      const int ll = node(i, j), lr = node(i + 1, j), ul = node(i, j + 1), ur = node(i + 1, j + 1);
      for (Triangle t : {Triangle{{ll, lr, ur}}, Triangle{{ll, ur, ul}}}) {
        t.refinement_edge = longest_edge(t, points);
        tris.push_back(t);
      }
    }
  }
  return Mesh(domain, std::move(points), std::move(tris));
}

}  // namespace

Mesh generate_square(int n, double length) {
  if (n < 1) throw std::invalid_argument("generate_square: n must be >= 1");
  if (!(length > 0.0)) throw std::invalid_argument("generate_square: length must be positive");
  return structured_mesh(Domain::square(length), n, n, {0.0, 0.0}, length / n,
                         [](int, int) { return true; });
}

Mesh generate_lshape(int n) {
  if (n < 1) throw std::invalid_argument("generate_lshape: n must be >= 1");
  // Cells of [-1,1]^2 whose lower-left corner lies in the removed quadrant are dropped.
  return structured_mesh(Domain::lshape(), 2 * n, 2 * n, {-1.0, -1.0}, 1.0 / n,
                         [n](int i, int j) { return !(i >= n && j >= n); });
}

Mesh refine(const Mesh& mesh, std::span<const int> marked) {
  const int ne = mesh.num_edges();
  const int nt = mesh.num_triangles();
  const auto& tris = mesh.triangles();

  std::vector<char> edge_marked(ne, 0);
  for (int t : marked) {
    if (t < 0 || t >= nt) throw std::out_of_range("refine: marked triangle id out of range");
    edge_marked[mesh.triangle_edges(t)[tris[t].refinement_edge]] = 1;
  }

  // Closure: a triangle with any bisected edge must bisect its refinement edge.
  const long max_sweeps = 10L * mesh.num_vertices();
  bool changed = true;
  for (long sweep = 0; changed; ++sweep) {
    if (sweep > max_sweeps) throw GeometryError("refine: closure did not terminate");
    changed = false;
    for (int t = 0; t < nt; ++t) {
      const auto& te = mesh.triangle_edges(t);
      const int ref = te[tris[t].refinement_edge];
      if (!edge_marked[ref] && (edge_marked[te[0]] || edge_marked[te[1]] || edge_marked[te[2]])) {
        edge_marked[ref] = 1;
        changed = true;
      }
    }
  }

  std::vector<Eigen::Vector2d> points;
  points.reserve(mesh.num_vertices() + ne);
  for (const auto& v : mesh.vertices()) points.push_back(v.p);
  std::vector<int> midpoint(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (!edge_marked[e]) continue;
    const auto& ev = mesh.edges()[e].v;
    midpoint[e] = static_cast<int>(points.size());
    points.push_back(0.5 * (points[ev[0]] + points[ev[1]]));
  }

  std::vector<Triangle> out;
  std::vector<int> parents;
  out.reserve(nt);
  parents.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = tris[t];
    const auto& te = mesh.triangle_edges(t);
    const int r = tri.refinement_edge;
    const int a = tri.v[r], b = tri.v[(r + 1) % 3], c = tri.v[(r + 2) % 3];
    // Edges opposite a (refinement edge), b and c.
    const int ea = te[r], eb = te[(r + 1) % 3], ec = te[(r + 2) % 3];
    if (!edge_marked[ea]) {
      out.push_back(tri);
      parents.push_back(t);
      continue;
    }
    const int m = midpoint[ea];
    const int g = tri.generation + 1;
    // Children are stored with the refinement edge opposite local vertex 0,
    // i.e. opposite the newest vertex.
    auto emit = [&](int x, int y, int z, int gen) {
      out.push_back(Triangle{{x, y, z}, 0, gen});
      parents.push_back(t);
    };
    // Child (m, a, b) with refinement edge ab.
    if (edge_marked[ec]) {
      const int mc = midpoint[ec];
      emit(mc, m, a, g + 1);
      emit(mc, b, m, g + 1);
    } else {
      emit(m, a, b, g);
    }
    // Child (m, c, a) with refinement edge ca.
    if (edge_marked[eb]) {
      const int mb = midpoint[eb];
      emit(mb, m, c, g + 1);
      emit(mb, a, m, g + 1);
    } else {
      emit(m, c, a, g);
    }
  }
  return Mesh(mesh.domain(), std::move(points), std::move(out), std::move(parents));
}

Mesh uniform_refine(const Mesh& mesh) {
  auto all = [](const Mesh& m) {
    std::vector<int> ids(m.num_triangles());
    for (int i = 0; i < m.num_triangles(); ++i) ids[i] = i;
    return ids;
  };
  const Mesh once = refine(mesh, all(mesh));
  Mesh twice = refine(once, all(once));
  std::vector<int> parents(twice.num_triangles());
  for (int t = 0; t < twice.num_triangles(); ++t) parents[t] = once.parents()[twice.parents()[t]];
  std::vector<Eigen::Vector2d> points;
  points.reserve(twice.num_vertices());
  for (const auto& v : twice.vertices()) points.push_back(v.p);
  return Mesh(twice.domain(), std::move(points), twice.triangles(), std::move(parents));
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_triangles() << " edges "
     << mesh.num_edges() << '\n';
  os << std::setprecision(17);
  for (const auto& v : mesh.vertices()) {
    os << "v " << v.p.x() << ' ' << v.p.y() << ' ' << (v.on_boundary ? 1 : 0) << '\n';
  }
  for (const auto& t : mesh.triangles()) {
    os << "t " << t.v[0] << ' ' << t.v[1] << ' ' << t.v[2] << ' ' << t.refinement_edge << ' '
       << t.generation << '\n';
  }
  for (const auto& e : mesh.edges()) {
    os << "e " << e.v[0] << ' ' << e.v[1] << ' ' << (e.on_boundary ? 1 : 0) << '\n';
  }
}

}  // namespace mixeig
