#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mixeig/error.hpp"
#include "mixeig/mesh.hpp"
#include "oracles.hpp"

using namespace mixeig;

namespace {

int count_boundary_edges(const Mesh& m) {
  return static_cast<int>(std::count_if(m.edges().begin(), m.edges().end(),
                                        [](const Edge& e) { return e.on_boundary; }));
}

double min_angle(const Mesh& m) {
  double a = 10.0;
  for (int t = 0; t < m.num_triangles(); ++t) a = std::min(a, m.min_angle(t));
  return a;
}

void require_valid(const Mesh& m) {
  const MeshCheck c = check_mesh(m);
  CHECK(c.conforming);
  CHECK(c.positive_areas);
  CHECK(c.euler_characteristic == 1);
  CHECK(c.total_area == doctest::Approx(m.domain().area()).epsilon(1e-12));
  for (const Edge& e : m.edges()) CHECK(e.on_boundary == (e.tri[1] < 0));
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("square generation counts") {
  const Mesh m1 = generate_square(1, std::numbers::pi);
  CHECK(m1.num_vertices() == 4);
  CHECK(m1.num_triangles() == 2);
  CHECK(m1.num_edges() == 5);
  CHECK(check_mesh(m1).euler_characteristic == 1);

  const Mesh m2 = generate_square(2, std::numbers::pi);
  CHECK(m2.num_vertices() == 9);
  CHECK(m2.num_triangles() == 8);
  CHECK(check_mesh(m2).total_area == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-12));

  const Mesh m4 = generate_square(4);
  CHECK(count_boundary_edges(m4) == 16);
  for (int n = 1; n <= 6; ++n) require_valid(generate_square(n, 2.5));
}

TEST_CASE("square diagonals run lower-left to upper-right") {
  const Mesh m = generate_square(3, 3.0);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto& v = m.triangles()[t].v;
    const Eigen::Vector2d a = m.point(v[(m.triangles()[t].refinement_edge + 1) % 3]);
    const Eigen::Vector2d b = m.point(v[(m.triangles()[t].refinement_edge + 2) % 3]);
    const Eigen::Vector2d d = (b - a).cwiseAbs();
    CHECK(d.x() == doctest::Approx(1.0));
    CHECK(d.y() == doctest::Approx(1.0));
    CHECK((b - a).x() * (b - a).y() > 0.0);
  }
}

TEST_CASE("lshape generation") {
  const Mesh m1 = generate_lshape(1);
  CHECK(m1.num_vertices() == 8);
  CHECK(m1.num_triangles() == 6);
  CHECK(check_mesh(m1).total_area == doctest::Approx(3.0).epsilon(1e-12));
  int at_origin = 0;
  for (const Vertex& v : m1.vertices()) {
    if (v.p.norm() == 0.0) {
      ++at_origin;
      CHECK(v.on_boundary);
    }
  }
  CHECK(at_origin == 1);
  REQUIRE(m1.reentrant_corner().has_value());
  CHECK(m1.point(*m1.reentrant_corner()).norm() == 0.0);

  const Mesh m2 = generate_lshape(2);
  CHECK(m2.num_vertices() == 21);
  CHECK(m2.num_triangles() == 24);
  for (int n = 1; n <= 4; ++n) require_valid(generate_lshape(n));
}

TEST_CASE("generation rejects n = 0") {
  CHECK_THROWS_AS(generate_square(0), std::invalid_argument);
  CHECK_THROWS_AS(generate_lshape(0), std::invalid_argument);
}

TEST_CASE("constructor rejects clockwise and repeated vertices") {
  std::vector<Eigen::Vector2d> pts{{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(Mesh(Domain::square(1.0), pts, {Triangle{{0, 2, 1}}}), GeometryError);
  CHECK_THROWS_AS(Mesh(Domain::square(1.0), pts, {Triangle{{0, 1, 1}}}), GeometryError);
}

TEST_CASE("refine with empty marks is the identity") {
  const Mesh m = generate_square(3);
  const Mesh r = refine(m, {});
  CHECK(r.num_triangles() == m.num_triangles());
  CHECK(r.num_vertices() == m.num_vertices());
  for (int t = 0; t < m.num_triangles(); ++t) CHECK(r.triangles()[t].v == m.triangles()[t].v);
}

TEST_CASE("one bisection step on the two-triangle square") {
  const Mesh m = generate_square(1, std::numbers::pi);
  const std::vector<int> all{0, 1};
  const Mesh r = refine(m, all);
  CHECK(r.num_triangles() == 4);
  CHECK(r.num_vertices() == 5);
  const Eigen::Vector2d mid(std::numbers::pi / 2, std::numbers::pi / 2);
  int center = -1;
  for (int i = 0; i < r.num_vertices(); ++i) {
    if ((r.point(i) - mid).norm() < 1e-14) center = i;
  }
  REQUIRE(center >= 0);
  for (const Triangle& t : r.triangles()) {
    CHECK(std::find(t.v.begin(), t.v.end(), center) != t.v.end());
    CHECK(t.generation == 1);
  }
  require_valid(r);
}

TEST_CASE("refine rejects unknown triangle ids") {
  const Mesh m = generate_square(1);
  const std::vector<int> bad{5};
  CHECK_THROWS_AS(refine(m, bad), std::out_of_range);
}

TEST_CASE("uniform refinement counts") {
  CHECK(uniform_refine(generate_square(1)).num_triangles() == 8);
  CHECK(uniform_refine(generate_square(2)).num_triangles() == 32);
  const Mesh l = uniform_refine(generate_lshape(1));
  CHECK(l.num_triangles() == 24);
  CHECK(check_mesh(l).total_area == doctest::Approx(3.0).epsilon(1e-12));
  const Mesh m = generate_square(2);
  const Mesh u = uniform_refine(m);
  std::vector<int> children(m.num_triangles(), 0);
  for (int p : u.parents()) ++children[p];
  for (int c : children) CHECK(c == 4);
}

TEST_CASE("random refinement keeps invariants and lineage") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Mesh mesh = trial % 2 ? generate_lshape(1) : generate_square(2, 1.7);
    for (int step = 0; step < 6; ++step) {
      const auto marked = oracle::random_marks(mesh, 0.3, rng);
      const Mesh fine = refine(mesh, marked);
      require_valid(fine);
      REQUIRE(fine.parents().size() == static_cast<std::size_t>(fine.num_triangles()));
      for (int t = 0; t < fine.num_triangles(); ++t) {
        const int p = fine.parents()[t];
        REQUIRE(p >= 0);
        const int dg = fine.triangles()[t].generation - mesh.triangles()[p].generation;
        CHECK(dg >= 0);
        CHECK(dg <= 2);
        CHECK(fine.area(t) == doctest::Approx(mesh.area(p) / std::pow(2.0, dg)).epsilon(1e-12));
        CHECK(fine.diameter(t) <= mesh.diameter(p) * (1 + 1e-14));
      }
      for (int t : marked) CHECK(std::count(fine.parents().begin(), fine.parents().end(), t) >= 2);
      mesh = fine;
    }
  }
}

TEST_CASE("refinement is deterministic") {
  std::mt19937_64 a(3), b(3);
  const Mesh x = oracle::random_refined(generate_square(2), 8, 0.3, a);
  const Mesh y = oracle::random_refined(generate_square(2), 8, 0.3, b);
  REQUIRE(x.num_triangles() == y.num_triangles());
  for (int t = 0; t < x.num_triangles(); ++t) {
    CHECK(x.triangles()[t].v == y.triangles()[t].v);
    CHECK(x.triangles()[t].refinement_edge == y.triangles()[t].refinement_edge);
  }
  for (int i = 0; i < x.num_vertices(); ++i) CHECK(x.point(i) == y.point(i));
}

TEST_CASE("shape regularity under 20 random refinements") {
  const Mesh start = generate_square(2, std::numbers::pi);
  const double initial = min_angle(start);
  std::mt19937_64 rng(11);
  Mesh mesh = start;
  for (int step = 0; step < 20; ++step) {
    mesh = refine(mesh, oracle::random_marks(mesh, 0.3, rng));
    CHECK(min_angle(mesh) >= 0.5 * initial);
  }
}

TEST_CASE("mesh dump format") {
  const Mesh m = generate_square(1, 1.0);
  std::ostringstream os;
  write_mesh(os, m);
  std::istringstream in(os.str());
  std::string word;
  int nv = 0, nt = 0, ne = 0;
  in >> word >> nv;
  CHECK(word == "vertices");
  in >> word >> nt;
  CHECK(word == "triangles");
  in >> word >> ne;
  CHECK(word == "edges");
  CHECK(nv == 4);
  CHECK(nt == 2);
  CHECK(ne == 5);
  int v_lines = 0, t_lines = 0, e_lines = 0;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v_lines;
    if (line.rfind("t ", 0) == 0) ++t_lines;
    if (line.rfind("e ", 0) == 0) ++e_lines;
  }
  CHECK(v_lines == 4);
  CHECK(t_lines == 2);
  CHECK(e_lines == 5);
}

}  // TEST_SUITE
