#include "support.hpp"
#include "tropper/affine.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tropper;
using namespace testing;

namespace {

bool boundary_squares_to_zero(const PolyComplex& p) {
  for (int d = 2; d <= p.dim(); ++d) {
    const auto hi = boundary_matrix(p, d);
    const auto lo = boundary_matrix(p, d - 1);
    for (std::size_t i = 0; i < lo.size(); ++i)
      for (std::size_t j = 0; j < (hi.empty() ? 0 : hi[0].size()); ++j) {
        long long s = 0;
        for (std::size_t k = 0; k < hi.size(); ++k) s += lo[i][k] * hi[k][j];
        if (s != 0) return false;
      }
  }
  return true;
}

}  // namespace

TEST_CASE("validation of one-dimensional complexes") {
  const PolyComplex circle(circle_cells());
  CHECK(circle.dim() == 1);
  for (const auto& c : circle.cells()) CHECK(circle.is_interior(c.id));

  const PolyComplex interval(interval_cells());
  CHECK(interval.in_boundary(id(0)));
  CHECK(interval.in_boundary(id(1)));
  CHECK(interval.is_interior(id(2)));

  // Theta graph: three edges between the same two vertices.
  auto theta = circle_cells();
  theta.push_back(cell(4, 1, {{0, -1}, {1, 1}}));
  const auto r = validate(theta);
  CHECK(r.has(ComplexIssue::NonManifold));
  CHECK_THROWS_AS(PolyComplex(theta), ComplexError);
}

TEST_CASE("validation rejects dangling faces and bad dimensions") {
  auto cs = interval_cells();
  cs[2].facets[1].cell = id(9);
  CHECK(validate(cs).has(ComplexIssue::DanglingFace));

  cs = interval_cells();
  cs[2].dim = 2;
  CHECK_FALSE(validate(cs).ok());
}

TEST_CASE("incidence signs of an oriented edge") {
  const PolyComplex p(interval_cells());
  CHECK(p.incidence_sign(id(1), id(2)) == 1);
  CHECK(p.incidence_sign(id(0), id(2)) == -1);
}

TEST_CASE("incidence sign of the top edge of a square") {
  const PolyComplex p(square_cells());
  CHECK(p.incidence_sign(*p.find_label("top"), *p.find_label("square")) == -1);
  // Outward normal (0,1) wedged with the tangent (1,0) against e1∧e2.
  CHECK(geometric_incidence_sign({Rational(0), Rational(1)}, {{Rational(1), Rational(0)}},
                                 {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}) == -1);
  CHECK(geometric_incidence_sign({Rational(0), Rational(-1)}, {{Rational(1), Rational(0)}},
                                 {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}) == 1);
}

TEST_CASE("boundary squares to zero") {
  for (const auto& cs : {circle_cells(), interval_cells(), triangle_cells(), square_cells(), tetrahedron_cells()}) {
    const PolyComplex p(cs);
    CHECK(boundary_squares_to_zero(p));
    CHECK(boundary_squares_to_zero(barycentric_subdivide(p).complex));
  }
}

TEST_CASE("orientation flags: stored signs inconsistent, auto_orient repairs") {
  auto cs = circle_cells();
  cs[3].facets = {{id(0), -1}, {id(1), 1}};  // second edge now also runs 0→1
  CHECK(validate(cs).has(ComplexIssue::NonOrientable));
  const auto flags = auto_orient(cs);
  REQUIRE(flags);
  for (std::size_t i = 0; i < cs.size(); ++i) cs[i].orientation = (*flags)[i];
  CHECK(validate(cs).ok());
}

TEST_CASE("barycentric subdivision cell counts") {
  auto counts = [](const std::vector<Cell>& cs) {
    const auto b = barycentric_subdivide(PolyComplex(cs));
    std::vector<std::size_t> out;
    for (int d = 0; d <= b.complex.dim(); ++d) out.push_back(b.complex.cells_of_dim(d).size());
    return out;
  };
  CHECK(counts({cell(0, 0), cell(1, 0), cell(2, 1, {{0, -1}, {1, 1}})}) == std::vector<std::size_t>{3, 2});
  CHECK(counts(triangle_cells()) == std::vector<std::size_t>{7, 12, 6});
  CHECK(counts(square_cells())[2] == 8);
  CHECK(flag_counts(PolyComplex(square_cells())) == counts(square_cells()));
}

TEST_CASE("barycentric subdivision preserves Euler characteristic and ancestry order") {
  for (const auto& cs : {circle_cells(), interval_cells(), triangle_cells(), square_cells(), tetrahedron_cells()}) {
    const PolyComplex p(cs);
    const auto b = barycentric_subdivide(p);
    CHECK(b.complex.euler_characteristic() == p.euler_characteristic());
    for (const auto& c : b.complex.cells())
      for (auto f : b.complex.closure(c.id)) CHECK(p.is_face(b.ancestor[f.value], b.ancestor[c.id.value]));
  }
}

TEST_CASE("loop edges on a one-vertex circle") {
  const PolyComplex p({cell(0, 0), cell(1, 1, {{0, -1}, {0, 1}})});
  CHECK(p.is_loop(id(1)));
  CHECK(p.has_self_incidence());
  CHECK(p.euler_characteristic() == 0);
  CHECK(p.proper_faces(id(1)).size() == 2);
  const auto b = barycentric_subdivide(p);
  CHECK(b.complex.cells_of_dim(0).size() == 2);
  CHECK(b.complex.cells_of_dim(1).size() == 2);
}

TEST_CASE("refined codimension-one pieces") {
  {
    const PolyComplex p(circle_cells());
    CHECK(refined_cells(p, barycentric_subdivide(p)).size() == 2);
  }
  {
    const PolyComplex p(square_cells());
    const auto pieces = refined_cells(p, barycentric_subdivide(p));
    CHECK(pieces.size() == 8);
    std::map<CellId, int> per_edge;
    for (const auto& r : pieces) ++per_edge[r.parent];
    for (auto [e, k] : per_edge) CHECK(k == 2);
  }
  {
    const PolyComplex p(tetrahedron_cells());
    const auto pieces = refined_cells(p, barycentric_subdivide(p));
    std::map<CellId, int> per_face;
    for (const auto& r : pieces) ++per_face[r.parent];
    CHECK(per_face.size() == 4);
    for (auto [f, k] : per_face) CHECK(k == 6);
  }
}

TEST_CASE("fixture complexes are valid") {
  for (const auto& name : fixture_names()) {
    const auto mf = fixture(name);
    const auto& p = mf.input.complex;
    CHECK(validate(p.cells()).ok());
    CHECK(boundary_squares_to_zero(p));
    CHECK(barycentric_subdivide(p).complex.euler_characteristic() == p.euler_characteristic());
  }
}
