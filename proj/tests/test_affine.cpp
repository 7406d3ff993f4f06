#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tropper;
using namespace testing;

namespace {

// Skew edge a→b from (0,0) to (2,1) shared by an upper and a lower triangle.
ManifoldInput skew_pair() {
  std::vector<Cell> cs{cell(0, 0, {}, "a"),
                       cell(1, 0, {}, "b"),
                       cell(2, 0, {}, "c"),
                       cell(3, 0, {}, "d"),
                       cell(4, 1, {{0, -1}, {1, 1}}, "ab"),
                       cell(5, 1, {{1, -1}, {2, 1}}),
                       cell(6, 1, {{2, -1}, {0, 1}}),
                       cell(7, 1, {{0, -1}, {3, 1}}),
                       cell(8, 1, {{3, -1}, {1, 1}}),
                       cell(9, 2, {{4, 1}, {5, 1}, {6, 1}}, "upper"),
                       cell(10, 2, {{7, 1}, {8, 1}, {4, -1}}, "lower")};
  return planar(std::move(cs), {{0, {0, 0}}, {1, {2, 1}}, {2, {0, 1}}, {3, {2, 0}}});
}

int side_of(const TropicalManifold& m, CellId facet, CellId sigma) {
  const auto& s = m.sides(facet);
  return s[0].cell == sigma ? 0 : 1;
}

}  // namespace

TEST_CASE("parallel transport along trivial and returning paths") {
  const TropicalManifold m(grid(2, 1));
  const auto sq = m.complex().maximal_cells();
  CHECK(parallel_transport(m, sq[0], std::span<const PathStep>{}) == IntMatrix::identity(2));
  const std::vector<CellId> there_and_back{sq[0], sq[1], sq[0]};
  CHECK(parallel_transport(m, there_and_back) == IntMatrix::identity(2));
}

TEST_CASE("transport round trips on the fixtures") {
  for (const auto& name : fixture_names()) {
    const TropicalManifold m(fixture(name).input);
    for (std::size_t i = 0; i < m.pieces().size(); ++i)
      CHECK(m.crossing(i, 0) * m.crossing(i, 1) == IntMatrix::identity(static_cast<std::size_t>(m.rank())));
  }
}

TEST_CASE("focus-focus monodromy is a shear") {
  const TropicalManifold m(fixture("focus_focus").input);
  REQUIRE(m.discriminant().size() == 1);
  const auto& d = m.discriminant()[0];
  CHECK(d.monodromy == IntMatrix{{1, 1}, {0, 1}});
  // Recomputed from a top simplex of the subdivision inside the reference cell.
  const auto& b = m.bary();
  std::optional<CellId> start;
  for (auto s : b.complex.cells_of_dim(2))
    if (b.ancestor[s.value] == d.reference_cell && b.complex.is_face(d.bary_vertex, s)) start = s;
  REQUIRE(start);
  CHECK(m.bary_loop(d.bary_vertex, *start) == d.monodromy);
}

TEST_CASE("holonomy around vertices away from the discriminant is trivial") {
  for (const auto& name : {"torus", "focus_focus"}) {
    const TropicalManifold m(fixture(name).input);
    const auto& b = m.bary();
    std::set<CellId> delta;
    for (const auto& d : m.discriminant()) delta.insert(d.bary_vertex);
    for (auto v : b.complex.cells_of_dim(0)) {
      if (b.complex.in_boundary(v) || delta.count(v)) continue;
      const CellId start = b.complex.cofaces(b.complex.cofaces(v).front().cell).front().cell;
      CHECK(m.bary_loop(v, start) == IntMatrix::identity(2));
    }
  }
}

TEST_CASE("primitive normals") {
  {
    const auto mf = fixture("interval");
    const TropicalManifold m(mf.input);
    const CellId v = *m.complex().find_label("v1");
    const CellId right = *m.complex().find_label("e1");
    CHECK(m.primitive_normal(v, side_of(m, v, right)) == IntCovector{1});
    CHECK(m.primitive_normal(v, 1 - side_of(m, v, right)) == IntCovector{-1});
  }
  {
    const TropicalManifold m(grid(1, 2));
    const CellId mid{static_cast<std::uint32_t>(6 + 1)};  // h(0,1)
    const CellId upper = m.complex().maximal_cells()[1];
    CHECK(m.primitive_normal(mid, side_of(m, mid, upper)) == IntCovector{0, 1});
    CHECK(m.primitive_normal(mid, 1 - side_of(m, mid, upper)) == IntCovector{0, -1});
  }
  {
    const TropicalManifold m(skew_pair());
    const auto& p = m.complex();
    const CellId ab = *p.find_label("ab");
    const int up = side_of(m, ab, *p.find_label("upper"));
    CHECK(m.primitive_normal(ab, up) == IntCovector{-1, 2});
    CHECK(m.primitive_normal(ab, 1 - up) == IntCovector{1, -2});
  }
}

TEST_CASE("normals vanish on the facet and are positive on their side") {
  for (const auto& name : {"torus", "focus_focus"}) {
    const TropicalManifold m(fixture(name).input);
    const auto& p = m.complex();
    for (auto r : p.cells_of_dim(1)) {
      if (!p.is_interior(r)) continue;
      for (int side = 0; side < 2; ++side) {
        const auto& s = m.sides(r)[side];
        const auto occ = m.facet_occurrence(r, s);
        const IntCovector d = m.primitive_normal(r, side);
        for (const auto& u : m.face_tangents(s.cell, occ)) CHECK(pairing(d, u) == 0);
        // Barycenter of the cell lies strictly on the positive side.
        const RatPoint c = m.face_point(s.cell, {s.cell, 0});
        const RatPoint q = m.face_point(s.cell, occ);
        Rational val = 0;
        for (std::size_t k = 0; k < c.size(); ++k) val += Rational(d[k]) * (c[k] - q[k]);
        CHECK(val > 0);
      }
    }
  }
}

TEST_CASE("kink consistency") {
  const TropicalManifold m(grid(2, 2, 3));
  std::vector<Int> k;
  for (std::size_t i = 0; i < m.pieces().size(); ++i) k.push_back(m.kink(i));
  CHECK(kink_consistency(m));
  const auto facet = m.complex().cells_of_dim(1)[1];
  const auto ps = m.pieces_of(facet);
  REQUIRE(ps.size() == 2);
  k[ps[0]] = 1;
  k[ps[1]] = 2;
  CHECK_FALSE(kink_consistency(k, m, true));
  CHECK(kink_consistency(k, m, false));
}

TEST_CASE("kinks must be positive") {
  CHECK_THROWS_AS(TropicalManifold(grid(2, 2, 0)), AffineError);
  auto in = grid(2, 2);
  in.kinks.pop_back();
  CHECK_THROWS_AS(TropicalManifold(in), AffineError);
}

TEST_CASE("local PL representative in one dimension") {
  for (int k = 1; k <= 4; ++k) {
    auto mf = fixture("interval");
    for (auto& d : mf.input.kinks) d.kink = k;
    const TropicalManifold m(mf.input);
    const auto pl = local_pl_representative(m, *m.complex().find_label("v1"));
    REQUIRE(pl.ray_values.size() == 2);
    // φ_v = max(0, kx) up to a linear term: the two rays sum to k.
    CHECK(pl.ray_values[0].second + pl.ray_values[1].second == k);
    CHECK(pl.ray_values[0].first == -pl.ray_values[1].first);
  }
}

TEST_CASE("local PL representative on four quadrants") {
  const TropicalManifold m(grid(2, 2));
  const CellId centre{4};
  const auto pl = local_pl_representative(m, centre);
  std::map<IntVector, Int> value(pl.ray_values.begin(), pl.ray_values.end());
  REQUIRE(value.size() == 4);
  // The reference corner is the lower-left quadrant, where the slope is zero.
  CHECK(value.at(IntVector{-1, 0}) == 0);
  CHECK(value.at(IntVector{0, -1}) == 0);
  CHECK(value.at(IntVector{1, 0}) == 1);
  CHECK(value.at(IntVector{0, 1}) == 1);
}

TEST_CASE("local PL slopes agree on shared rays and bend by the kink") {
  for (const auto& name : {"torus", "focus_focus"}) {
    const TropicalManifold m(fixture(name).input);
    const auto& p = m.complex();
    for (auto v : p.cells_of_dim(0)) {
      if (!p.is_interior(v)) continue;
      const auto pl = local_pl_representative(m, v);
      const auto cf = corner_frames(m, v);
      for (auto r : p.cells_of_dim(1)) {
        if (!p.is_face(v, r) || !p.is_interior(r)) continue;
        const Coface a = corner_of_side(m, m.sides(r)[0], v);
        const Coface b = corner_of_side(m, m.sides(r)[1], v);
        // Tangent of the edge and the normal into side 1, in the reference frame.
        const IntMatrix to_b = cf.to_reference.at(b);
        const IntCovector d = m.primitive_normal(r, 1) * unimodular_inverse(to_b);
        const IntCovector jump = pl.slopes.at(b) - pl.slopes.at(a);
        const std::size_t piece = m.piece_near(r, v);
        CHECK(jump == m.kink(piece) * d);
        for (const auto& u : m.face_tangents(b.cell, m.facet_occurrence(r, m.sides(r)[1])))
          CHECK(pairing(jump, to_b * u) == 0);
      }
    }
  }
}

TEST_CASE("pushforward of the lattice") {
  {
    const TropicalManifold m(fixture("torus").input);
    const Level lvl(m, 0);
    const auto sh = build_pushforward(lvl);
    for (const auto& c : lvl.complex().cells()) CHECK(sh.rank_at(c.id) == 2);
  }
  {
    const TropicalManifold m(fixture("focus_focus").input);
    const auto& d = m.discriminant()[0];
    for (int level : {0, 1}) {
      const Level lvl(m, level);
      const auto sh = build_pushforward(lvl);
      const auto& k = lvl.complex();
      for (const auto& c : k.cells()) {
        const bool near = lvl.touches(c.id, d);
        CHECK(sh.rank_at(c.id) == (near ? 1u : 2u));
        if (!near) continue;
        // Invariant line of the shear, moved into the reference frame of Δ.
        const IntMatrix v = sh.home_basis(c.id);
        const IntMatrix back = unimodular_inverse(lvl.delta_transport(d, sh.home(c.id))) * v;
        CHECK(d.monodromy * back == back);
        CHECK((back.column(0) == IntVector{1, 0} || back.column(0) == IntVector{-1, 0}));
      }
    }
  }
}

TEST_CASE("pushforward restrictions compose") {
  for (const auto& name : {"torus", "focus_focus", "circle", "interval"}) {
    const TropicalManifold m(fixture(name).input);
    for (int level : {0, 1}) {
      const Level lvl(m, level);
      const auto sh = build_pushforward(lvl);
      const auto& k = lvl.complex();
      for (const auto& s : k.cells())
        for (auto w : k.closure(s.id))
          for (auto t : k.closure(w)) CHECK(sh.restriction(s.id, t) == sh.restriction(w, t) * sh.restriction(s.id, w));
    }
  }
}
