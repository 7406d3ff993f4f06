#include "support.hpp"
#include "tropper/cech.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace tropper;
using namespace testing;

namespace {

std::vector<std::size_t> ranks(const HomologyResult& h) {
  std::vector<std::size_t> out;
  for (const auto& g : h.groups) out.push_back(g.rank);
  return out;
}

HomologyResult constant_homology(const PolyComplex& k, bool relative) {
  const auto f = ConstructibleSheaf::constant(k, 1);
  return homology(simplicial_chain_complex(k, relative ? boundary_subcomplex(k) : std::set<CellId>{}, f));
}

ChainComplex manifold_chains(const TropicalManifold& m, int level) {
  const Level lvl(m, level);
  const auto f = build_pushforward(lvl);
  return simplicial_chain_complex(lvl.complex(), boundary_subcomplex(lvl.complex()), f);
}

// Fixtures on which the Čech comparison runs: no maximal cell glued to itself.
const std::vector<std::string> kComparable{"interval", "circle", "torus", "focus_focus"};

}  // namespace

TEST_CASE("homology with constant coefficients") {
  const PolyComplex circle(circle_cells());
  const auto f = ConstructibleSheaf::constant(circle, 1);
  const auto c = simplicial_chain_complex(circle, {}, f);
  CHECK(c.dim(0) == 2);
  CHECK(c.dim(1) == 2);
  CHECK(ranks(homology(c)) == std::vector<std::size_t>{1, 1});

  const PolyComplex interval(interval_cells());
  const auto rel = simplicial_chain_complex(interval, boundary_subcomplex(interval), ConstructibleSheaf::constant(interval, 1));
  CHECK(rel.dim(0) == 0);
  CHECK(rel.dim(1) == 1);
  CHECK(ranks(homology(rel)) == std::vector<std::size_t>{0, 1});

  CHECK(ranks(constant_homology(PolyComplex(square_cells()), false)) == std::vector<std::size_t>{1, 0, 0});
  CHECK(ranks(constant_homology(PolyComplex(square_cells()), true)) == std::vector<std::size_t>{0, 0, 1});
  CHECK(ranks(constant_homology(PolyComplex(tetrahedron_cells()), true)) == std::vector<std::size_t>{0, 0, 0, 1});
}

TEST_CASE("homology of hand-assembled complexes") {
  CHECK(homology_at(IntMatrix(0, 0), IntMatrix(0, 0), 0) == HomologyGroup{});

  const auto g = homology_at(IntMatrix{{2}}, IntMatrix(0, 1), 1);
  CHECK(g.rank == 0);
  CHECK(g.torsion == std::vector<Int>{2});

  // Minimal cell structure of the real projective plane: ∂e₁ = 0, ∂e₂ = 2e₁.
  ChainComplex rp2;
  rp2.d = {IntMatrix(0, 1), IntMatrix(1, 1), IntMatrix{{2}}};
  rp2.basis = {{BasisLabel{}}, {BasisLabel{}}, {BasisLabel{}}};
  REQUIRE(rp2.squares_to_zero());
  const auto h = homology(rp2);
  CHECK(h[0] == HomologyGroup{1, {}});
  CHECK(h[1] == HomologyGroup{0, {2}});
  CHECK(h[2] == HomologyGroup{0, {}});
}

TEST_CASE("chain complexes of the fixtures square to zero") {
  for (const auto& name : fixture_names()) {
    const TropicalManifold m(fixture(name).input);
    for (int level : {0, 1}) CHECK(manifold_chains(m, level).squares_to_zero());
  }
}

TEST_CASE("twisted homology of the fixtures") {
  const std::map<std::string, std::vector<std::size_t>> expected{
      {"tate_k2", {1, 1}}, {"interval", {0, 1}}, {"circle", {1, 1}}, {"torus", {2, 4, 2}}, {"focus_focus", {0, 2, 1}}};
  for (const auto& [name, want] : expected) {
    const TropicalManifold m(fixture(name).input);
    for (int level : {0, 1}) {
      INFO(name << " level " << level);
      CHECK(ranks(homology(manifold_chains(m, level))) == want);
    }
  }
}

TEST_CASE("barycentric invariance") {
  for (const auto& name : fixture_names()) {
    const TropicalManifold m(fixture(name).input);
    const auto cmp = barycentric_comparison(manifold_chains(m, 0), manifold_chains(m, 1));
    INFO(name);
    CHECK(cmp.isomorphic);
    CHECK(cmp.base == cmp.refined);
  }
  for (const auto& cs : {circle_cells(), square_cells(), triangle_cells(), tetrahedron_cells()}) {
    const PolyComplex p(cs);
    const auto b = barycentric_subdivide(p);
    CHECK(constant_homology(p, true) == constant_homology(b.complex, true));
    CHECK(constant_homology(p, false) == constant_homology(b.complex, false));
  }
}

TEST_CASE("homology coordinates detect boundaries") {
  const PolyComplex p(circle_cells());
  const auto c = simplicial_chain_complex(p, {}, ConstructibleSheaf::constant(p, 1));
  const HomologyBasis h1(c, 1);
  CHECK(h1.rank() == 1);
  // The fundamental cycle e₀ + e₁ versus twice it.
  const auto one = h1.coordinates(IntVector{1, 1});
  const auto two = h1.coordinates(IntVector{2, 2});
  REQUIRE(one.free.size() == 1);
  CHECK((one.free[0] == 1 || one.free[0] == -1));
  CHECK(two.free[0] == 2 * one.free[0]);
  CHECK_THROWS(h1.coordinates(IntVector{1, 0}));

  const HomologyBasis h0(c, 0);
  CHECK(h0.is_boundary(IntVector{1, -1}));
  CHECK_FALSE(h0.is_boundary(IntVector{1, 0}));
}

TEST_CASE("Cech cohomology examples") {
  {
    const PolyComplex p(circle_cells());
    const auto c = cech_complex(ConstructibleSheaf::constant(p, 1));
    CHECK(c.squares_to_zero());
    // U₀ ∩ U₁ has one component near each vertex.
    REQUIRE(c.index.size() >= 2);
    CHECK(c.index[1].size() == 2);
    CHECK(ranks(cohomology(c))[0] == 1);
    CHECK(ranks(cohomology(c))[1] == 1);
  }
  {
    const PolyComplex p(square_cells());
    const auto h = cohomology(cech_complex(ConstructibleSheaf::constant(p, 1)));
    CHECK(h[0].rank == 1);
    for (std::size_t j = 1; j < h.groups.size(); ++j) CHECK(h[j].rank == 0);
  }
  {
    const TropicalManifold m(fixture("torus").input);
    const auto h = cohomology(cech_complex(build_pushforward(Level(m, 0))));
    CHECK(h[1].rank == 4);
  }
}

TEST_CASE("Cech cohomology does not depend on the order of maximal cells") {
  std::mt19937_64 rng(3);
  for (const auto& name : kComparable) {
    const TropicalManifold m(fixture(name).input);
    const auto f = build_pushforward(Level(m, 0));
    const auto base = cohomology(cech_complex(f));
    auto order = m.complex().maximal_cells();
    for (int trial = 0; trial < 3; ++trial) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto c = cech_complex(f, order);
      INFO(name);
      CHECK(c.squares_to_zero());
      CHECK(cohomology(c) == base);
    }
  }
}

TEST_CASE("graded pieces of the circle") {
  const PolyComplex p(circle_cells());
  const auto c = cech_complex(ConstructibleSheaf::constant(p, 1));
  std::size_t vertex_pieces = 0;
  for (const auto& g : filtration_graded(c, p)) {
    const auto h = graded_cohomology(g);
    if (p.cell(g.tau).dim == 0) {
      ++vertex_pieces;
      CHECK(ranks(h) == std::vector<std::size_t>{0, 1});
    } else {
      CHECK(h[0].rank == 1);
    }
  }
  CHECK(vertex_pieces == 2);
}

TEST_CASE("graded concentration on every comparable fixture") {
  for (const auto& name : kComparable) {
    const TropicalManifold m(fixture(name).input);
    const PolyComplex& p = m.complex();
    std::vector<std::string> failures;
    INFO(name);
    CHECK(concentration_holds(cech_complex(ConstructibleSheaf::constant(p, 1)), p, &failures));
    CHECK(failures.empty());
  }
  const PolyComplex sq(square_cells());
  CHECK(concentration_holds(cech_complex(ConstructibleSheaf::constant(sq, 1)), sq));
}

TEST_CASE("comparison map and Poincare-Lefschetz duality") {
  for (const auto& name : kComparable) {
    const TropicalManifold m(fixture(name).input);
    const auto pl = poincare_lefschetz_check(build_pushforward(Level(m, 0)));
    INFO(name << ": " << pl.comparison.detail);
    CHECK(pl.comparison.chain_identity);
    CHECK(pl.comparison.termwise_iso);
    CHECK(pl.ok);
    const auto n = static_cast<std::size_t>(m.rank());
    for (std::size_t i = 0; i <= n; ++i) CHECK(pl.chains[i].rank == pl.cech[n - i].rank);
  }
  const PolyComplex circle(circle_cells());
  CHECK(poincare_lefschetz_check(ConstructibleSheaf::constant(circle, 1)).ok);
  const PolyComplex interval(interval_cells());
  const auto pl = poincare_lefschetz_check(ConstructibleSheaf::constant(interval, 1));
  CHECK(pl.ok);
  CHECK(pl.chains[1].rank == 1);
  CHECK(pl.cech[0].rank == 1);
}

TEST_CASE("a flipped incidence sign breaks the chain-map identity") {
  for (const auto& name : {"circle", "torus", "focus_focus"}) {
    const TropicalManifold m(fixture(name).input);
    const PolyComplex& p = m.complex();
    const auto f = build_pushforward(Level(m, 0));
    // First maximal cell, first interior facet slot.
    const CellId sigma = p.maximal_cells().front();
    std::optional<std::size_t> slot;
    for (std::size_t s = 0; s < p.cell(sigma).facets.size() && !slot; ++s)
      if (p.is_interior(p.cell(sigma).facets[s].cell)) slot = s;
    REQUIRE(slot);
    const auto cmp = comparison_map(f, std::pair{sigma, *slot});
    INFO(name);
    CHECK_FALSE(cmp.chain_identity);
    CHECK_FALSE(poincare_lefschetz_check(f, std::pair{sigma, *slot}).ok);
  }
}
