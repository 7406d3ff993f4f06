#pragma once
// Integral-affine data over a cell complex: charts of maximal cells, transports
// across refined codimension-one pieces, discriminant monodromy, kinks of the
// multivalued PL function and the constructible sheaf i_*Λ.
//
// Frames: every maximal cell σ carries Λ_σ = ℤⁿ with its chart coordinates.
// A transport of a piece maps the frame of the minus side to the plus side.

#include "tropper/complex.hpp"
#include "tropper/lattice.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tropper {

struct AffineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using RatPoint = std::vector<Rational>;

struct ChartDecl {
  CellId cell;
  std::vector<RatPoint> corners;  // one per PolyComplex::corners(cell)
};

struct TransportDecl {
  CellId facet;
  CellId from;
  std::optional<std::size_t> from_slot;  // needed only when both sides are one cell
  IntMatrix matrix;                      // frame(from) → frame(other side)
  std::vector<CellId> corners;           // pieces by corner vertex; empty: all
};

struct DiscriminantDecl {
  CellId edge;            // carrier is the barycenter of this edge (n = 2)
  CellId reference_cell;  // maximal cell whose frame expresses the generator
  std::optional<IntMatrix> monodromy;
};

struct KinkDecl {
  CellId facet;
  Int kink;
  std::vector<CellId> corners;  // pieces by corner vertex; empty: all
};

struct ManifoldInput {
  PolyComplex complex;
  std::vector<ChartDecl> charts;
  std::vector<TransportDecl> transports;
  std::vector<DiscriminantDecl> discriminant;
  std::vector<KinkDecl> kinks;
  bool single_parameter = true;
};

struct DiscriminantCell {
  CellId edge;
  CellId reference_cell;
  CellId bary_vertex;
  IntMatrix monodromy;  // derived loop product in the reference frame
};

// Side of a codimension-one cell: index 0 is the minus side, 1 the plus side.
using Side = Coface;

class TropicalManifold {
 public:
  explicit TropicalManifold(ManifoldInput in);

  int rank() const { return n_; }
  const PolyComplex& complex() const { return p_; }
  const BarySubdivision& bary() const { return bary_; }
  const std::vector<RefinedPiece>& pieces() const { return pieces_; }
  const std::vector<DiscriminantCell>& discriminant() const { return delta_; }
  bool single_parameter() const { return single_parameter_; }

  std::vector<std::size_t> pieces_of(CellId facet) const;
  std::optional<std::size_t> piece_of_bary_cell(CellId c) const;
  // The piece of `facet` whose corner lies in closure(context), lowest index first.
  std::size_t piece_near(CellId facet, std::optional<CellId> context) const;

  const std::array<Side, 2>& sides(CellId facet) const { return sides_.at(facet.value); }
  int side_index(CellId facet, const Side& s) const;  // 0 minus, 1 plus
  // Frame change when leaving `from` through the piece on its side.
  IntMatrix crossing(std::size_t piece, int from_side) const;
  const IntMatrix& piece_transport(std::size_t piece) const { return transport_.at(piece); }

  const Int& kink(std::size_t piece) const { return kink_.at(piece); }

  // Geometry in the chart of a maximal cell.
  const std::vector<RatPoint>& chart(CellId sigma) const { return charts_.at(sigma.value); }
  RatPoint face_point(CellId sigma, FaceOccurrence f) const;
  RatPoint piece_point(std::size_t piece, int side) const;
  // Tangent vectors of a face, scaled to integers, in the chart of sigma.
  std::vector<IntVector> face_tangents(CellId sigma, FaceOccurrence f) const;
  // Primitive covector vanishing on the facet and positive on the given side,
  // in that side's frame.
  IntCovector primitive_normal(CellId facet, int side) const;
  // Occurrence of `facet` inside the cell of side s.
  FaceOccurrence facet_occurrence(CellId facet, const Side& s) const;

  // Side of ρ on which the top simplex of a subdivision flag (σ ⊃ ρ ⊃ …) lies.
  int side_of_flag(const Flag& f) const;
  // Frame change leaving subdivision top cell `from` through its facet `e`.
  IntMatrix bary_crossing(CellId e, CellId from) const;
  // Holonomy of the positively oriented loop around a subdivision vertex of a
  // surface, starting and ending in the frame of top cell `start`.
  IntMatrix bary_loop(CellId vertex, CellId start) const;

 private:
  void build_pieces();
  void build_transports(const std::vector<TransportDecl>& decls);
  void check_transports() const;
  void build_discriminant(const std::vector<DiscriminantDecl>& decls);
  void build_kinks(const std::vector<KinkDecl>& decls);

  int n_ = 0;
  PolyComplex p_;
  BarySubdivision bary_;
  std::vector<RefinedPiece> pieces_;
  std::map<CellId, std::size_t> piece_by_bary_;
  std::vector<std::array<Side, 2>> sides_;
  std::vector<std::vector<RatPoint>> charts_;
  std::vector<IntMatrix> transport_;
  std::vector<IntMatrix> inverse_;
  std::vector<Int> kink_;
  std::vector<DiscriminantCell> delta_;
  bool single_parameter_ = true;
};

struct PathStep {
  std::size_t piece;
  int from_side;  // side of the piece's facet that the path leaves
};

// Product of piece crossings in path order; steps must chain through the
// cells of the facet sides.
IntMatrix parallel_transport(const TropicalManifold& m, CellId start, std::span<const PathStep> steps);
// Path given by maximal cells; each shared facet must carry a single transport.
IntMatrix parallel_transport(const TropicalManifold& m, std::span<const CellId> cells);

// Per-facet constancy of kinks; checked only in single-parameter mode.
bool kink_consistency(std::span<const Int> kinks, const TropicalManifold& m, bool single_parameter);
bool kink_consistency(const TropicalManifold& m);

// Corners of a vertex are (maximal cell, corner index). Each corner frame is
// identified with the frame of the lowest corner by transport through the
// pieces at the vertex; the map sends corner-frame vectors to the reference.
struct CornerFrames {
  CellId vertex;
  Coface reference;
  std::map<Coface, IntMatrix> to_reference;
};
CornerFrames corner_frames(const TropicalManifold& m, CellId vertex);
// Corner of a side of a facet at the vertex v.
Coface corner_of_side(const TropicalManifold& m, const Side& s, CellId v);

struct LocalPL {
  CellId vertex;
  CellId reference_cell;
  std::map<Coface, IntCovector> slopes;  // per corner (cell, corner index), reference frame
  std::vector<std::pair<IntVector, Int>> ray_values;  // primitive ray generator, φ_v value
};
LocalPL local_pl_representative(const TropicalManifold& m, CellId vertex);

// Sign of n∧(facet basis) against the cell orientation basis.
int geometric_incidence_sign(const std::vector<Rational>& outward_normal,
                             const std::vector<RatPoint>& facet_basis,
                             const std::vector<RatPoint>& cell_basis);

// A complex on which sheaf computations run: the base complex (level 0) or
// its barycentric subdivision (level 1), with frames inherited from 𝒫.
class Level {
 public:
  Level(const TropicalManifold& m, int level);
  const TropicalManifold& manifold() const { return *m_; }
  const PolyComplex& complex() const;
  int level() const { return level_; }
  CellId ancestor(CellId c) const;       // smallest 𝒫-cell containing c
  CellId frame_cell(CellId maximal) const;
  // Frame change leaving maximal cell `from.cell` through facet `facet`.
  IntMatrix crossing(CellId facet, const Coface& from, std::optional<CellId> context) const;
  // True when the discriminant cell lies in the closure of c.
  bool touches(CellId c, const DiscriminantCell& d) const;
  // Cells of this complex making up the star of the discriminant cell.
  std::vector<CellId> delta_star(const DiscriminantCell& d) const;
  CellId delta_reference_cell(const DiscriminantCell& d) const;
  // Transport from the reference cell of d to a maximal cell of its star.
  IntMatrix delta_transport(const DiscriminantCell& d, CellId to) const;

  CellId home(CellId c) const;  // lowest maximal cell containing c
  // Transport between two maximal cells containing c, inside the star of c.
  IntMatrix star_transport(CellId c, CellId from, CellId to) const;
  // Transport from a maximal cell to the reference frame.
  IntMatrix to_reference(CellId maximal) const;
  CellId reference_cell() const { return reference_; }

 private:
  // BFS through facets containing `through` among maximal cells in `allowed`.
  IntMatrix path_transport(const std::vector<CellId>& allowed, CellId from, CellId to, std::optional<CellId> through,
                           std::optional<CellId> context) const;
  const TropicalManifold* m_;
  int level_;
  CellId reference_;
  std::vector<std::vector<CellId>> star_max_;  // maximal cells containing each cell
  std::vector<IntMatrix> to_ref_;
};

class ConstructibleSheaf {
 public:
  ConstructibleSheaf() = default;
  const PolyComplex& complex() const { return *k_; }
  std::size_t rank_at(CellId c) const { return stalk_.at(c.value).cols(); }
  // Basis of Γ(c) as columns in the reference stalk.
  const IntMatrix& basis(CellId c) const { return stalk_.at(c.value); }
  // Basis of Γ(c) in the frame of the home maximal cell of c.
  const IntMatrix& home_basis(CellId c) const { return home_basis_.at(c.value); }
  CellId home(CellId c) const { return home_.at(c.value); }
  // Restriction Γ(σ) → Γ(τ) for τ a face of σ, in the chosen bases.
  const IntMatrix& restriction(CellId sigma, CellId tau) const;

  static ConstructibleSheaf constant(const PolyComplex& k, std::size_t rank);
  friend ConstructibleSheaf build_pushforward(const Level& lvl);

 private:
  const PolyComplex* k_ = nullptr;
  std::vector<IntMatrix> stalk_;
  std::vector<IntMatrix> home_basis_;
  std::vector<CellId> home_;
  std::map<std::pair<CellId, CellId>, IntMatrix> res_;
};

// Sections over closed cells of i_*Λ: vectors fixed by the monodromy of every
// discriminant cell in the closure, restrictions induced by transport.
ConstructibleSheaf build_pushforward(const Level& lvl);

}  // namespace tropper
