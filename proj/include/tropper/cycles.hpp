#pragma once
// Tropical 1-cycles: graphs in B∖Δ whose edges carry integral tangent
// sections, stored combinatorially as routes of piece crossings.
//
// Every section ξ of an edge is written in the frame of the maximal cell the
// edge starts in; crossing a piece applies its frame change. Balancing uses
// ε = +1 for incoming ends.

#include "tropper/homology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tropper {

struct CycleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A vertex sits in maximal cell `cell` close to the barycenter of the face
// `anchor` of that cell (the cell itself for a generic interior point). It
// lies on ∂B exactly when the anchor is a boundary face.
struct CycleVertex {
  CellId cell;
  FaceOccurrence anchor;
};

struct CycleEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  IntVector xi;                 // frame of the source vertex cell
  std::vector<PathStep> route;  // pieces crossed, in order
};

struct TropicalOneCycle {
  std::string name;
  std::vector<CycleVertex> vertices;
  std::vector<CycleEdge> edges;
};

// Throws CycleError on malformed routes, zero sections, anchors on Δ,
// interior vertices with one edge end or boundary vertices with more.
void validate_cycle(const TropicalManifold& m, const TropicalOneCycle& c);

// Maximal cell in which the route of an edge ends, and the frame change
// accumulated along it.
CellId route_end(const TropicalManifold& m, const TropicalOneCycle& c, std::size_t edge);
IntMatrix route_transport(const TropicalManifold& m, const TropicalOneCycle& c, std::size_t edge);

struct BalancingDefect {
  std::size_t vertex;
  IntVector sum;  // Σ ε ξ in the frame of the vertex cell
};
std::vector<BalancingDefect> balancing_defects(const TropicalManifold& m, const TropicalOneCycle& c);
bool check_balancing(const TropicalManifold& m, const TropicalOneCycle& c);

bool touches_boundary(const TropicalManifold& m, const TropicalOneCycle& c);
// Sum of valencies over all vertices.
std::size_t valency_sum(const TropicalOneCycle& c);

// One crossing of an edge with a refined codimension-one piece. Vectors and
// covectors are in the frame of the cell being left; d_p pairs positively
// with the direction of travel.
struct Crossing {
  std::size_t edge;
  std::size_t step;
  std::size_t piece;
  int from_side;
  int traverse;  // +1 when leaving the minus side of the piece's facet
  IntVector xi;
  IntCovector d;
  Int kink;
  Int pairing;  // ⟨d_p, ξ⟩
};
std::vector<Crossing> crossings(const TropicalManifold& m, const TropicalOneCycle& c);

// a: 1-cells of 𝒫 → ℤ, zero where absent.
using SkeletonWeights = std::map<CellId, Int>;

// Direction d_{v,ω} of the 1-cell ω at the end `slot` (0 or 1 in the facet list
// of ω), primitive, in the frame of the maximal cell `sigma` ⊇ ω.
IntVector edge_direction(const TropicalManifold& m, CellId omega, std::size_t slot, CellId sigma);

// Vertices where Σ a(ω) d_{v,ω} ≠ 0 in a common frame; boundary vertices skip.
std::vector<CellId> weight_imbalance(const TropicalManifold& m, const SkeletonWeights& a);

// Perturbed skeleton: one edge per ω with a(ω) ≠ 0, oriented away from the
// lower-id end of ω (the other end for ω in `flip`), with ξ = a(ω)·d_{v,ω}.
TropicalOneCycle from_skeleton_weights(const TropicalManifold& m, const SkeletonWeights& a, const std::string& name = "skeleton",
                                       const std::set<CellId>& flip = {});

TropicalOneCycle reversed(const TropicalManifold& m, const TropicalOneCycle& c);
TropicalOneCycle scaled(const TropicalOneCycle& c, const Int& factor);
TropicalOneCycle disjoint_union(const TropicalOneCycle& a, const TropicalOneCycle& b);

// Relative chains of the subdivision with coefficients in i_*Λ at level 1.
struct CycleHomology {
  const TropicalManifold* manifold;
  Level level;
  ConstructibleSheaf sheaf;
  ChainComplex chains;
  HomologyBasis basis;
  explicit CycleHomology(const TropicalManifold& m);
};

// Straightened subdivision 1-chain of a cycle; throws when a coefficient is
// not a section over its carrier.
IntVector straighten(const CycleHomology& h, const TropicalOneCycle& c);
HomologyCoordinates to_homology_class(const CycleHomology& h, const TropicalOneCycle& c);

struct GenerationResult {
  std::size_t achieved = 0;
  std::size_t target = 0;
  bool generates = false;
  std::vector<std::vector<Int>> classes;
};
GenerationResult generation_check(const CycleHomology& h, std::span<const TropicalOneCycle> cycles);

}  // namespace tropper
