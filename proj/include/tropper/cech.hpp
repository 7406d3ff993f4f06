#pragma once
// Čech cochains of a constructible sheaf over the cover of B by open
// neighbourhoods U_σ of the closed maximal cells, the filtration by the cell
// τ_I that is maximal in U_I, and the comparison with cellular chains.
//
// U_I is modelled by ∩_{σ∈I} σ; each connected component contributes one
// index whose sections are Γ(τ_I) for its unique maximal cell τ_I.

#include "tropper/homology.hpp"

namespace tropper {

struct CechIndex {
  std::vector<CellId> cells;  // ascending in the chosen total order
  CellId tau;                 // maximal cell of this component of ∩ cells
};

// d[i]: C^i → C^{i+1}.
struct CochainComplex {
  std::vector<std::vector<CechIndex>> index;
  std::vector<std::vector<std::size_t>> offset;  // first basis position per index
  std::vector<std::size_t> dims;
  std::vector<IntMatrix> d;
  bool squares_to_zero() const;
};

HomologyResult cohomology(const CochainComplex& c);

// `order` lists the maximal cells; empty means ascending ids.
CochainComplex cech_complex(const ConstructibleSheaf& f, std::vector<CellId> order = {});

// Graded piece C_τ^•: indices with τ_I = τ and the diagonal blocks of d.
struct GradedPiece {
  CellId tau;
  std::vector<std::vector<std::size_t>> members;  // per degree, positions in CochainComplex::index
  std::vector<IntMatrix> d;                       // on coefficient ℤ (section rank ignored)
};
std::vector<GradedPiece> filtration_graded(const CochainComplex& c, const PolyComplex& p);
HomologyResult graded_cohomology(const GradedPiece& g);

// True iff every interior graded piece has cohomology ℤ exactly in degree
// codim τ and every boundary piece is exact; `failures` lists offenders.
bool concentration_holds(const CochainComplex& constant_z, const PolyComplex& p, std::vector<std::string>* failures = nullptr);

struct ComparisonResult {
  ChainComplex chains;                 // relative cellular chains on 𝒫
  std::vector<IntMatrix> e1;           // d₁ on the E₁ page, indexed by chain degree: e1[i]: i → i−1
  bool chain_identity = false;         // d₁∘f = f∘∂ with f the block identity
  bool termwise_iso = false;
  std::string detail;
};

// Needs an oriented complex without self-incidence; `flip` negates the
// incidence sign of one (cell, slot) of the chain complex (negative control).
ComparisonResult comparison_map(const ConstructibleSheaf& f, std::optional<std::pair<CellId, std::size_t>> flip = std::nullopt);

struct PLCheck {
  bool ok = false;
  HomologyResult chains, cech;
  ComparisonResult comparison;
};
PLCheck poincare_lefschetz_check(const ConstructibleSheaf& f, std::optional<std::pair<CellId, std::size_t>> flip = std::nullopt);

}  // namespace tropper
