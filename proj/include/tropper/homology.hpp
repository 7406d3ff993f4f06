#pragma once
// Cellular chain complexes with coefficients in a constructible sheaf, their
// homology via Smith normal form, and coordinates of cycles in homology.

#include "tropper/affine.hpp"

#include <set>

namespace tropper {

struct HomologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BasisLabel {
  CellId cell;
  std::size_t component;  // index of the section basis vector of Γ(cell)
  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

// d[i]: C_i → C_{i−1}; d[0] has zero rows.
struct ChainComplex {
  std::vector<IntMatrix> d;
  std::vector<std::vector<BasisLabel>> basis;
  std::vector<std::map<CellId, std::size_t>> offset;  // first basis index of each cell

  std::size_t top() const { return basis.empty() ? 0 : basis.size() - 1; }
  std::size_t dim(std::size_t i) const { return i < basis.size() ? basis[i].size() : 0; }
  bool squares_to_zero() const;
};

struct HomologyGroup {
  std::size_t rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
  std::string str() const;
};

struct HomologyResult {
  std::vector<HomologyGroup> groups;
  const HomologyGroup& operator[](std::size_t i) const { return groups.at(i); }
  friend bool operator==(const HomologyResult&, const HomologyResult&) = default;
};

// H of C_in → C → C_out where `in` maps into C and `out` leaves it.
HomologyGroup homology_at(const IntMatrix& in, const IntMatrix& out, std::size_t dim);
HomologyResult homology(const ChainComplex& c);

// Cells of the closed subcomplex ∂K.
std::set<CellId> boundary_subcomplex(const PolyComplex& k);

// Relative chains C_i = ⊕_{dim τ = i, τ ∉ A} Γ(τ) with blocks ε·res(σ→τ).
ChainComplex simplicial_chain_complex(const PolyComplex& k, const std::set<CellId>& relative, const ConstructibleSheaf& f);

struct LevelComparison {
  HomologyResult base, refined;
  bool isomorphic = false;
};
LevelComparison barycentric_comparison(const ChainComplex& base, const ChainComplex& refined);

// Coordinates of a cycle in H_i: free part and torsion residues.
struct HomologyCoordinates {
  std::vector<Int> free;
  std::vector<std::pair<Int, Int>> torsion;  // (residue, order)
};

class HomologyBasis {
 public:
  HomologyBasis(const ChainComplex& c, std::size_t degree);
  std::size_t rank() const { return free_.size(); }
  // Throws unless z is a cycle of the chosen degree.
  HomologyCoordinates coordinates(const IntVector& z) const;
  bool is_boundary(const IntVector& z) const;

 private:
  std::size_t degree_;
  IntMatrix out_;      // ∂_i
  IntMatrix kernel_;   // columns: saturated basis of ker ∂_i
  IntMatrix U_;        // U·(coords of im ∂_{i+1})·V = D
  std::vector<Int> diag_;
  std::vector<std::size_t> free_;
  std::vector<std::size_t> torsion_;
};

}  // namespace tropper
