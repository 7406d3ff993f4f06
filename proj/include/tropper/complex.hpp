#pragma once
// Abstract oriented cell complexes: face poset, incidence signs, boundary,
// barycentric subdivision and the refined codimension-one pieces.
//
// A cell lists its facets in slots. A facet may occupy two slots only for a
// one-dimensional loop (an edge whose two ends are the same vertex) in a
// one-dimensional complex; every other cell has an embedded closure.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropper {

struct CellId {
  std::uint32_t value = 0;
  friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct FacetSlot {
  CellId cell;
  int base_sign = 1;  // sign before orientations are applied
};

struct Cell {
  CellId id;
  int dim = 0;
  std::vector<FacetSlot> facets;
  int orientation = 1;
  std::string label;
};

enum class ComplexIssue {
  DanglingFace,
  BadDimension,
  NonManifold,
  NonOrientable,
  BadIncidence,
  UnsupportedSelfIntersection,
};
std::string to_string(ComplexIssue k);

struct ValidationReport {
  struct Entry {
    ComplexIssue kind;
    std::string message;
  };
  std::vector<Entry> issues;
  bool ok() const { return issues.empty(); }
  bool has(ComplexIssue k) const;
  std::string summary() const;
};

struct ComplexError : std::runtime_error {
  ValidationReport report;
  explicit ComplexError(ValidationReport r);
  ComplexError(ComplexIssue kind, const std::string& msg);
};

ValidationReport validate(std::span<const Cell> cells);
// Orientation flags making every interior codimension-one cell receive
// opposite induced orientations, or nullopt when none exist.
std::optional<std::vector<int>> auto_orient(std::span<const Cell> cells);

struct Coface {
  CellId cell;
  std::size_t slot;  // position of the facet inside cell's facet list
  friend auto operator<=>(const Coface&, const Coface&) = default;
};

// A face of a cell together with which copy of it is meant; copies differ
// only for the two ends of a loop edge.
struct FaceOccurrence {
  CellId face;
  int occurrence = 0;
  friend auto operator<=>(const FaceOccurrence&, const FaceOccurrence&) = default;
};

class PolyComplex {
 public:
  PolyComplex() = default;
  // Throws ComplexError unless validate(cells) is clean.
  explicit PolyComplex(std::vector<Cell> cells);

  int dim() const { return dim_; }
  std::size_t size() const { return cells_.size(); }
  const Cell& cell(CellId c) const { return cells_.at(c.value); }
  std::span<const Cell> cells() const { return cells_; }
  const std::vector<CellId>& cells_of_dim(int d) const;
  std::optional<CellId> find_label(const std::string& label) const;

  const std::vector<Coface>& cofaces(CellId c) const { return cofaces_.at(c.value); }
  // All faces of c including c itself, ascending by id.
  const std::vector<CellId>& closure(CellId c) const { return closure_.at(c.value); }
  bool is_face(CellId tau, CellId sigma) const;
  // Proper faces with multiplicity (loop ends appear twice).
  std::vector<FaceOccurrence> proper_faces(CellId c) const;
  bool is_loop(CellId c) const;
  bool has_self_incidence() const;

  bool in_boundary(CellId c) const { return boundary_.at(c.value); }
  bool is_interior(CellId c) const { return !boundary_.at(c.value); }
  std::vector<CellId> maximal_cells() const { return cells_of_dim(dim_); }

  // Incidence sign ε of a facet slot: base sign times both orientations.
  int incidence_sign(CellId sigma, std::size_t slot) const;
  // Same, identified by the facet; the facet must occupy exactly one slot.
  int incidence_sign(CellId tau, CellId sigma) const;

  // Vertices of a maximal cell, one per corner: slot order for an edge,
  // ascending ids otherwise.
  std::vector<CellId> corners(CellId sigma) const;
  // Corner indices of a face occurrence inside sigma.
  std::vector<std::size_t> corner_indices(CellId sigma, FaceOccurrence f) const;

  long long euler_characteristic() const;

 private:
  std::vector<Cell> cells_;
  int dim_ = 0;
  std::vector<std::vector<CellId>> by_dim_;
  std::vector<std::vector<Coface>> cofaces_;
  std::vector<std::vector<CellId>> closure_;
  std::vector<bool> boundary_;
  std::map<std::string, CellId> labels_;
};

// Label of a cell, or #id when it has none.
std::string cell_name(const PolyComplex& p, CellId c);

// A chain of the face poset, top cell first, strictly decreasing.
struct Flag {
  std::vector<FaceOccurrence> links;  // links[0].occurrence is always 0
  CellId top() const { return links.front().face; }
  CellId bottom() const { return links.back().face; }
  friend auto operator<=>(const Flag&, const Flag&) = default;
};

struct BarySubdivision {
  PolyComplex complex;
  std::vector<Flag> flags;         // indexed by new cell id
  std::vector<CellId> ancestor;    // smallest old cell containing the new cell
  std::vector<CellId> barycenter;  // old cell -> new vertex at its barycenter
  std::map<Flag, CellId> by_flag;
  std::vector<std::vector<CellId>> vertex_order;  // new cell -> its vertices, top first
};

BarySubdivision barycentric_subdivide(const PolyComplex& p);

// Number of chains of the face poset of each length; equals the cell counts of
// the subdivision.
std::vector<std::size_t> flag_counts(const PolyComplex& p);

struct RefinedPiece {
  std::size_t index;  // position in the refined_cells list
  CellId parent;      // the codimension-one cell of the original complex
  CellId bary_cell;   // the (n−1)-simplex of the subdivision
  CellId corner;      // lowest-dimensional cell of the piece's flag (a vertex)
};

std::vector<RefinedPiece> refined_cells(const PolyComplex& p, const BarySubdivision& b);

// Boundary matrix of degree d in the cellular chain complex with ℤ coefficients,
// rows indexed by (d−1)-cells, columns by d-cells (positions in cells_of_dim).
std::vector<std::vector<int>> boundary_matrix(const PolyComplex& p, int d);

}  // namespace tropper
