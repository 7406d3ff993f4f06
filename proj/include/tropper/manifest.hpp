#pragma once
// JSON manifests: the complex, its affine data, gluing data, slab functions,
// explicit cycles and skeleton weights. Errors carry the line of the value
// that caused them.

#include "tropper/period.hpp"

#include <filesystem>
#include <string_view>

namespace tropper {

enum class ManifestIssue { Syntax, DanglingId, DimensionMismatch, Schema };
std::string to_string(ManifestIssue k);

struct ManifestError : std::runtime_error {
  ManifestIssue kind;
  int line;
  ManifestError(ManifestIssue k, int line, const std::string& source, const std::string& msg);
};

struct RouteDecl {
  CellId facet;
  std::optional<CellId> corner;
  int from_side;
};
struct CycleEdgeDecl {
  std::size_t source, target;
  IntVector xi;
  std::vector<RouteDecl> route;
};
struct CycleDecl {
  std::string name;
  std::vector<CycleVertex> vertices;
  std::vector<CycleEdgeDecl> edges;
};

struct GluingDecl {
  CellId facet;
  int side;
  std::vector<Complex> values;
  std::vector<CellId> corners;
};

struct SlabDecl {
  CellId facet;
  Complex constant{1, 0};
  int order = 0;
  std::size_t lattice_rank = 0;
  std::optional<ExactSeries> exact_terms;  // f̃, when every coefficient is rational
  FloatSeries terms{0, 0};                 // f̃
  bool exact_constant = false;
  std::vector<CellId> corners;
};

struct Manifest {
  std::string name;
  std::string description;
  std::string source;
  ManifoldInput input;
  std::vector<GluingDecl> gluing;
  std::vector<SlabDecl> slabs;
  std::vector<CycleDecl> cycles;
  std::vector<std::pair<std::string, SkeletonWeights>> skeleton_weights;
};

Manifest parse_manifest(std::string_view text, const std::string& source = "<manifest>");
Manifest load_manifest(const std::filesystem::path& path);

// Pieces named by a facet and optional corner list (empty: all pieces).
std::vector<std::size_t> select_pieces(const TropicalManifold& m, CellId facet, const std::vector<CellId>& corners);

PeriodData period_data(const TropicalManifold& m, const Manifest& mf);
TropicalOneCycle resolve_cycle(const TropicalManifold& m, const CycleDecl& d);
std::vector<TropicalOneCycle> explicit_cycles(const TropicalManifold& m, const Manifest& mf);

}  // namespace tropper
