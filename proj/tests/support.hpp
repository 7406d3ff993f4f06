#pragma once
// Small hand-built complexes and fixture loading shared by the unit tests.

#include "tropper/manifest.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace testing {

using namespace tropper;

inline CellId id(std::uint32_t v) { return CellId{v}; }

inline Cell cell(std::uint32_t i, int dim, std::vector<std::pair<std::uint32_t, int>> facets = {}, std::string label = {}) {
  Cell c;
  c.id = id(i);
  c.dim = dim;
  c.label = std::move(label);
  for (auto [f, s] : facets) c.facets.push_back({id(f), s});
  return c;
}

// 0, 1 vertices; 2, 3 edges 0→1 and 1→0.
inline std::vector<Cell> circle_cells() {
  return {cell(0, 0), cell(1, 0), cell(2, 1, {{0, -1}, {1, 1}}), cell(3, 1, {{1, -1}, {0, 1}})};
}

inline std::vector<Cell> interval_cells() { return {cell(0, 0), cell(1, 0), cell(2, 1, {{0, -1}, {1, 1}})}; }

// Triangle a b c with edges ab, bc, ca oriented around it.
inline std::vector<Cell> triangle_cells() {
  return {cell(0, 0),
          cell(1, 0),
          cell(2, 0),
          cell(3, 1, {{0, -1}, {1, 1}}),
          cell(4, 1, {{1, -1}, {2, 1}}),
          cell(5, 1, {{2, -1}, {0, 1}}),
          cell(6, 2, {{3, 1}, {4, 1}, {5, 1}})};
}

// Unit square: vertices 0 (0,0), 1 (1,0), 2 (1,1), 3 (0,1); bottom, right,
// top, left edges all oriented in the coordinate directions.
inline std::vector<Cell> square_cells() {
  return {cell(0, 0),
          cell(1, 0),
          cell(2, 0),
          cell(3, 0),
          cell(4, 1, {{0, -1}, {1, 1}}, "bottom"),
          cell(5, 1, {{1, -1}, {2, 1}}, "right"),
          cell(6, 1, {{3, -1}, {2, 1}}, "top"),
          cell(7, 1, {{0, -1}, {3, 1}}, "left"),
          cell(8, 2, {{4, 1}, {5, 1}, {6, -1}, {7, -1}}, "square")};
}

// Boundary of a tetrahedron filled in: a 3-cell with four triangular facets.
inline std::vector<Cell> tetrahedron_cells() {
  // Vertices 0..3, edges ij for i<j oriented i→j.
  std::vector<Cell> cs;
  for (std::uint32_t v = 0; v < 4; ++v) cs.push_back(cell(v, 0));
  std::uint32_t next = 4;
  std::map<std::pair<int, int>, std::uint32_t> edge;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      edge[{i, j}] = next;
      cs.push_back(cell(next++, 1, {{static_cast<std::uint32_t>(i), -1}, {static_cast<std::uint32_t>(j), 1}}));
    }
  // Face ijk has boundary ij + jk − ik.
  std::vector<std::uint32_t> faces;
  std::vector<int> face_sign;
  for (int skip = 0; skip < 4; ++skip) {
    std::vector<int> v;
    for (int x = 0; x < 4; ++x)
      if (x != skip) v.push_back(x);
    faces.push_back(next);
    cs.push_back(cell(next++, 2, {{edge[{v[0], v[1]}], 1}, {edge[{v[1], v[2]}], 1}, {edge[{v[0], v[2]}], -1}}));
    face_sign.push_back(skip % 2 ? -1 : 1);
  }
  std::vector<std::pair<std::uint32_t, int>> tf;
  for (std::size_t i = 0; i < faces.size(); ++i) tf.push_back({faces[i], face_sign[i]});
  cs.push_back(cell(next, 3, tf));
  return cs;
}

// Flat surface from cells and vertex coordinates; every interior
// codimension-one cell gets kink `kink`.
inline ManifoldInput planar(std::vector<Cell> cells, const std::map<std::uint32_t, std::vector<long long>>& coords, long long kink = 1) {
  ManifoldInput in;
  in.complex = PolyComplex(std::move(cells));
  const auto& p = in.complex;
  for (auto s : p.maximal_cells()) {
    ChartDecl c{s, {}};
    for (auto v : p.corners(s)) {
      RatPoint x;
      for (auto q : coords.at(v.value)) x.emplace_back(q);
      c.corners.push_back(x);
    }
    in.charts.push_back(c);
  }
  for (auto r : p.cells_of_dim(p.dim() - 1))
    if (p.is_interior(r)) in.kinks.push_back({r, Int(kink), {}});
  return in;
}

// nx × ny unit squares with lower-left corner at the origin. Vertex (i,j) has
// id i·(ny+1)+j; horizontal edges precede vertical ones.
inline ManifoldInput grid(int nx, int ny, long long kink = 1) {
  std::vector<Cell> cs;
  std::map<std::uint32_t, std::vector<long long>> xy;
  auto vid = [&](int i, int j) { return static_cast<std::uint32_t>(i * (ny + 1) + j); };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      cs.push_back(cell(vid(i, j), 0));
      xy[vid(i, j)] = {i, j};
    }
  std::uint32_t next = static_cast<std::uint32_t>(cs.size());
  std::map<std::pair<int, int>, std::uint32_t> h, v;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j <= ny; ++j) {
      h[{i, j}] = next;
      cs.push_back(cell(next++, 1, {{vid(i, j), -1}, {vid(i + 1, j), 1}}));
    }
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j < ny; ++j) {
      v[{i, j}] = next;
      cs.push_back(cell(next++, 1, {{vid(i, j), -1}, {vid(i, j + 1), 1}}));
    }
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      cs.push_back(cell(next++, 2, {{h[{i, j}], 1}, {v[{i + 1, j}], 1}, {h[{i, j + 1}], -1}, {v[{i, j}], -1}}));
  return planar(std::move(cs), xy, kink);
}

inline Manifest fixture(const std::string& name) { return load_manifest(std::string(FIXTURE_DIR) + "/" + name + ".json"); }

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"tate_k2", "interval", "circle", "torus", "focus_focus"};
  return names;
}

}  // namespace testing
