#include "tropper/cycles.hpp"

#include <algorithm>
#include <deque>

namespace tropper {

namespace {

std::string label(const PolyComplex& p, CellId c) {
  const auto& l = p.cell(c).label;
  return l.empty() ? "cell " + std::to_string(c.value) : l;
}

bool is_delta_anchor(const TropicalManifold& m, CellId face) {
  for (const auto& d : m.discriminant())
    if (d.edge == face) return true;
  return false;
}

// Occurrence of the facet sitting in a given slot (loops list their vertex twice).
int occurrence_of_slot(const PolyComplex& p, const Side& s) {
  const auto& fs = p.cell(s.cell).facets;
  int occ = 0;
  for (std::size_t i = 0; i < s.slot; ++i)
    if (fs[i].cell == fs[s.slot].cell) ++occ;
  return occ;
}

// Point where a route leaves or enters side s through a piece: the piece's corner.
FaceOccurrence corner_point(const TropicalManifold& m, std::size_t piece, const Side& s) {
  const auto& pc = m.pieces()[piece];
  if (m.rank() == 1) return {pc.parent, occurrence_of_slot(m.complex(), s)};
  return {pc.corner, 0};
}

IntVector primitive_integral(const RatPoint& v) {
  Int l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = boost::multiprecision::numerator(v[i] * Rational(l));
  if (out.is_zero()) throw CycleError("degenerate direction");
  return primitive_part(out).primitive;
}

// Shortest rotation between two corners of v through interior pieces with corner v.
std::vector<PathStep> rotation(const TropicalManifold& m, CellId v, const Coface& from, const Coface& to) {
  std::map<Coface, std::pair<Coface, PathStep>> parent;
  std::deque<Coface> q{from};
  std::set<Coface> seen{from};
  while (!q.empty() && !seen.count(to)) {
    const Coface a = q.front();
    q.pop_front();
    for (const auto& pc : m.pieces()) {
      if (pc.corner != v || !m.complex().is_interior(pc.parent)) continue;
      const auto& sd = m.sides(pc.parent);
      for (int k = 0; k < 2; ++k) {
        if (corner_of_side(m, sd[k], v) != a) continue;
        const Coface b = corner_of_side(m, sd[1 - k], v);
        if (!seen.insert(b).second) continue;
        parent.emplace(b, std::pair{a, PathStep{pc.index, k}});
        q.push_back(b);
      }
    }
  }
  if (!seen.count(to)) throw CycleError("no rotation around " + label(m.complex(), v) + " joins the two corners");
  std::vector<PathStep> out;
  for (Coface c = to; c != from;) {
    const auto& [prev, step] = parent.at(c);
    out.push_back(step);
    c = prev;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Coface corner_in(const TropicalManifold& m, CellId sigma, CellId omega, std::size_t slot) {
  if (m.rank() == 1) return {sigma, slot};
  const CellId v = m.complex().cell(omega).facets[slot].cell;
  const auto cs = m.complex().corners(sigma);
  return {sigma, static_cast<std::size_t>(std::find(cs.begin(), cs.end(), v) - cs.begin())};
}

CellId lowest_maximal_containing(const PolyComplex& p, CellId omega) {
  for (auto s : p.maximal_cells())
    if (p.is_face(omega, s)) return s;
  throw CycleError(label(p, omega) + " lies in no maximal cell");
}

}  // namespace

void validate_cycle(const TropicalManifold& m, const TropicalOneCycle& c) {
  const PolyComplex& p = m.complex();
  const int n = m.rank();
  if (c.edges.empty()) throw CycleError("cycle " + c.name + " has no edges");
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    const auto& v = c.vertices[i];
    if (v.cell.value >= p.size() || p.cell(v.cell).dim != n)
      throw CycleError("vertex " + std::to_string(i) + " does not sit in a maximal cell");
    if (v.anchor.face != v.cell) {
      const auto faces = p.proper_faces(v.cell);
      if (std::find(faces.begin(), faces.end(), v.anchor) == faces.end())
        throw CycleError("anchor of vertex " + std::to_string(i) + " is not a face of its cell");
    }
    if (is_delta_anchor(m, v.anchor.face)) throw CycleError("vertex " + std::to_string(i) + " sits on the discriminant");
  }
  std::vector<std::size_t> valency(c.vertices.size(), 0);
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto& ed = c.edges[e];
    if (ed.source >= c.vertices.size() || ed.target >= c.vertices.size())
      throw CycleError("edge " + std::to_string(e) + " names a missing vertex");
    if (ed.xi.size() != static_cast<std::size_t>(n)) throw CycleError("edge " + std::to_string(e) + " has a section of wrong rank");
    if (ed.xi.is_zero()) throw CycleError("edge " + std::to_string(e) + " carries the zero section");
    ++valency[ed.source];
    ++valency[ed.target];
    route_end(m, c, e);
  }
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    const bool on_boundary = p.in_boundary(c.vertices[i].anchor.face);
    if (on_boundary && valency[i] != 1)
      throw CycleError("vertex " + std::to_string(i) + " lies on the boundary but has valency " + std::to_string(valency[i]));
    if (!on_boundary && valency[i] < 2)
      throw CycleError("interior vertex " + std::to_string(i) + " has valency " + std::to_string(valency[i]));
  }
}

CellId route_end(const TropicalManifold& m, const TropicalOneCycle& c, std::size_t edge) {
  const auto& ed = c.edges.at(edge);
  CellId cur = c.vertices.at(ed.source).cell;
  for (std::size_t k = 0; k < ed.route.size(); ++k) {
    const auto& st = ed.route[k];
    if (st.piece >= m.pieces().size()) throw CycleError("route names a missing piece");
    if (st.from_side != 0 && st.from_side != 1) throw CycleError("from_side must be 0 or 1");
    const CellId rho = m.pieces()[st.piece].parent;
    if (!m.complex().is_interior(rho)) throw CycleError("route crosses the boundary facet " + label(m.complex(), rho));
    const auto& sd = m.sides(rho);
    if (sd[st.from_side].cell != cur)
      throw CycleError("step " + std::to_string(k) + " of edge " + std::to_string(edge) + " does not leave " + label(m.complex(), cur));
    cur = sd[1 - st.from_side].cell;
  }
  if (cur != c.vertices.at(ed.target).cell) throw CycleError("edge " + std::to_string(edge) + " does not end in its target cell");
  return cur;
}

IntMatrix route_transport(const TropicalManifold& m, const TropicalOneCycle& c, std::size_t edge) {
  route_end(m, c, edge);
  IntMatrix t = IntMatrix::identity(m.rank());
  for (const auto& st : c.edges.at(edge).route) t = m.crossing(st.piece, st.from_side) * t;
  return t;
}

std::vector<BalancingDefect> balancing_defects(const TropicalManifold& m, const TropicalOneCycle& c) {
  std::vector<IntVector> sum(c.vertices.size(), IntVector(m.rank()));
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto& ed = c.edges[e];
    sum[ed.target] += route_transport(m, c, e) * ed.xi;
    sum[ed.source] -= ed.xi;
  }
  std::vector<BalancingDefect> out;
  for (std::size_t i = 0; i < c.vertices.size(); ++i)
    if (!m.complex().in_boundary(c.vertices[i].anchor.face) && !sum[i].is_zero()) out.push_back({i, sum[i]});
  return out;
}

bool check_balancing(const TropicalManifold& m, const TropicalOneCycle& c) {
  validate_cycle(m, c);
  return balancing_defects(m, c).empty();
}

bool touches_boundary(const TropicalManifold& m, const TropicalOneCycle& c) {
  for (const auto& v : c.vertices)
    if (m.complex().in_boundary(v.anchor.face)) return true;
  return false;
}

std::size_t valency_sum(const TropicalOneCycle& c) {
  std::vector<std::size_t> val(c.vertices.size(), 0);
  for (const auto& e : c.edges) {
    ++val[e.source];
    ++val[e.target];
  }
  std::size_t nu = 0;
  for (auto v : val) nu += v;
  return nu;
}

std::vector<Crossing> crossings(const TropicalManifold& m, const TropicalOneCycle& c) {
  validate_cycle(m, c);
  std::vector<Crossing> out;
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    IntVector xi = c.edges[e].xi;
    const auto& route = c.edges[e].route;
    for (std::size_t k = 0; k < route.size(); ++k) {
      const auto& st = route[k];
      const CellId rho = m.pieces()[st.piece].parent;
      const IntMatrix cross = m.crossing(st.piece, st.from_side);
      const IntCovector d = m.primitive_normal(rho, 1 - st.from_side) * cross;
      // The route reaches the piece from the interior of the cell it leaves.
      const Side dep = m.sides(rho)[st.from_side];
      const RatPoint b = m.face_point(dep.cell, {dep.cell, 0});
      const RatPoint q = m.piece_point(st.piece, st.from_side);
      Rational dw = 0;
      for (std::size_t i = 0; i < b.size(); ++i) dw += Rational(d[i]) * (q[i] - b[i]);
      if (dw <= 0) throw CycleError("crossing normal does not follow the edge direction");
      out.push_back({e, k, st.piece, st.from_side, st.from_side == 0 ? 1 : -1, xi, d, m.kink(st.piece), pairing(d, xi)});
      xi = cross * xi;
    }
  }
  return out;
}

IntVector edge_direction(const TropicalManifold& m, CellId omega, std::size_t slot, CellId sigma) {
  const PolyComplex& p = m.complex();
  if (p.cell(omega).dim != 1) throw CycleError(label(p, omega) + " is not a 1-cell");
  if (!p.is_face(omega, sigma)) throw CycleError(label(p, omega) + " is not a face of " + label(p, sigma));
  const auto& chart = m.chart(sigma);
  const std::size_t a = corner_in(m, sigma, omega, slot).slot;
  const std::size_t b = corner_in(m, sigma, omega, 1 - slot).slot;
  RatPoint v(chart[a].size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = chart[b][i] - chart[a][i];
  return primitive_integral(v);
}

std::vector<CellId> weight_imbalance(const TropicalManifold& m, const SkeletonWeights& a) {
  const PolyComplex& p = m.complex();
  std::map<CellId, IntVector> sum;
  for (const auto& [omega, w] : a) {
    if (w == 0) continue;
    if (p.cell(omega).dim != 1) throw CycleError("skeleton weight on " + label(p, omega) + ", which is not a 1-cell");
    const CellId sigma = lowest_maximal_containing(p, omega);
    for (std::size_t slot = 0; slot < 2; ++slot) {
      const CellId v = p.cell(omega).facets[slot].cell;
      if (p.in_boundary(v)) continue;
      const auto cf = corner_frames(m, v);
      auto [it, fresh] = sum.try_emplace(v, IntVector(m.rank()));
      it->second += w * (cf.to_reference.at(corner_in(m, sigma, omega, slot)) * edge_direction(m, omega, slot, sigma));
    }
  }
  std::vector<CellId> bad;
  for (const auto& [v, s] : sum)
    if (!s.is_zero()) bad.push_back(v);
  return bad;
}

TropicalOneCycle from_skeleton_weights(const TropicalManifold& m, const SkeletonWeights& a, const std::string& name,
                                       const std::set<CellId>& flip) {
  const PolyComplex& p = m.complex();
  bool any = false;
  for (const auto& [omega, w] : a) any = any || w != 0;
  if (!any) throw CycleError("all skeleton weights vanish");
  const auto bad = weight_imbalance(m, a);
  if (!bad.empty()) throw CycleError("skeleton weights are unbalanced at " + label(p, bad.front()));

  TropicalOneCycle c;
  c.name = name;
  std::map<CellId, std::size_t> interior_vertex;
  std::map<CellId, Coface> home;
  auto vertex_for = [&](CellId v, CellId sigma) -> std::size_t {
    if (p.in_boundary(v)) {
      c.vertices.push_back({sigma, {v, 0}});
      return c.vertices.size() - 1;
    }
    auto it = interior_vertex.find(v);
    if (it != interior_vertex.end()) return it->second;
    const Coface h = corner_frames(m, v).reference;
    home[v] = h;
    int occ = 0;
    if (m.rank() == 1) occ = occurrence_of_slot(p, h);
    c.vertices.push_back({h.cell, {v, occ}});
    return interior_vertex[v] = c.vertices.size() - 1;
  };

  for (const auto& [omega, w] : a) {
    if (w == 0) continue;
    const auto& fs = p.cell(omega).facets;
    std::size_t s = fs[0].cell <= fs[1].cell ? 0 : 1;
    if (flip.count(omega)) s = 1 - s;
    const CellId v = fs[s].cell, u = fs[1 - s].cell;
    const CellId sigma = lowest_maximal_containing(p, omega);
    const Coface cv = corner_in(m, sigma, omega, s), cu = corner_in(m, sigma, omega, 1 - s);

    CycleEdge e;
    e.source = vertex_for(v, sigma);
    std::vector<PathStep> lead;
    if (!p.in_boundary(v)) lead = rotation(m, v, home.at(v), cv);
    e.target = vertex_for(u, sigma);
    std::vector<PathStep> tail;
    if (!p.in_boundary(u)) tail = rotation(m, u, cu, home.at(u));

    IntMatrix lead_t = IntMatrix::identity(m.rank());
    for (const auto& st : lead) lead_t = m.crossing(st.piece, st.from_side) * lead_t;
    e.xi = unimodular_inverse(lead_t) * (w * edge_direction(m, omega, s, sigma));
    e.route = lead;
    e.route.insert(e.route.end(), tail.begin(), tail.end());
    c.edges.push_back(std::move(e));
  }
  validate_cycle(m, c);
  if (valency_sum(c) % 2) throw CycleError("odd valency sum on a skeleton cycle");
  return c;
}

TropicalOneCycle reversed(const TropicalManifold& m, const TropicalOneCycle& c) {
  TropicalOneCycle r = c;
  r.name = c.name + "^-1";
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    auto& ed = r.edges[e];
    ed.xi = route_transport(m, c, e) * c.edges[e].xi;
    std::swap(ed.source, ed.target);
    std::reverse(ed.route.begin(), ed.route.end());
    for (auto& st : ed.route) st.from_side = 1 - st.from_side;
  }
  return r;
}

TropicalOneCycle scaled(const TropicalOneCycle& c, const Int& factor) {
  if (factor == 0) throw CycleError("scaling a cycle by zero");
  TropicalOneCycle r = c;
  r.name = c.name + "*" + factor.str();
  for (auto& e : r.edges) e.xi *= factor;
  return r;
}

TropicalOneCycle disjoint_union(const TropicalOneCycle& a, const TropicalOneCycle& b) {
  TropicalOneCycle r = a;
  r.name = a.name + "+" + b.name;
  const std::size_t off = a.vertices.size();
  r.vertices.insert(r.vertices.end(), b.vertices.begin(), b.vertices.end());
  for (auto e : b.edges) {
    e.source += off;
    e.target += off;
    r.edges.push_back(std::move(e));
  }
  return r;
}

CycleHomology::CycleHomology(const TropicalManifold& m)
    : manifold(&m),
      level(m, 1),
      sheaf(build_pushforward(level)),
      chains(simplicial_chain_complex(level.complex(), boundary_subcomplex(level.complex()), sheaf)),
      basis(chains, 1) {}

IntVector straighten(const CycleHomology& h, const TropicalOneCycle& c) {
  const TropicalManifold& m = *h.manifold;
  const BarySubdivision& bary = m.bary();
  const PolyComplex& k = bary.complex;
  validate_cycle(m, c);
  IntVector z(h.chains.dim(1));

  // Adds ±(section) on the subdivision edge joining b_σ and b_x.
  auto spoke = [&](CellId sigma, const FaceOccurrence& x, const IntVector& xi, bool towards_x) {
    const CellId e = bary.by_flag.at(Flag{{{sigma, 0}, x}});
    const CellId bx = bary.barycenter[x.face.value];
    const auto& fs = k.cell(e).facets;
    std::size_t slot = 0;
    while (fs[slot].cell != bx) ++slot;
    const int s = k.incidence_sign(e, slot) * (towards_x ? 1 : -1);
    auto it = h.chains.offset[1].find(e);
    if (it == h.chains.offset[1].end()) return;
    const auto y = solve_integral(h.sheaf.home_basis(e), xi);
    if (!y) throw CycleError("section " + xi.str() + " is not a section over " + std::to_string(e.value) + " of i_*Lambda");
    for (std::size_t j = 0; j < y->size(); ++j) z[it->second + j] += s * (*y)[j];
  };
  auto segment = [&](CellId sigma, const FaceOccurrence& x, const FaceOccurrence& y, const IntVector& xi) {
    if (x.face != sigma) spoke(sigma, x, xi, false);
    if (y.face != sigma) spoke(sigma, y, xi, true);
  };

  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto& ed = c.edges[e];
    CellId cell = c.vertices[ed.source].cell;
    FaceOccurrence at = c.vertices[ed.source].anchor;
    IntVector xi = ed.xi;
    for (const auto& st : ed.route) {
      const auto& sd = m.sides(m.pieces()[st.piece].parent);
      segment(cell, at, corner_point(m, st.piece, sd[st.from_side]), xi);
      xi = m.crossing(st.piece, st.from_side) * xi;
      cell = sd[1 - st.from_side].cell;
      at = corner_point(m, st.piece, sd[1 - st.from_side]);
    }
    segment(cell, at, c.vertices[ed.target].anchor, xi);
  }
  return z;
}

HomologyCoordinates to_homology_class(const CycleHomology& h, const TropicalOneCycle& c) {
  return h.basis.coordinates(straighten(h, c));
}

GenerationResult generation_check(const CycleHomology& h, std::span<const TropicalOneCycle> cycles) {
  GenerationResult g;
  g.target = h.basis.rank();
  IntMatrix rows(cycles.size(), g.target);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const auto coords = to_homology_class(h, cycles[i]);
    g.classes.push_back(coords.free);
    for (std::size_t j = 0; j < g.target; ++j) rows(i, j) = coords.free[j];
  }
  g.achieved = cycles.empty() || g.target == 0 ? 0 : tropper::rank(rows);
  g.generates = g.achieved == g.target;
  return g;
}

}  // namespace tropper
