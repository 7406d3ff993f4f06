#include "tropper/affine.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace tropper {

namespace {

RatPoint average(const std::vector<RatPoint>& pts, const std::vector<std::size_t>& idx) {
  RatPoint out(pts.front().size(), Rational(0));
  for (auto i : idx)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += pts[i][k];
  for (auto& x : out) x /= static_cast<long long>(idx.size());
  return out;
}

IntVector clear_denominators(const RatPoint& v) {
  Int l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = boost::multiprecision::numerator(v[i] * Rational(l));
  return out;
}

Rational pair_rational(const IntCovector& c, const RatPoint& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += Rational(c[i]) * v[i];
  return s;
}

RatPoint apply_rational(const IntMatrix& m, const RatPoint& v) {
  RatPoint out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += Rational(m(i, j)) * v[j];
  return out;
}

int sign_of_det(std::vector<RatPoint> rows) {
  const std::size_t n = rows.size();
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && rows[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(rows[piv], rows[c]);
      sign = -sign;
    }
    if (rows[c][c] < 0) sign = -sign;
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = rows[r][c] / rows[c][c];
      for (std::size_t k = c; k < n; ++k) rows[r][k] -= f * rows[c][k];
    }
  }
  return sign;
}

}  // namespace

TropicalManifold::TropicalManifold(ManifoldInput in) : p_(std::move(in.complex)), single_parameter_(in.single_parameter) {
  n_ = p_.dim();
  if (n_ < 1) throw AffineError("complex must have positive dimension");
  bary_ = barycentric_subdivide(p_);
  build_pieces();

  charts_.assign(p_.size(), {});
  std::vector<bool> seen(p_.size(), false);
  for (auto& c : in.charts) {
    if (c.cell.value >= p_.size() || p_.cell(c.cell).dim != n_) throw AffineError("chart for a non-maximal cell");
    if (seen[c.cell.value]) throw AffineError("two charts for " + cell_name(p_, c.cell));
    seen[c.cell.value] = true;
    if (c.corners.size() != p_.corners(c.cell).size())
      throw AffineError("chart of " + cell_name(p_, c.cell) + " has the wrong number of corners");
    for (const auto& x : c.corners)
      if (x.size() != static_cast<std::size_t>(n_)) throw AffineError("chart coordinate of wrong length");
    charts_[c.cell.value] = std::move(c.corners);
  }
  for (auto s : p_.maximal_cells()) {
    if (!seen[s.value]) throw AffineError("missing chart for " + cell_name(p_, s));
    std::vector<IntVector> t = face_tangents(s, {s, 0});
    if (tropper::rank(IntMatrix::from_columns(t, n_)) != static_cast<std::size_t>(n_))
      throw AffineError("degenerate embedding of " + cell_name(p_, s));
  }

  build_transports(in.transports);
  check_transports();
  build_kinks(in.kinks);
  build_discriminant(in.discriminant);
}

void TropicalManifold::build_pieces() {
  pieces_ = refined_cells(p_, bary_);
  for (const auto& pc : pieces_) piece_by_bary_[pc.bary_cell] = pc.index;
  sides_.assign(p_.size(), {});
  for (auto r : p_.cells_of_dim(n_ - 1)) {
    const auto& co = p_.cofaces(r);
    sides_[r.value] = {co.front(), co.back()};
  }
}

std::vector<std::size_t> TropicalManifold::pieces_of(CellId facet) const {
  std::vector<std::size_t> out;
  for (const auto& pc : pieces_)
    if (pc.parent == facet) out.push_back(pc.index);
  return out;
}

std::optional<std::size_t> TropicalManifold::piece_of_bary_cell(CellId c) const {
  auto it = piece_by_bary_.find(c);
  if (it == piece_by_bary_.end()) return std::nullopt;
  return it->second;
}

std::size_t TropicalManifold::piece_near(CellId facet, std::optional<CellId> context) const {
  const auto ps = pieces_of(facet);
  if (ps.empty()) throw AffineError(cell_name(p_, facet) + " has no pieces");
  if (context)
    for (auto i : ps)
      if (p_.is_face(pieces_[i].corner, *context)) return i;
  return ps.front();
}

int TropicalManifold::side_index(CellId facet, const Side& s) const {
  const auto& sd = sides(facet);
  if (sd[0] == s) return 0;
  if (sd[1] == s) return 1;
  throw AffineError(cell_name(p_, s.cell) + " is not a side of " + cell_name(p_, facet));
}

IntMatrix TropicalManifold::crossing(std::size_t piece, int from_side) const {
  return from_side == 0 ? transport_.at(piece) : inverse_.at(piece);
}

FaceOccurrence TropicalManifold::facet_occurrence(CellId facet, const Side& s) const {
  return {facet, p_.is_loop(s.cell) ? static_cast<int>(s.slot) : 0};
}

RatPoint TropicalManifold::face_point(CellId sigma, FaceOccurrence f) const {
  return average(chart(sigma), p_.corner_indices(sigma, f));
}

RatPoint TropicalManifold::piece_point(std::size_t piece, int side) const {
  const auto& pc = pieces_.at(piece);
  const Side& s = sides(pc.parent)[side];
  const Flag& fl = bary_.flags[pc.bary_cell.value];
  RatPoint out(n_, Rational(0));
  for (const auto& l : fl.links) {
    const int occ = p_.is_loop(s.cell) ? static_cast<int>(s.slot) : 0;
    const auto q = face_point(s.cell, {l.face, occ});
    for (int k = 0; k < n_; ++k) out[k] += q[k];
  }
  for (auto& x : out) x /= static_cast<long long>(fl.links.size());
  return out;
}

std::vector<IntVector> TropicalManifold::face_tangents(CellId sigma, FaceOccurrence f) const {
  const auto idx = p_.corner_indices(sigma, f);
  const auto& pts = chart(sigma);
  std::vector<IntVector> out;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    RatPoint d(n_);
    for (int k = 0; k < n_; ++k) d[k] = pts[idx[i]][k] - pts[idx[0]][k];
    auto v = clear_denominators(d);
    if (!v.is_zero()) out.push_back(v);
  }
  return out;
}

IntCovector TropicalManifold::primitive_normal(CellId facet, int side) const {
  const Side& s = sides(facet)[side];
  const auto f = facet_occurrence(facet, s);
  const auto tangents = face_tangents(s.cell, f);
  std::vector<IntVector> ker;
  if (tangents.empty()) {
    for (int i = 0; i < n_; ++i) {
      IntVector e(n_);
      e[i] = 1;
      ker.push_back(e);
    }
  } else {
    IntMatrix rows = IntMatrix::from_columns(tangents, n_).transpose();
    ker = integer_kernel(rows);
  }
  if (ker.size() != 1) throw AffineError("degenerate embedding of " + cell_name(p_, facet));
  IntCovector d(std::vector<Int>(ker[0].entries().begin(), ker[0].entries().end()));
  RatPoint w = face_point(s.cell, {s.cell, 0});
  const RatPoint q = face_point(s.cell, f);
  for (int k = 0; k < n_; ++k) w[k] -= q[k];
  const Rational v = pair_rational(d, w);
  if (v == 0) throw AffineError("degenerate embedding of " + cell_name(p_, facet));
  if (v < 0) d = -d;
  return d;
}

void TropicalManifold::build_transports(const std::vector<TransportDecl>& decls) {
  transport_.assign(pieces_.size(), IntMatrix::identity(n_));
  for (const auto& d : decls) {
    if (d.facet.value >= p_.size() || p_.cell(d.facet).dim != n_ - 1 || !p_.is_interior(d.facet))
      throw AffineError("transport declared on a cell that is not an interior facet");
    if (d.matrix.rows() != static_cast<std::size_t>(n_) || !d.matrix.is_square())
      throw AffineError("transport matrix of wrong size");
    const auto& sd = sides(d.facet);
    int from = -1;
    for (int k = 0; k < 2; ++k)
      if (sd[k].cell == d.from && (!d.from_slot || *d.from_slot == sd[k].slot)) {
        if (from >= 0) throw AffineError("transport side is ambiguous; give the slot");
        from = k;
      }
    if (from < 0) throw AffineError("transport source is not a side of " + cell_name(p_, d.facet));
    const IntMatrix fwd = from == 0 ? d.matrix : unimodular_inverse(d.matrix);
    std::vector<std::size_t> targets;
    for (auto i : pieces_of(d.facet))
      if (d.corners.empty() || std::count(d.corners.begin(), d.corners.end(), pieces_[i].corner)) targets.push_back(i);
    if (targets.empty()) throw AffineError("transport names no piece of " + cell_name(p_, d.facet));
    for (auto i : targets) transport_[i] = fwd;
  }
  inverse_.clear();
  for (const auto& t : transport_) inverse_.push_back(unimodular_inverse(t));
}

void TropicalManifold::check_transports() const {
  for (const auto& pc : pieces_) {
    if (!p_.is_interior(pc.parent)) continue;
    const IntMatrix& t = transport_[pc.index];
    if (determinant(t) != 1) throw AffineError("transport across " + cell_name(p_, pc.parent) + " does not preserve orientation");
    const auto& sd = sides(pc.parent);
    const auto fm = facet_occurrence(pc.parent, sd[0]);
    const auto fp = facet_occurrence(pc.parent, sd[1]);
    const auto im = p_.corner_indices(sd[0].cell, fm);
    const auto ip = p_.corner_indices(sd[1].cell, fp);
    const auto cm = p_.corners(sd[0].cell);
    const auto cp = p_.corners(sd[1].cell);
    // Match corners of the facet by vertex id on both sides.
    for (std::size_t a = 1; a < im.size(); ++a) {
      auto where = [&](const std::vector<std::size_t>& idx, const std::vector<CellId>& cs, CellId v) {
        for (auto i : idx)
          if (cs[i] == v) return i;
        throw AffineError("facet corners do not match across " + cell_name(p_, pc.parent));
      };
      const CellId v0 = cm[im[0]], va = cm[im[a]];
      RatPoint um(n_), up(n_);
      for (int k = 0; k < n_; ++k) {
        um[k] = chart(sd[0].cell)[im[a]][k] - chart(sd[0].cell)[im[0]][k];
        up[k] = chart(sd[1].cell)[where(ip, cp, va)][k] - chart(sd[1].cell)[where(ip, cp, v0)][k];
      }
      if (apply_rational(t, um) != up) throw AffineError("transport across " + cell_name(p_, pc.parent) + " moves the facet tangent space");
    }
    RatPoint w = face_point(sd[0].cell, {sd[0].cell, 0});
    const RatPoint q = face_point(sd[0].cell, fm);
    for (int k = 0; k < n_; ++k) w[k] -= q[k];
    if (pair_rational(primitive_normal(pc.parent, 1), apply_rational(t, w)) >= 0)
      throw AffineError("transport across " + cell_name(p_, pc.parent) + " folds the two sides together");
  }
}

void TropicalManifold::build_kinks(const std::vector<KinkDecl>& decls) {
  kink_.assign(pieces_.size(), Int(0));
  std::vector<bool> set(pieces_.size(), false);
  for (const auto& d : decls) {
    if (d.facet.value >= p_.size() || p_.cell(d.facet).dim != n_ - 1)
      throw AffineError("kink declared on a cell that is not a facet");
    if (d.kink <= 0) throw AffineError("kinks must be positive (strict convexity)");
    bool any = false;
    for (auto i : pieces_of(d.facet))
      if (d.corners.empty() || std::count(d.corners.begin(), d.corners.end(), pieces_[i].corner)) {
        kink_[i] = d.kink;
        set[i] = true;
        any = true;
      }
    if (!any) throw AffineError("kink names no piece of " + cell_name(p_, d.facet));
  }
  for (const auto& pc : pieces_)
    if (p_.is_interior(pc.parent) && !set[pc.index]) throw AffineError("missing kink on " + cell_name(p_, pc.parent));
}

int TropicalManifold::side_of_flag(const Flag& f) const {
  const CellId sigma = f.top();
  const CellId rho = f.links.at(1).face;
  if (p_.is_loop(sigma)) return side_index(rho, {sigma, static_cast<std::size_t>(f.links[1].occurrence)});
  const auto& facets = p_.cell(sigma).facets;
  for (std::size_t s = 0; s < facets.size(); ++s)
    if (facets[s].cell == rho) return side_index(rho, {sigma, s});
  throw AffineError("flag does not pass through a facet");
}

IntMatrix TropicalManifold::bary_crossing(CellId e, CellId from) const {
  const auto piece = piece_of_bary_cell(e);
  if (!piece) return IntMatrix::identity(n_);
  return crossing(*piece, side_of_flag(bary_.flags.at(from.value)));
}

IntMatrix TropicalManifold::bary_loop(CellId vertex, CellId start) const {
  if (n_ != 2) throw AffineError("loops around subdivision vertices need a surface");
  const PolyComplex& k = bary_.complex;
  IntMatrix h = IntMatrix::identity(n_);
  CellId cur = start;
  std::set<CellId> visited;
  do {
    if (!visited.insert(cur).second) throw AffineError("loop around vertex does not close");
    const auto& vo = bary_.vertex_order[cur.value];
    const auto pos = static_cast<std::size_t>(std::find(vo.begin(), vo.end(), vertex) - vo.begin());
    if (pos == vo.size()) throw AffineError("loop leaves the star of the vertex");
    // (vertex, next, after) is positively ordered when the flag orientation is +1.
    const CellId next = vo[(pos + 1) % 3], after = vo[(pos + 2) % 3];
    const CellId far = k.cell(cur).orientation > 0 ? after : next;
    std::optional<CellId> exit;
    for (const auto& f : k.cell(cur).facets) {
      const auto& fv = bary_.vertex_order[f.cell.value];
      if (std::count(fv.begin(), fv.end(), vertex) && std::count(fv.begin(), fv.end(), far)) exit = f.cell;
    }
    if (!exit) throw AffineError("loop exit edge not found");
    const auto& co = k.cofaces(*exit);
    if (co.size() != 2) throw AffineError("loop around a boundary vertex");
    const CellId other = co[0].cell == cur ? co[1].cell : co[0].cell;
    h = bary_crossing(*exit, cur) * h;
    cur = other;
  } while (cur != start);
  return h;
}

void TropicalManifold::build_discriminant(const std::vector<DiscriminantDecl>& decls) {
  if (!decls.empty() && n_ != 2) throw AffineError("discriminant is supported on surfaces only");
  std::set<CellId> carriers;
  for (const auto& d : decls) {
    if (d.edge.value >= p_.size() || p_.cell(d.edge).dim != 1 || !p_.is_interior(d.edge))
      throw AffineError("discriminant carrier must be an interior edge");
    if (!p_.is_face(d.edge, d.reference_cell) || p_.cell(d.reference_cell).dim != n_)
      throw AffineError("discriminant reference cell must contain the carrier edge");
    if (!carriers.insert(d.edge).second) throw AffineError("two discriminant points on one edge");
    DiscriminantCell c;
    c.edge = d.edge;
    c.reference_cell = d.reference_cell;
    c.bary_vertex = bary_.barycenter[d.edge.value];
    std::optional<CellId> start;
    for (const auto& co : bary_.complex.cofaces(c.bary_vertex))
      for (const auto& top : bary_.complex.cofaces(co.cell))
        if (bary_.ancestor[top.cell.value] == d.reference_cell && (!start || top.cell < *start)) start = top.cell;
    c.monodromy = bary_loop(c.bary_vertex, *start);
    if (d.monodromy && *d.monodromy != c.monodromy)
      throw AffineError("declared monodromy at " + cell_name(p_, d.edge) + " is " + d.monodromy->str() +
                        " but the transports give " + c.monodromy.str());
    for (const auto& u : face_tangents(d.reference_cell, {d.edge, 0}))
      if (c.monodromy * u != u) throw AffineError("monodromy at " + cell_name(p_, d.edge) + " does not fix the edge direction");
    delta_.push_back(std::move(c));
  }
  if (n_ != 2) return;
  // Every other codimension-two point of the subdivision must have trivial holonomy.
  const PolyComplex& k = bary_.complex;
  for (auto x : k.cells_of_dim(0)) {
    const CellId a = bary_.ancestor[x.value];
    if (p_.in_boundary(a) || p_.cell(a).dim == n_ || carriers.count(a)) continue;
    const CellId start = k.cofaces(k.cofaces(x).front().cell).front().cell;
    if (bary_loop(x, start) != IntMatrix::identity(n_))
      throw AffineError("nontrivial monodromy around " + cell_name(p_, a) + " without a declared discriminant point");
  }
}

IntMatrix parallel_transport(const TropicalManifold& m, CellId start, std::span<const PathStep> steps) {
  IntMatrix t = IntMatrix::identity(m.rank());
  CellId cur = start;
  for (const auto& s : steps) {
    const auto& sd = m.sides(m.pieces().at(s.piece).parent);
    if (sd[s.from_side].cell != cur) throw AffineError("non-adjacent consecutive cells in path");
    t = m.crossing(s.piece, s.from_side) * t;
    cur = sd[1 - s.from_side].cell;
  }
  return t;
}

IntMatrix parallel_transport(const TropicalManifold& m, std::span<const CellId> cells) {
  const PolyComplex& p = m.complex();
  IntMatrix t = IntMatrix::identity(m.rank());
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    std::optional<std::pair<CellId, int>> via;
    for (auto r : p.cells_of_dim(m.rank() - 1)) {
      if (!p.is_interior(r)) continue;
      const auto& sd = m.sides(r);
      for (int k = 0; k < 2 && !via; ++k)
        if (sd[k].cell == cells[i] && sd[1 - k].cell == cells[i + 1]) via = {r, k};
      if (via) break;
    }
    if (!via) throw AffineError("non-adjacent consecutive cells in path");
    const auto ps = m.pieces_of(via->first);
    for (auto j : ps)
      if (m.piece_transport(j) != m.piece_transport(ps.front()))
        throw AffineError("path crosses a facet whose pieces carry different transports");
    t = m.crossing(ps.front(), via->second) * t;
  }
  return t;
}

bool kink_consistency(std::span<const Int> kinks, const TropicalManifold& m, bool single_parameter) {
  if (!single_parameter) return true;
  for (auto r : m.complex().cells_of_dim(m.rank() - 1)) {
    const auto ps = m.pieces_of(r);
    for (auto i : ps)
      if (kinks[i] != kinks[ps.front()]) return false;
  }
  return true;
}

bool kink_consistency(const TropicalManifold& m) {
  std::vector<Int> k;
  for (std::size_t i = 0; i < m.pieces().size(); ++i) k.push_back(m.kink(i));
  return kink_consistency(k, m, m.single_parameter());
}

Coface corner_of_side(const TropicalManifold& m, const Side& s, CellId v) {
  if (m.rank() == 1) return {s.cell, s.slot};
  const auto cs = m.complex().corners(s.cell);
  return {s.cell, static_cast<std::size_t>(std::find(cs.begin(), cs.end(), v) - cs.begin())};
}

namespace {

std::vector<Coface> corners_at(const PolyComplex& p, CellId v) {
  std::vector<Coface> out;
  for (auto s : p.maximal_cells()) {
    const auto cs = p.corners(s);
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (cs[i] == v) out.push_back({s, i});
  }
  return out;
}

// BFS over corners of v through the interior pieces with corner v. `visit`
// receives (from corner, to corner, piece, side left) for every traversal.
template <class Visit>
void walk_corners(const TropicalManifold& m, CellId v, const Coface& start, Visit&& visit) {
  std::set<Coface> seen{start};
  std::deque<Coface> q{start};
  while (!q.empty()) {
    const Coface a = q.front();
    q.pop_front();
    for (const auto& pc : m.pieces()) {
      if (pc.corner != v || !m.complex().is_interior(pc.parent)) continue;
      const auto& sd = m.sides(pc.parent);
      for (int k = 0; k < 2; ++k) {
        if (corner_of_side(m, sd[k], v) != a) continue;
        const Coface b = corner_of_side(m, sd[1 - k], v);
        const bool fresh = seen.insert(b).second;
        visit(a, b, pc.index, k, fresh);
        if (fresh) q.push_back(b);
      }
    }
  }
}

}  // namespace

CornerFrames corner_frames(const TropicalManifold& m, CellId v) {
  const PolyComplex& p = m.complex();
  if (p.cell(v).dim != 0) throw AffineError("corner frames need a vertex");
  const auto corners = corners_at(p, v);
  if (corners.empty()) throw AffineError("vertex lies in no maximal cell");
  CornerFrames f{v, corners.front(), {{corners.front(), IntMatrix::identity(m.rank())}}};
  walk_corners(m, v, corners.front(), [&](const Coface& a, const Coface& b, std::size_t piece, int k, bool fresh) {
    const IntMatrix fb = f.to_reference.at(a) * m.crossing(piece, 1 - k);
    if (fresh) f.to_reference[b] = fb;
    else if (f.to_reference.at(b) != fb) throw AffineError("nontrivial monodromy around " + cell_name(p, v));
  });
  if (f.to_reference.size() != corners.size()) throw AffineError("non-manifold fan at " + cell_name(p, v));
  return f;
}

LocalPL local_pl_representative(const TropicalManifold& m, CellId v) {
  const PolyComplex& p = m.complex();
  const int n = m.rank();
  const auto cf = corner_frames(m, v);
  const auto& frame = cf.to_reference;
  const auto corners = corners_at(p, v);

  LocalPL out;
  out.vertex = v;
  out.reference_cell = cf.reference.cell;
  out.slopes[cf.reference] = IntCovector(n);
  walk_corners(m, v, cf.reference, [&](const Coface& a, const Coface& b, std::size_t piece, int k, bool fresh) {
    const IntCovector mb =
        out.slopes.at(a) + m.kink(piece) * (m.primitive_normal(m.pieces()[piece].parent, 1 - k) * unimodular_inverse(frame.at(b)));
    if (fresh) out.slopes[b] = mb;
    else if (out.slopes.at(b) != mb) throw AffineError("kinks do not close up around " + cell_name(p, v));
  });

  // Rays: edges through v (n ≥ 2) or the two directions of the line (n = 1).
  for (const auto& c : corners) {
    const auto& pts = m.chart(c.cell);
    const auto cs = p.corners(c.cell);
    auto emit = [&](std::size_t other) {
      RatPoint d(n);
      for (int k = 0; k < n; ++k) d[k] = pts[other][k] - pts[c.slot][k];
      const IntVector r = frame.at(c) * primitive_part(clear_denominators(d)).primitive;
      for (const auto& [ray, val] : out.ray_values)
        if (ray == r) return;
      out.ray_values.push_back({r, pairing(out.slopes.at(c), r)});
    };
    if (n == 1) {
      emit(1 - c.slot);
      continue;
    }
    for (auto e : p.closure(c.cell)) {
      if (p.cell(e).dim != 1 || !p.is_face(v, e)) continue;
      const auto ends = p.corners(e);
      const CellId w = ends[0] == v ? ends[1] : ends[0];
      emit(static_cast<std::size_t>(std::find(cs.begin(), cs.end(), w) - cs.begin()));
    }
  }
  return out;
}

int geometric_incidence_sign(const std::vector<Rational>& outward_normal, const std::vector<RatPoint>& facet_basis,
                             const std::vector<RatPoint>& cell_basis) {
  std::vector<RatPoint> rows{outward_normal};
  rows.insert(rows.end(), facet_basis.begin(), facet_basis.end());
  return sign_of_det(rows) * sign_of_det(cell_basis);
}

// ---- working complexes ----

Level::Level(const TropicalManifold& m, int level) : m_(&m), level_(level) {
  if (level != 0 && level != 1) throw AffineError("level must be 0 or 1");
  const PolyComplex& k = complex();
  const int n = m.rank();
  star_max_.assign(k.size(), {});
  for (auto s : k.cells_of_dim(n))
    for (auto f : k.closure(s)) star_max_[f.value].push_back(s);

  const CellId base_ref = m.complex().maximal_cells().front();
  if (level == 0) {
    reference_ = base_ref;
  } else {
    std::optional<CellId> r;
    for (auto s : k.cells_of_dim(n))
      if (m.bary().ancestor[s.value] == base_ref) {
        r = s;
        break;
      }
    reference_ = *r;
  }

  // Transport from the reference to every maximal cell along a BFS tree.
  std::map<CellId, IntMatrix> from_ref{{reference_, IntMatrix::identity(n)}};
  std::deque<CellId> q{reference_};
  while (!q.empty()) {
    const CellId a = q.front();
    q.pop_front();
    const auto& facets = k.cell(a).facets;
    for (std::size_t s = 0; s < facets.size(); ++s) {
      const auto& co = k.cofaces(facets[s].cell);
      if (co.size() != 2) continue;
      const Coface& here = co[0] == Coface{a, s} ? co[0] : co[1];
      const Coface& there = co[0] == Coface{a, s} ? co[1] : co[0];
      if (here != Coface{a, s} || there.cell == a || from_ref.count(there.cell)) continue;
      from_ref[there.cell] = crossing(facets[s].cell, here, std::nullopt) * from_ref.at(a);
      q.push_back(there.cell);
    }
  }
  to_ref_.assign(k.size(), IntMatrix());
  for (const auto& [c, t] : from_ref) to_ref_[c.value] = unimodular_inverse(t);
  for (auto s : k.cells_of_dim(n))
    if (to_ref_[s.value].rows() == 0) throw AffineError("complex is not connected");
}

const PolyComplex& Level::complex() const { return level_ == 0 ? m_->complex() : m_->bary().complex; }

CellId Level::ancestor(CellId c) const { return level_ == 0 ? c : m_->bary().ancestor.at(c.value); }

CellId Level::frame_cell(CellId maximal) const { return ancestor(maximal); }

IntMatrix Level::crossing(CellId facet, const Coface& from, std::optional<CellId> context) const {
  if (level_ == 1) return m_->bary_crossing(facet, from.cell);
  const int side = m_->side_index(facet, from);
  return m_->crossing(m_->piece_near(facet, context), side);
}

bool Level::touches(CellId c, const DiscriminantCell& d) const {
  return level_ == 0 ? complex().is_face(d.edge, c) : complex().is_face(d.bary_vertex, c);
}

std::vector<CellId> Level::delta_star(const DiscriminantCell& d) const {
  return star_max_.at(level_ == 0 ? d.edge.value : d.bary_vertex.value);
}

CellId Level::delta_reference_cell(const DiscriminantCell& d) const {
  for (auto s : delta_star(d))
    if (ancestor(s) == d.reference_cell) return s;
  throw AffineError("discriminant reference cell not found");
}

CellId Level::home(CellId c) const { return star_max_.at(c.value).front(); }

IntMatrix Level::path_transport(const std::vector<CellId>& allowed, CellId from, CellId to, std::optional<CellId> through,
                                std::optional<CellId> context) const {
  const PolyComplex& k = complex();
  const int n = m_->rank();
  std::map<CellId, IntMatrix> reached{{from, IntMatrix::identity(n)}};
  std::deque<CellId> q{from};
  while (!q.empty() && !reached.count(to)) {
    const CellId a = q.front();
    q.pop_front();
    const auto& facets = k.cell(a).facets;
    for (std::size_t s = 0; s < facets.size(); ++s) {
      const CellId f = facets[s].cell;
      if (through && !k.is_face(*through, f)) continue;
      const auto& co = k.cofaces(f);
      if (co.size() != 2) continue;
      const Coface here{a, s};
      const Coface& there = co[0] == here ? co[1] : co[0];
      if (there.cell == a || reached.count(there.cell)) continue;
      if (!std::binary_search(allowed.begin(), allowed.end(), there.cell)) continue;
      reached[there.cell] = crossing(f, here, context) * reached.at(a);
      q.push_back(there.cell);
    }
  }
  if (!reached.count(to)) throw AffineError("no path inside the star");
  return reached.at(to);
}

IntMatrix Level::star_transport(CellId c, CellId from, CellId to) const {
  return path_transport(star_max_.at(c.value), from, to, c, c);
}

IntMatrix Level::delta_transport(const DiscriminantCell& d, CellId to) const {
  const CellId carrier = level_ == 0 ? d.edge : d.bary_vertex;
  return path_transport(delta_star(d), delta_reference_cell(d), to, carrier, carrier);
}

IntMatrix Level::to_reference(CellId maximal) const { return to_ref_.at(maximal.value); }

// ---- the pushforward sheaf ----

const IntMatrix& ConstructibleSheaf::restriction(CellId sigma, CellId tau) const {
  auto it = res_.find({sigma, tau});
  if (it == res_.end()) throw AffineError("restriction requested for a non-face pair");
  return it->second;
}

ConstructibleSheaf ConstructibleSheaf::constant(const PolyComplex& k, std::size_t r) {
  ConstructibleSheaf f;
  f.k_ = &k;
  f.stalk_.assign(k.size(), IntMatrix::identity(r));
  f.home_basis_ = f.stalk_;
  f.home_.resize(k.size());
  for (const auto& c : k.cells()) {
    f.home_[c.id.value] = c.id;
    for (auto t : k.closure(c.id)) f.res_[{c.id, t}] = IntMatrix::identity(r);
  }
  return f;
}

ConstructibleSheaf build_pushforward(const Level& lvl) {
  const PolyComplex& k = lvl.complex();
  const TropicalManifold& m = lvl.manifold();
  const std::size_t n = static_cast<std::size_t>(m.rank());
  ConstructibleSheaf f;
  f.k_ = &k;
  f.stalk_.resize(k.size());
  f.home_basis_.resize(k.size());
  f.home_.resize(k.size());
  for (const auto& c : k.cells()) {
    const CellId h = lvl.home(c.id);
    IntMatrix stacked(0, n);
    for (const auto& d : m.discriminant()) {
      if (!lvl.touches(c.id, d)) continue;
      const IntMatrix t = lvl.delta_transport(d, h);
      const IntMatrix mh = t * d.monodromy * unimodular_inverse(t);
      stacked = IntMatrix::vcat(stacked, mh - IntMatrix::identity(n));
    }
    IntMatrix basis = IntMatrix::identity(n);
    if (stacked.rows() > 0) {
      const auto ker = integer_kernel(stacked);
      basis = IntMatrix::from_columns(ker, n);
    }
    f.home_[c.id.value] = h;
    f.home_basis_[c.id.value] = basis;
    f.stalk_[c.id.value] = lvl.to_reference(h) * basis;
  }
  for (const auto& c : k.cells())
    for (auto t : k.closure(c.id)) {
      const IntMatrix tr = lvl.star_transport(t, f.home_[c.id.value], f.home_[t.value]);
      auto r = solve_integral(f.home_basis_[t.value], tr * f.home_basis_[c.id.value]);
      if (!r) throw AffineError("inconsistent monodromy: sections do not restrict integrally");
      f.res_[{c.id, t}] = *r;
    }
  return f;
}

}  // namespace tropper
