#include "tropper/complex.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace tropper {

std::string to_string(ComplexIssue k) {
  switch (k) {
    case ComplexIssue::DanglingFace: return "DanglingFace";
    case ComplexIssue::BadDimension: return "BadDimension";
    case ComplexIssue::NonManifold: return "NonManifold";
    case ComplexIssue::NonOrientable: return "NonOrientable";
    case ComplexIssue::BadIncidence: return "BadIncidence";
    case ComplexIssue::UnsupportedSelfIntersection: return "UnsupportedSelfIntersection";
  }
  return "?";
}

bool ValidationReport::has(ComplexIssue k) const {
  return std::any_of(issues.begin(), issues.end(), [k](const Entry& e) { return e.kind == k; });
}

std::string ValidationReport::summary() const {
  if (issues.empty()) return "ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << to_string(issues[i].kind) << ": " << issues[i].message;
  }
  return os.str();
}

ComplexError::ComplexError(ValidationReport r)
    : std::runtime_error(r.summary()), report(std::move(r)) {}

ComplexError::ComplexError(ComplexIssue kind, const std::string& msg)
    : ComplexError(ValidationReport{{{kind, msg}}}) {}

namespace {

std::string name_of(const Cell& c) {
  return c.label.empty() ? "#" + std::to_string(c.id.value) : c.label;
}

// Maximal-cell slots incident to each codimension-one cell.
std::vector<std::vector<Coface>> collect_cofaces(std::span<const Cell> cells) {
  std::vector<std::vector<Coface>> co(cells.size());
  for (const auto& c : cells)
    for (std::size_t s = 0; s < c.facets.size(); ++s) co[c.facets[s].cell.value].push_back({c.id, s});
  return co;
}

int top_dim(std::span<const Cell> cells) {
  int n = 0;
  for (const auto& c : cells) n = std::max(n, c.dim);
  return n;
}

}  // namespace

ValidationReport validate(std::span<const Cell> cells) {
  ValidationReport rep;
  auto add = [&](ComplexIssue k, std::string m) { rep.issues.push_back({k, std::move(m)}); };
  const std::size_t N = cells.size();
  if (N == 0) {
    add(ComplexIssue::BadDimension, "empty complex");
    return rep;
  }
  for (std::size_t i = 0; i < N; ++i)
    if (cells[i].id.value != i) {
      add(ComplexIssue::DanglingFace, "cell ids must be dense and ordered");
      return rep;
    }
  for (const auto& c : cells) {
    if (c.orientation != 1 && c.orientation != -1)
      add(ComplexIssue::BadIncidence, name_of(c) + " has orientation other than ±1");
    if (c.dim == 0 && !c.facets.empty()) add(ComplexIssue::BadDimension, name_of(c) + " is a vertex with facets");
    if (c.dim > 0 && c.facets.empty()) add(ComplexIssue::BadDimension, name_of(c) + " has no facets");
    if (c.dim == 1 && c.facets.size() != 2) add(ComplexIssue::BadDimension, name_of(c) + " is an edge without two ends");
    for (const auto& f : c.facets) {
      if (f.cell.value >= N) {
        add(ComplexIssue::DanglingFace, name_of(c) + " references missing cell " + std::to_string(f.cell.value));
        continue;
      }
      if (cells[f.cell.value].dim != c.dim - 1)
        add(ComplexIssue::BadDimension, name_of(c) + " has facet " + name_of(cells[f.cell.value]) + " of wrong dimension");
      if (f.base_sign != 1 && f.base_sign != -1)
        add(ComplexIssue::BadIncidence, name_of(c) + " has a base sign other than ±1");
    }
  }
  if (!rep.ok()) return rep;

  const int n = top_dim(cells);
  for (const auto& c : cells) {
    std::set<std::uint32_t> seen;
    bool repeated = false;
    for (const auto& f : c.facets) repeated |= !seen.insert(f.cell.value).second;
    if (repeated && !(c.dim == 1 && n == 1))
      add(ComplexIssue::UnsupportedSelfIntersection, name_of(c) + " meets itself along a facet");
  }

  // ∂∂ = 0 on base signs; orientations factor out of every term.
  for (const auto& c : cells) {
    std::map<std::uint32_t, int> acc;
    for (const auto& f : c.facets)
      for (const auto& g : cells[f.cell.value].facets) acc[g.cell.value] += f.base_sign * g.base_sign;
    for (const auto& [k, v] : acc)
      if (v != 0) add(ComplexIssue::BadIncidence, "boundary of boundary of " + name_of(c) + " is nonzero");
  }

  auto co = collect_cofaces(cells);
  for (const auto& c : cells) {
    if (c.dim == n) continue;
    if (co[c.id.value].empty()) add(ComplexIssue::NonManifold, name_of(c) + " is not a face of any higher cell");
  }
  for (const auto& c : cells) {
    if (c.dim != n - 1) continue;
    const auto k = co[c.id.value].size();
    if (k > 2) add(ComplexIssue::NonManifold, name_of(c) + " has " + std::to_string(k) + " cofaces");
  }

  // Stars of lower cells must be connected through codimension-one cells.
  if (rep.ok() && n >= 2) {
    std::vector<std::set<std::uint32_t>> clos(N);
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cells[a].dim < cells[b].dim; });
    for (auto i : order) {
      clos[i].insert(static_cast<std::uint32_t>(i));
      for (const auto& f : cells[i].facets) clos[i].insert(clos[f.cell.value].begin(), clos[f.cell.value].end());
    }
    for (const auto& t : cells) {
      if (t.dim >= n - 1) continue;
      std::vector<std::uint32_t> maxc;
      for (const auto& c : cells)
        if (c.dim == n && clos[c.id.value].count(t.id.value)) maxc.push_back(c.id.value);
      if (maxc.empty()) continue;
      std::set<std::uint32_t> reached{maxc.front()};
      std::deque<std::uint32_t> q{maxc.front()};
      while (!q.empty()) {
        auto s = q.front();
        q.pop_front();
        for (const auto& f : cells[s].facets) {
          if (!clos[f.cell.value].count(t.id.value)) continue;
          for (const auto& cf : co[f.cell.value])
            if (reached.insert(cf.cell.value).second) q.push_back(cf.cell.value);
        }
      }
      if (reached.size() != maxc.size()) add(ComplexIssue::NonManifold, "star of " + name_of(t) + " is pinched");
    }
  }

  if (rep.ok()) {
    for (const auto& r : cells) {
      if (r.dim != n - 1 || co[r.id.value].size() != 2) continue;
      int total = 0;
      for (const auto& cf : co[r.id.value]) {
        const auto& s = cells[cf.cell.value];
        total += s.facets[cf.slot].base_sign * s.orientation * r.orientation;
      }
      if (total != 0) {
        const bool fixable = auto_orient(cells).has_value();
        add(ComplexIssue::NonOrientable, name_of(r) + (fixable ? " receives equal induced orientations (stored orientation inconsistent)"
                                                               : " receives equal induced orientations (complex is not orientable)"));
      }
    }
  }
  return rep;
}

std::optional<std::vector<int>> auto_orient(std::span<const Cell> cells) {
  const int n = top_dim(cells);
  auto co = collect_cofaces(cells);
  std::vector<int> ori(cells.size());
  for (const auto& c : cells) ori[c.id.value] = c.orientation;
  std::vector<int> fixed(cells.size(), 0);
  for (const auto& start : cells) {
    if (start.dim != n || fixed[start.id.value]) continue;
    fixed[start.id.value] = 1;
    std::deque<std::uint32_t> q{start.id.value};
    while (!q.empty()) {
      auto s = q.front();
      q.pop_front();
      for (const auto& f : cells[s].facets) {
        const auto& cf = co[f.cell.value];
        if (cf.size() != 2) continue;
        const auto& a = cf[0];
        const auto& b = cf[1];
        const int sa = cells[a.cell.value].facets[a.slot].base_sign;
        const int sb = cells[b.cell.value].facets[b.slot].base_sign;
        if (a.cell == b.cell) {
          if (sa + sb != 0) return std::nullopt;
          continue;
        }
        const auto other = (a.cell.value == s) ? b : a;
        const auto self = (a.cell.value == s) ? a : b;
        const int want = -cells[s].facets[self.slot].base_sign * ori[s] * cells[other.cell.value].facets[other.slot].base_sign;
        if (!fixed[other.cell.value]) {
          fixed[other.cell.value] = 1;
          ori[other.cell.value] = want;
          q.push_back(other.cell.value);
        } else if (ori[other.cell.value] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return ori;
}

PolyComplex::PolyComplex(std::vector<Cell> cells) : cells_(std::move(cells)) {
  auto rep = validate(cells_);
  if (!rep.ok()) throw ComplexError(std::move(rep));
  dim_ = top_dim(cells_);
  by_dim_.assign(dim_ + 1, {});
  for (const auto& c : cells_) by_dim_[c.dim].push_back(c.id);
  cofaces_ = collect_cofaces(cells_);
  closure_.assign(cells_.size(), {});
  for (int d = 0; d <= dim_; ++d)
    for (auto id : by_dim_[d]) {
      std::set<CellId> s{id};
      for (const auto& f : cells_[id.value].facets) s.insert(closure_[f.cell.value].begin(), closure_[f.cell.value].end());
      closure_[id.value].assign(s.begin(), s.end());
    }
  boundary_.assign(cells_.size(), false);
  if (dim_ >= 1)
    for (auto r : by_dim_[dim_ - 1])
      if (cofaces_[r.value].size() == 1)
        for (auto f : closure_[r.value]) boundary_[f.value] = true;
  for (const auto& c : cells_)
    if (!c.label.empty()) labels_[c.label] = c.id;
}

const std::vector<CellId>& PolyComplex::cells_of_dim(int d) const {
  static const std::vector<CellId> empty;
  if (d < 0 || d > dim_) return empty;
  return by_dim_[d];
}

std::optional<CellId> PolyComplex::find_label(const std::string& label) const {
  auto it = labels_.find(label);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

bool PolyComplex::is_face(CellId tau, CellId sigma) const {
  const auto& cl = closure_.at(sigma.value);
  return std::binary_search(cl.begin(), cl.end(), tau);
}

bool PolyComplex::is_loop(CellId c) const {
  const auto& f = cell(c).facets;
  return cell(c).dim == 1 && f.size() == 2 && f[0].cell == f[1].cell;
}

bool PolyComplex::has_self_incidence() const {
  return std::any_of(cells_.begin(), cells_.end(), [&](const Cell& c) { return is_loop(c.id); });
}

std::vector<FaceOccurrence> PolyComplex::proper_faces(CellId c) const {
  if (is_loop(c)) return {{cell(c).facets[0].cell, 0}, {cell(c).facets[0].cell, 1}};
  std::vector<FaceOccurrence> out;
  for (auto f : closure(c))
    if (f != c) out.push_back({f, 0});
  return out;
}

int PolyComplex::incidence_sign(CellId sigma, std::size_t slot) const {
  const auto& s = cell(sigma);
  const auto& f = s.facets.at(slot);
  return f.base_sign * s.orientation * cell(f.cell).orientation;
}

int PolyComplex::incidence_sign(CellId tau, CellId sigma) const {
  const auto& s = cell(sigma);
  std::optional<std::size_t> slot;
  for (std::size_t i = 0; i < s.facets.size(); ++i)
    if (s.facets[i].cell == tau) {
      if (slot) throw ComplexError(ComplexIssue::UnsupportedSelfIntersection, "facet occupies two slots; use the slot overload");
      slot = i;
    }
  if (!slot) throw ComplexError(ComplexIssue::BadIncidence, "not a facet pair");
  return incidence_sign(sigma, *slot);
}

std::vector<CellId> PolyComplex::corners(CellId sigma) const {
  const auto& s = cell(sigma);
  if (s.dim == 0) return {sigma};
  if (s.dim == 1) return {s.facets[0].cell, s.facets[1].cell};
  std::vector<CellId> v;
  for (auto f : closure(sigma))
    if (cell(f).dim == 0) v.push_back(f);
  return v;
}

std::vector<std::size_t> PolyComplex::corner_indices(CellId sigma, FaceOccurrence f) const {
  const auto cs = corners(sigma);
  if (is_loop(sigma) && f.face != sigma) return {static_cast<std::size_t>(f.occurrence)};
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (is_face(cs[i], f.face)) out.push_back(i);
  return out;
}

long long PolyComplex::euler_characteristic() const {
  long long chi = 0;
  for (const auto& c : cells_) chi += (c.dim % 2 == 0) ? 1 : -1;
  return chi;
}

namespace {

void extend_chains(const PolyComplex& p, Flag& cur, const std::function<void(const Flag&)>& emit) {
  emit(cur);
  for (auto f : p.proper_faces(cur.links.back().face)) {
    cur.links.push_back(f);
    extend_chains(p, cur, emit);
    cur.links.pop_back();
  }
}

std::vector<Flag> all_flags(const PolyComplex& p) {
  std::vector<Flag> out;
  for (const auto& c : p.cells()) {
    Flag f{{{c.id, 0}}};
    extend_chains(p, f, [&](const Flag& g) { out.push_back(g); });
  }
  return out;
}

std::string flag_label(const PolyComplex& p, const Flag& f) {
  std::string s = "b(";
  for (std::size_t i = 0; i < f.links.size(); ++i) {
    if (i) s += ">";
    const auto& c = p.cell(f.links[i].face);
    s += c.label.empty() ? std::to_string(c.id.value) : c.label;
    if (f.links[i].occurrence) s += "@" + std::to_string(f.links[i].occurrence);
  }
  return s + ")";
}

}  // namespace

std::vector<std::size_t> flag_counts(const PolyComplex& p) {
  std::vector<std::size_t> counts(p.dim() + 1, 0);
  for (const auto& f : all_flags(p)) ++counts[f.links.size() - 1];
  return counts;
}

BarySubdivision barycentric_subdivide(const PolyComplex& p) {
  auto flags = all_flags(p);
  std::stable_sort(flags.begin(), flags.end(), [](const Flag& a, const Flag& b) { return a.links.size() < b.links.size(); });
  BarySubdivision b;
  b.flags = flags;
  for (std::size_t i = 0; i < flags.size(); ++i) b.by_flag[flags[i]] = CellId{static_cast<std::uint32_t>(i)};
  b.barycenter.assign(p.size(), CellId{});
  b.ancestor.resize(flags.size());
  b.vertex_order.resize(flags.size());

  std::vector<Cell> cells(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const Flag& f = flags[i];
    Cell& c = cells[i];
    c.id = CellId{static_cast<std::uint32_t>(i)};
    c.dim = static_cast<int>(f.links.size()) - 1;
    c.label = flag_label(p, f);
    b.ancestor[i] = f.top();
    if (c.dim == 0) b.barycenter[f.top().value] = c.id;
    for (std::size_t k = 0; k < f.links.size() && c.dim > 0; ++k) {
      Flag g = f;
      g.links.erase(g.links.begin() + static_cast<std::ptrdiff_t>(k));
      g.links.front().occurrence = 0;
      c.facets.push_back({b.by_flag.at(g), (k % 2 == 0) ? 1 : -1});
    }
    // A full flag inherits the orientation of its top cell.
    bool full = true;
    for (std::size_t k = 0; k < f.links.size(); ++k)
      full &= p.cell(f.links[k].face).dim == c.dim - static_cast<int>(k);
    int ori = 1;
    if (full && c.dim > 0) {
      for (std::size_t k = 0; k + 1 < f.links.size(); ++k) {
        const auto upper = f.links[k].face;
        const auto lower = f.links[k + 1];
        if (p.is_loop(upper)) {
          ori *= p.incidence_sign(upper, static_cast<std::size_t>(lower.occurrence));
        } else {
          ori *= p.incidence_sign(lower.face, upper);
        }
      }
      ori *= p.cell(f.bottom()).orientation;  // Π ε telescopes to top and bottom orientations
    }
    c.orientation = ori;
  }
  for (std::size_t i = 0; i < flags.size(); ++i)
    for (const auto& l : flags[i].links) b.vertex_order[i].push_back(b.barycenter[l.face.value]);
  b.complex = PolyComplex(std::move(cells));
  return b;
}

std::vector<RefinedPiece> refined_cells(const PolyComplex& p, const BarySubdivision& b) {
  std::vector<RefinedPiece> out;
  const int n = p.dim();
  for (auto r : p.cells_of_dim(n - 1))
    for (auto c : b.complex.cells_of_dim(n - 1))
      if (b.ancestor[c.value] == r) out.push_back({out.size(), r, c, b.flags[c.value].bottom()});
  return out;
}

std::vector<std::vector<int>> boundary_matrix(const PolyComplex& p, int d) {
  const auto& hi = p.cells_of_dim(d);
  const auto& lo = p.cells_of_dim(d - 1);
  std::map<CellId, std::size_t> row;
  for (std::size_t i = 0; i < lo.size(); ++i) row[lo[i]] = i;
  std::vector<std::vector<int>> m(lo.size(), std::vector<int>(hi.size(), 0));
  for (std::size_t j = 0; j < hi.size(); ++j) {
    const auto& c = p.cell(hi[j]);
    for (std::size_t s = 0; s < c.facets.size(); ++s) m[row.at(c.facets[s].cell)][j] += p.incidence_sign(hi[j], s);
  }
  return m;
}

std::string cell_name(const PolyComplex& p, CellId c) {
  const auto& l = p.cell(c).label;
  return l.empty() ? "#" + std::to_string(c.value) : l;
}

}  // namespace tropper
