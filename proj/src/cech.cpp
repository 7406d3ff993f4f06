#include "tropper/cech.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace tropper {

namespace {

// Connected components of a closed set of cells; each must be the closure of
// a single cell, which is returned.
std::vector<CellId> component_tops(const PolyComplex& p, const std::vector<CellId>& cells) {
  std::vector<std::size_t> parent(cells.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = 0; b < cells.size(); ++b)
      if (a != b && p.is_face(cells[a], cells[b])) parent[find(a)] = find(b);
  std::map<std::size_t, std::vector<CellId>> comps;
  for (std::size_t a = 0; a < cells.size(); ++a) comps[find(a)].push_back(cells[a]);
  std::vector<CellId> tops;
  for (const auto& [root, members] : comps) {
    CellId top = members.front();
    for (auto c : members)
      if (p.cell(c).dim > p.cell(top).dim) top = c;
    for (auto c : members)
      if (!p.is_face(c, top)) throw HomologyError("intersection component without a unique maximal cell near " + cell_name(p, c));
    tops.push_back(top);
  }
  std::sort(tops.begin(), tops.end());
  return tops;
}

int permutation_sign(std::vector<std::size_t> v) {
  int s = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) s = -s;
  return s;
}

}  // namespace

bool CochainComplex::squares_to_zero() const {
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    if (d[i + 1].cols() == d[i].rows() && d[i].rows() > 0 && !(d[i + 1] * d[i]).is_zero()) return false;
  return true;
}

HomologyResult cohomology(const CochainComplex& c) {
  if (!c.squares_to_zero()) throw HomologyError("Čech differential does not square to zero");
  HomologyResult r;
  for (std::size_t i = 0; i < c.dims.size(); ++i) {
    const IntMatrix in = i > 0 ? c.d[i - 1] : IntMatrix(c.dims[0], 0);
    r.groups.push_back(homology_at(in, c.d[i], c.dims[i]));
  }
  return r;
}

CochainComplex cech_complex(const ConstructibleSheaf& f, std::vector<CellId> order) {
  const PolyComplex& p = f.complex();
  if (p.has_self_incidence())
    throw ComplexError(ComplexIssue::UnsupportedSelfIntersection, "the cover by closed maximal cells is not good for a self-glued cell");
  auto maxc = p.maximal_cells();
  if (order.empty()) order = maxc;
  {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != maxc) throw HomologyError("order must list every maximal cell exactly once");
  }
  if (maxc.empty()) throw HomologyError("empty complex");
  std::map<CellId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

  CochainComplex c;
  std::map<std::vector<CellId>, std::vector<std::size_t>> lookup;  // degree implied by size
  // Depth-first over subsets in order, pruning empty intersections.
  std::function<void(std::vector<CellId>&, std::vector<CellId>, std::size_t)> grow =
      [&](std::vector<CellId>& chosen, std::vector<CellId> inter, std::size_t next) {
        if (!chosen.empty()) {
          const std::size_t deg = chosen.size() - 1;
          if (c.index.size() <= deg) c.index.resize(deg + 1);
          for (auto t : component_tops(p, inter)) {
            lookup[chosen].push_back(c.index[deg].size());
            c.index[deg].push_back({chosen, t});
          }
        }
        for (std::size_t k = next; k < order.size(); ++k) {
          const auto& cl = p.closure(order[k]);
          std::vector<CellId> meet;
          if (chosen.empty()) meet = cl;
          else std::set_intersection(inter.begin(), inter.end(), cl.begin(), cl.end(), std::back_inserter(meet));
          if (meet.empty()) continue;
          chosen.push_back(order[k]);
          grow(chosen, meet, k + 1);
          chosen.pop_back();
        }
      };
  std::vector<CellId> chosen;
  grow(chosen, {}, 0);

  const std::size_t top = c.index.size();
  c.offset.resize(top);
  c.dims.assign(top, 0);
  for (std::size_t i = 0; i < top; ++i)
    for (const auto& ix : c.index[i]) {
      c.offset[i].push_back(c.dims[i]);
      c.dims[i] += f.rank_at(ix.tau);
    }
  c.d.resize(top);
  for (std::size_t i = 0; i < top; ++i) {
    const std::size_t next = i + 1 < top ? c.dims[i + 1] : 0;
    IntMatrix m(next, c.dims[i]);
    if (i + 1 < top)
      for (std::size_t a = 0; a < c.index[i + 1].size(); ++a) {
        const auto& K = c.index[i + 1][a];
        for (std::size_t j = 0; j < K.cells.size(); ++j) {
          auto face = K.cells;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
          std::optional<std::size_t> b;
          for (auto cand : lookup.at(face))
            if (p.is_face(K.tau, c.index[i][cand].tau)) b = cand;
          if (!b) throw HomologyError("Čech face index not found");
          const IntMatrix& r = f.restriction(c.index[i][*b].tau, K.tau);
          const Int sgn = (j % 2 == 0) ? 1 : -1;
          for (std::size_t x = 0; x < r.rows(); ++x)
            for (std::size_t y = 0; y < r.cols(); ++y) m(c.offset[i + 1][a] + x, c.offset[i][*b] + y) += sgn * r(x, y);
        }
      }
    c.d[i] = std::move(m);
  }
  return c;
}

std::vector<GradedPiece> filtration_graded(const CochainComplex& c, const PolyComplex& p) {
  std::map<CellId, GradedPiece> by_tau;
  const std::size_t top = c.index.size();
  for (std::size_t i = 0; i < top; ++i)
    for (std::size_t a = 0; a < c.index[i].size(); ++a) {
      auto& g = by_tau[c.index[i][a].tau];
      g.tau = c.index[i][a].tau;
      g.members.resize(top);
      g.members[i].push_back(a);
    }
  std::vector<GradedPiece> out;
  for (auto& [tau, g] : by_tau) {
    g.d.resize(top);
    for (std::size_t i = 0; i < top; ++i) {
      const std::size_t rows = i + 1 < top ? g.members[i + 1].size() : 0;
      IntMatrix m(rows, g.members[i].size());
      for (std::size_t r = 0; r < rows; ++r) {
        const auto& K = c.index[i + 1][g.members[i + 1][r]];
        for (std::size_t col = 0; col < g.members[i].size(); ++col) {
          const auto& J = c.index[i][g.members[i][col]];
          // J is the j-th face of K exactly when removing K's j-th cell gives J's cells.
          for (std::size_t j = 0; j < K.cells.size(); ++j) {
            auto face = K.cells;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
            if (face == J.cells) m(r, col) += (j % 2 == 0) ? 1 : -1;
          }
        }
      }
      g.d[i] = std::move(m);
    }
    (void)p;
    out.push_back(std::move(g));
  }
  return out;
}

HomologyResult graded_cohomology(const GradedPiece& g) {
  HomologyResult r;
  for (std::size_t i = 0; i < g.members.size(); ++i) {
    const IntMatrix in = i > 0 ? g.d[i - 1] : IntMatrix(g.members[0].size(), 0);
    r.groups.push_back(homology_at(in, g.d[i], g.members[i].size()));
  }
  return r;
}

bool concentration_holds(const CochainComplex& c, const PolyComplex& p, std::vector<std::string>* failures) {
  bool ok = true;
  const auto pieces = filtration_graded(c, p);
  std::set<CellId> seen;
  for (const auto& g : pieces) {
    seen.insert(g.tau);
    const auto h = graded_cohomology(g);
    const std::size_t codim = static_cast<std::size_t>(p.dim() - p.cell(g.tau).dim);
    const bool interior = p.is_interior(g.tau);
    for (std::size_t i = 0; i < h.groups.size(); ++i) {
      const HomologyGroup want{(interior && i == codim) ? 1u : 0u, {}};
      if (h[i] != want) {
        ok = false;
        if (failures) failures->push_back(cell_name(p, g.tau) + " degree " + std::to_string(i) + ": " + h[i].str());
      }
    }
    if (interior && codim >= h.groups.size()) {
      ok = false;
      if (failures) failures->push_back(cell_name(p, g.tau) + " has no cochains in degree " + std::to_string(codim));
    }
  }
  for (const auto& cell : p.cells())
    if (p.is_interior(cell.id) && !seen.count(cell.id)) {
      ok = false;
      if (failures) failures->push_back(cell_name(p, cell.id) + " is maximal in no intersection");
    }
  return ok;
}

namespace {

// Functional on C_τ^{codim} pairing a cochain with the dual block of τ,
// subdivided by full flags τ = τ₀ ⊂ … ⊂ τ_c.
std::vector<Int> dual_block_eval(const CochainComplex& c, const PolyComplex& p, const GradedPiece& g,
                                 const std::map<CellId, std::size_t>& pos) {
  const std::size_t codim = static_cast<std::size_t>(p.dim() - p.cell(g.tau).dim);
  std::vector<Int> ev(g.members.at(codim).size(), Int(0));
  std::map<std::vector<CellId>, std::size_t> member_of;
  for (std::size_t k = 0; k < g.members[codim].size(); ++k) member_of[c.index[codim][g.members[codim][k]].cells] = k;

  auto first_max = [&](CellId t) {
    std::optional<CellId> best;
    for (const auto& [s, i] : pos)
      if (p.is_face(t, s) && (!best || i < pos.at(*best))) best = s;
    return *best;
  };
  std::vector<CellId> chain{g.tau};
  long long sign = 1;
  std::function<void()> rec = [&]() {
    if (chain.size() == codim + 1) {
      std::vector<CellId> sig;
      for (auto t : chain) sig.push_back(first_max(t));
      std::vector<std::size_t> ranks;
      for (auto s : sig) ranks.push_back(pos.at(s));
      auto sorted = ranks;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return;
      std::vector<CellId> cells;
      for (auto r : sorted)
        for (const auto& [s, i] : pos)
          if (i == r) cells.push_back(s);
      auto it = member_of.find(cells);
      if (it == member_of.end()) return;
      ev[it->second] += sign * permutation_sign(ranks);
      return;
    }
    const CellId t = chain.back();
    for (const auto& co : p.cofaces(t)) {
      const long long e = p.incidence_sign(co.cell, co.slot);
      chain.push_back(co.cell);
      sign *= e;
      rec();
      sign *= e;
      chain.pop_back();
    }
  };
  rec();
  return ev;
}

struct Generator {
  std::vector<Int> cocycle;  // coefficients on members[codim]
  std::vector<Int> eval;
};

Generator normalized_generator(const CochainComplex& c, const PolyComplex& p, const GradedPiece& g,
                               const std::map<CellId, std::size_t>& pos) {
  const std::size_t codim = static_cast<std::size_t>(p.dim() - p.cell(g.tau).dim);
  Generator gen;
  gen.eval = dual_block_eval(c, p, g, pos);
  const std::size_t m = g.members[codim].size();
  // Evaluation must vanish on coboundaries.
  if (codim > 0) {
    const IntMatrix& prev = g.d[codim - 1];
    for (std::size_t col = 0; col < prev.cols(); ++col) {
      Int s = 0;
      for (std::size_t r = 0; r < m; ++r) s += gen.eval[r] * prev(r, col);
      if (s != 0) throw HomologyError("dual-block evaluation does not vanish on coboundaries at " + cell_name(p, g.tau));
    }
  }
  std::vector<IntVector> cocycles;
  if (g.d[codim].rows() == 0) {
    for (std::size_t i = 0; i < m; ++i) {
      IntVector e(m);
      e[i] = 1;
      cocycles.push_back(e);
    }
  } else {
    cocycles = integer_kernel(g.d[codim]);
  }
  IntVector acc(m);
  Int have = 0;
  for (const auto& z : cocycles) {
    Int v = 0;
    for (std::size_t i = 0; i < m; ++i) v += gen.eval[i] * z[i];
    const auto b = extended_gcd(have, v);
    acc = b.x * acc + b.y * z;
    have = b.g;
  }
  if (have != 1) throw HomologyError("generator normalization failed at " + cell_name(p, g.tau) + " (evaluation gcd " + have.str() + ")");
  gen.cocycle.assign(acc.entries().begin(), acc.entries().end());
  return gen;
}

}  // namespace

ComparisonResult comparison_map(const ConstructibleSheaf& f, std::optional<std::pair<CellId, std::size_t>> flip) {
  const PolyComplex& p = f.complex();
  const int n = p.dim();
  ComparisonResult out;
  out.chains = simplicial_chain_complex(p, boundary_subcomplex(p), f);
  if (flip) {
    const auto [cell, slot] = *flip;
    const int i = p.cell(cell).dim;
    const CellId t = p.cell(cell).facets.at(slot).cell;
    auto ci = out.chains.offset[i].find(cell);
    auto ti = out.chains.offset[i - 1].find(t);
    if (ci != out.chains.offset[i].end() && ti != out.chains.offset[i - 1].end()) {
      const IntMatrix& r = f.restriction(cell, t);
      const Int e = 2 * p.incidence_sign(cell, slot);
      for (std::size_t a = 0; a < r.rows(); ++a)
        for (std::size_t b = 0; b < r.cols(); ++b) out.chains.d[i](ti->second + a, ci->second + b) -= e * r(a, b);
    }
  }
  const CochainComplex cech = cech_complex(f);
  const auto order = p.maximal_cells();
  std::map<CellId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  const auto pieces = filtration_graded(cech, p);
  std::map<CellId, const GradedPiece*> piece_of;
  for (const auto& g : pieces) piece_of[g.tau] = &g;

  out.termwise_iso = true;
  std::map<CellId, Generator> gens;
  for (const auto& cell : p.cells()) {
    const auto it = piece_of.find(cell.id);
    const std::size_t codim = static_cast<std::size_t>(n - cell.dim);
    if (it == piece_of.end()) {
      if (p.is_interior(cell.id)) out.termwise_iso = false;
      continue;
    }
    const auto h = graded_cohomology(*it->second);
    for (std::size_t i = 0; i < h.groups.size(); ++i) {
      const HomologyGroup want{(p.is_interior(cell.id) && i == codim) ? 1u : 0u, {}};
      if (h[i] != want) {
        out.termwise_iso = false;
        out.detail += "graded piece of " + cell_name(p, cell.id) + " is " + h[i].str() + " in degree " + std::to_string(i) + "; ";
      }
    }
    if (p.is_interior(cell.id) && codim < it->second->members.size() && !it->second->members[codim].empty())
      gens[cell.id] = normalized_generator(cech, p, *it->second, pos);
  }

  // d₁ in the bases (τ, section) matching the chain complex.
  out.e1.resize(n + 1);
  out.e1[0] = IntMatrix(0, out.chains.dim(0));
  out.chain_identity = true;
  for (int i = 1; i <= n; ++i) {
    const std::size_t codim = static_cast<std::size_t>(n - i);
    IntMatrix m(out.chains.dim(i - 1), out.chains.dim(i));
    for (const auto& [tau, col0] : out.chains.offset[i]) {
      const auto git = gens.find(tau);
      if (git == gens.end()) continue;
      const GradedPiece& g = *piece_of.at(tau);
      for (std::size_t b = 0; b < f.rank_at(tau); ++b) {
        IntVector x(cech.dims[codim]);
        for (std::size_t k = 0; k < g.members[codim].size(); ++k) {
          const std::size_t ix = g.members[codim][k];
          x[cech.offset[codim][ix] + b] = git->second.cocycle[k];
        }
        const IntVector y = cech.d[codim] * x;
        for (const auto& [omega, row0] : out.chains.offset[i - 1]) {
          const auto oit = gens.find(omega);
          if (oit == gens.end()) continue;
          const GradedPiece& go = *piece_of.at(omega);
          for (std::size_t k = 0; k < go.members[codim + 1].size(); ++k) {
            const std::size_t ix = go.members[codim + 1][k];
            for (std::size_t a = 0; a < f.rank_at(omega); ++a)
              m(row0 + a, col0 + b) += oit->second.eval[k] * y[cech.offset[codim + 1][ix] + a];
          }
        }
      }
    }
    if (m != out.chains.d[i]) {
      out.chain_identity = false;
      out.detail += "d1 differs from the cellular boundary in degree " + std::to_string(i) + "; ";
    }
    out.e1[i] = std::move(m);
  }
  return out;
}

PLCheck poincare_lefschetz_check(const ConstructibleSheaf& f, std::optional<std::pair<CellId, std::size_t>> flip) {
  PLCheck r;
  r.comparison = comparison_map(f, flip);
  const CochainComplex cech = cech_complex(f);
  r.cech = cohomology(cech);
  r.chains = r.comparison.chains.squares_to_zero() ? homology(r.comparison.chains) : HomologyResult{};
  const int n = f.complex().dim();
  bool ranks = r.comparison.chains.squares_to_zero();
  for (int i = 0; i <= n && ranks; ++i) {
    const std::size_t j = static_cast<std::size_t>(n - i);
    const HomologyGroup empty{};
    const HomologyGroup& cg = j < r.cech.groups.size() ? r.cech.groups[j] : empty;
    ranks = r.chains[i] == cg;
  }
  r.ok = r.comparison.chain_identity && r.comparison.termwise_iso && ranks;
  return r;
}

}  // namespace tropper
