#include "tropper/homology.hpp"

#include <sstream>

namespace tropper {

bool ChainComplex::squares_to_zero() const {
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i - 1].cols() == d[i].rows() && !(d[i - 1] * d[i]).is_zero()) return false;
  return true;
}

std::string HomologyGroup::str() const {
  std::ostringstream os;
  os << "Z^" << rank;
  for (const auto& t : torsion) os << " + Z/" << t;
  return os.str();
}

HomologyGroup homology_at(const IntMatrix& in, const IntMatrix& out, std::size_t dim) {
  HomologyGroup g;
  const std::size_t r_out = out.rows() && out.cols() ? rank(out) : 0;
  std::vector<Int> inv;
  if (in.rows() && in.cols()) inv = invariant_factors(in);
  if (dim < r_out + inv.size()) throw HomologyError("ranks exceed the chain group");
  g.rank = dim - r_out - inv.size();
  for (const auto& x : inv)
    if (abs(x) > 1) g.torsion.push_back(abs(x));
  return g;
}

HomologyResult homology(const ChainComplex& c) {
  if (!c.squares_to_zero()) throw HomologyError("boundary of boundary is nonzero");
  HomologyResult r;
  for (std::size_t i = 0; i < c.basis.size(); ++i) {
    const IntMatrix in = i + 1 < c.d.size() ? c.d[i + 1] : IntMatrix(c.dim(i), 0);
    r.groups.push_back(homology_at(in, c.d[i], c.dim(i)));
  }
  return r;
}

std::set<CellId> boundary_subcomplex(const PolyComplex& k) {
  std::set<CellId> a;
  for (const auto& c : k.cells())
    if (k.in_boundary(c.id)) a.insert(c.id);
  return a;
}

ChainComplex simplicial_chain_complex(const PolyComplex& k, const std::set<CellId>& relative, const ConstructibleSheaf& f) {
  if (&f.complex() != &k) throw HomologyError("sheaf is defined on a different complex");
  ChainComplex c;
  const int n = k.dim();
  c.basis.resize(n + 1);
  c.offset.resize(n + 1);
  for (int i = 0; i <= n; ++i)
    for (auto t : k.cells_of_dim(i)) {
      if (relative.count(t)) continue;
      c.offset[i][t] = c.basis[i].size();
      for (std::size_t j = 0; j < f.rank_at(t); ++j) c.basis[i].push_back({t, j});
    }
  c.d.resize(n + 1);
  c.d[0] = IntMatrix(0, c.dim(0));
  for (int i = 1; i <= n; ++i) {
    IntMatrix m(c.dim(i - 1), c.dim(i));
    for (const auto& [s, col] : c.offset[i]) {
      const auto& facets = k.cell(s).facets;
      for (std::size_t slot = 0; slot < facets.size(); ++slot) {
        const CellId t = facets[slot].cell;
        auto it = c.offset[i - 1].find(t);
        if (it == c.offset[i - 1].end()) continue;
        const IntMatrix& r = f.restriction(s, t);
        const Int e = k.incidence_sign(s, slot);
        for (std::size_t a = 0; a < r.rows(); ++a)
          for (std::size_t b = 0; b < r.cols(); ++b) m(it->second + a, col + b) += e * r(a, b);
      }
    }
    c.d[i] = std::move(m);
  }
  return c;
}

LevelComparison barycentric_comparison(const ChainComplex& base, const ChainComplex& refined) {
  LevelComparison out{homology(base), homology(refined), false};
  out.isomorphic = out.base == out.refined;
  return out;
}

HomologyBasis::HomologyBasis(const ChainComplex& c, std::size_t degree) : degree_(degree) {
  if (degree >= c.basis.size()) throw HomologyError("degree out of range");
  const std::size_t n = c.dim(degree);
  out_ = c.d[degree];
  std::vector<IntVector> ker;
  if (out_.rows() == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      IntVector e(n);
      e[i] = 1;
      ker.push_back(e);
    }
  } else {
    ker = integer_kernel(out_);
  }
  kernel_ = IntMatrix::from_columns(ker, n);
  const std::size_t kdim = ker.size();
  IntMatrix beta(kdim, 0);
  if (degree + 1 < c.d.size() && c.d[degree + 1].cols() > 0) {
    auto sol = solve_integral(kernel_, c.d[degree + 1]);
    if (!sol) throw HomologyError("boundaries do not lie in the cycle lattice");
    beta = *sol;
  }
  if (beta.cols() == 0) {
    U_ = IntMatrix::identity(kdim);
    diag_.assign(kdim, Int(0));
  } else {
    auto s = smith_normal_form(beta);
    U_ = s.U;
    diag_.assign(kdim, Int(0));
    for (std::size_t i = 0; i < std::min(kdim, beta.cols()); ++i) diag_[i] = abs(s.D(i, i));
  }
  for (std::size_t i = 0; i < kdim; ++i) {
    if (diag_[i] == 0) free_.push_back(i);
    else if (diag_[i] > 1) torsion_.push_back(i);
  }
}

HomologyCoordinates HomologyBasis::coordinates(const IntVector& z) const {
  if (z.size() != kernel_.rows()) throw HomologyError("chain of wrong length");
  if (out_.rows() && !(out_ * z).is_zero()) throw HomologyError("chain is not a cycle");
  IntVector alpha(0);
  if (kernel_.cols() > 0) {
    auto a = solve_integral(kernel_, z);
    if (!a) throw HomologyError("cycle outside the saturated kernel");
    alpha = *a;
  }
  const IntVector y = kernel_.cols() > 0 ? U_ * alpha : IntVector(0);
  HomologyCoordinates h;
  for (auto i : free_) h.free.push_back(y[i]);
  for (auto i : torsion_) {
    Int r = y[i] % diag_[i];
    if (r < 0) r += diag_[i];
    h.torsion.push_back({r, diag_[i]});
  }
  return h;
}

bool HomologyBasis::is_boundary(const IntVector& z) const {
  const auto h = coordinates(z);
  for (const auto& x : h.free)
    if (x != 0) return false;
  for (const auto& [r, d] : h.torsion)
    if (r != 0) return false;
  return true;
}

}  // namespace tropper
