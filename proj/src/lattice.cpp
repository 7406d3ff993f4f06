#include "tropper/lattice.hpp"

#include <algorithm>
#include <utility>

namespace tropper {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
  r_ = rows.size();
  c_ = r_ ? rows.begin()->size() : 0;
  a_.reserve(r_ * c_);
  for (const auto& row : rows) {
    if (row.size() != c_) throw LatticeError("ragged matrix literal");
    for (long long x : row) a_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_columns(std::span<const IntVector> cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw LatticeError("length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntVector IntMatrix::column(std::size_t j) const {
  IntVector v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntCovector IntMatrix::row(std::size_t i) const {
  IntCovector v(c_);
  for (std::size_t j = 0; j < c_; ++j) v[j] = (*this)(i, j);
  return v;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.c_ != b.r_) throw LatticeError("length mismatch");
  IntMatrix p(a.r_, b.c_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t k = 0; k < a.c_; ++k) {
      const Int& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.c_; ++j) p(i, j) += x * b(k, j);
    }
  return p;
}

IntVector operator*(const IntMatrix& a, const IntVector& v) {
  if (a.c_ != v.size()) throw LatticeError("length mismatch");
  IntVector w(a.r_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t j = 0; j < a.c_; ++j) w[i] += a(i, j) * v[j];
  return w;
}

IntCovector operator*(const IntCovector& c, const IntMatrix& m) {
  if (m.r_ != c.size()) throw LatticeError("length mismatch");
  IntCovector w(m.c_);
  for (std::size_t j = 0; j < m.c_; ++j)
    for (std::size_t i = 0; i < m.r_; ++i) w[j] += c[i] * m(i, j);
  return w;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw LatticeError("shape mismatch");
  IntMatrix s = a;
  for (std::size_t k = 0; k < s.a_.size(); ++k) s.a_[k] += b.a_[k];
  return s;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw LatticeError("shape mismatch");
  IntMatrix s = a;
  for (std::size_t k = 0; k < s.a_.size(); ++k) s.a_[k] -= b.a_[k];
  return s;
}

IntMatrix operator*(const Int& s, IntMatrix m) {
  for (auto& x : m.a_) x *= s;
  return m;
}

IntMatrix IntMatrix::hcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.r_ != b.r_) throw LatticeError("shape mismatch");
  IntMatrix m(a.r_, a.c_ + b.c_);
  for (std::size_t i = 0; i < a.r_; ++i) {
    for (std::size_t j = 0; j < a.c_; ++j) m(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.c_; ++j) m(i, a.c_ + j) = b(i, j);
  }
  return m;
}

IntMatrix IntMatrix::vcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.r_ == 0) return b;
  if (b.r_ == 0) return a;
  if (a.c_ != b.c_) throw LatticeError("shape mismatch");
  IntMatrix m(a.r_ + b.r_, a.c_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t j = 0; j < a.c_; ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.r_; ++i)
    for (std::size_t j = 0; j < a.c_; ++j) m(a.r_ + i, j) = b(i, j);
  return m;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  IntMatrix m(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
  return m;
}

std::string IntMatrix::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < r_; ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < c_; ++j) {
      if (j) s += ",";
      s += (*this)(i, j).str();
    }
  }
  return s + "]";
}

Int pairing(const IntCovector& c, const IntVector& v) {
  if (c.size() != v.size()) throw LatticeError("length mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * v[i];
  return s;
}

Int gcd_of(std::span<const Int> xs) {
  Int g = 0;
  for (const auto& x : xs) g = boost::multiprecision::gcd(g, x);
  return boost::multiprecision::abs(g);
}

PrimitivePart primitive_part(const IntVector& v) {
  Int g = gcd_of(v.entries());
  if (g == 0) throw LatticeError("zero vector has no primitive part");
  IntVector p = v;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] /= g;
  return {std::move(p), g};
}

Bezout extended_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

namespace {

// In-place Smith reduction. When u/v are non-null they accumulate the row and
// column operations so that u·A₀·v = A at every step.
class SmithReducer {
 public:
  SmithReducer(IntMatrix& a, IntMatrix* u, IntMatrix* v) : a_(a), u_(u), v_(v) {}

  void run() {
    const std::size_t m = a_.rows(), n = a_.cols();
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
      if (!place_min_pivot(t, t, m, n)) return;
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (a_(i, t) == 0) continue;
          Int q = a_(i, t) / a_(t, t);
          add_row(i, t, -q, t);
          if (a_(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a_(t, j) == 0) continue;
          Int q = a_(t, j) / a_(t, t);
          add_col(j, t, -q, t);
          if (a_(t, j) != 0) clean = false;
        }
        if (!clean) {
          place_cross_pivot(t);
          continue;
        }
        bool fixed = false;
        for (std::size_t i = t + 1; i < m && !fixed; ++i)
          for (std::size_t j = t + 1; j < n; ++j)
            if (a_(i, j) % a_(t, t) != 0) {
              add_row(t, i, Int(1), t);
              fixed = true;
              break;
            }
        if (!fixed) break;
      }
      if (a_(t, t) < 0) negate_row(t, t);
    }
  }

 private:
  bool place_min_pivot(std::size_t t0, std::size_t c0, std::size_t m, std::size_t n) {
    std::size_t bi = m, bj = n;
    Int best = 0;
    for (std::size_t i = t0; i < m; ++i)
      for (std::size_t j = c0; j < n; ++j) {
        const Int& x = a_(i, j);
        if (x == 0) continue;
        Int ax = boost::multiprecision::abs(x);
        if (bi == m || ax < best) {
          best = ax;
          bi = i;
          bj = j;
          if (best == 1) break;
        }
      }
    if (bi == m) return false;
    swap_rows(t0, bi);
    swap_cols(c0, bj);
    return true;
  }

  void place_cross_pivot(std::size_t t) {
    std::size_t bi = t, bj = t;
    Int best = boost::multiprecision::abs(a_(t, t));
    for (std::size_t i = t + 1; i < a_.rows(); ++i) {
      Int ax = boost::multiprecision::abs(a_(i, t));
      if (ax != 0 && ax < best) best = ax, bi = i, bj = t;
    }
    for (std::size_t j = t + 1; j < a_.cols(); ++j) {
      Int ax = boost::multiprecision::abs(a_(t, j));
      if (ax != 0 && ax < best) best = ax, bi = t, bj = j;
    }
    swap_rows(t, bi);
    swap_cols(t, bj);
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < a_.cols(); ++j) std::swap(a_(i, j), a_(k, j));
    if (u_)
      for (std::size_t j = 0; j < u_->cols(); ++j) std::swap((*u_)(i, j), (*u_)(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < a_.rows(); ++i) std::swap(a_(i, j), a_(i, k));
    if (v_)
      for (std::size_t i = 0; i < v_->rows(); ++i) std::swap((*v_)(i, j), (*v_)(i, k));
  }
  // row_i += q·row_k; columns left of `from` are zero in both rows.
  void add_row(std::size_t i, std::size_t k, const Int& q, std::size_t from) {
    for (std::size_t j = from; j < a_.cols(); ++j)
      if (a_(k, j) != 0) a_(i, j) += q * a_(k, j);
    if (u_)
      for (std::size_t j = 0; j < u_->cols(); ++j)
        if ((*u_)(k, j) != 0) (*u_)(i, j) += q * (*u_)(k, j);
  }
  void add_col(std::size_t j, std::size_t k, const Int& q, std::size_t from) {
    for (std::size_t i = from; i < a_.rows(); ++i)
      if (a_(i, k) != 0) a_(i, j) += q * a_(i, k);
    if (v_)
      for (std::size_t i = 0; i < v_->rows(); ++i)
        if ((*v_)(i, k) != 0) (*v_)(i, j) += q * (*v_)(i, k);
  }
  void negate_row(std::size_t i, std::size_t from) {
    for (std::size_t j = from; j < a_.cols(); ++j) a_(i, j) = -a_(i, j);
    if (u_)
      for (std::size_t j = 0; j < u_->cols(); ++j) (*u_)(i, j) = -(*u_)(i, j);
  }

  IntMatrix& a_;
  IntMatrix* u_;
  IntMatrix* v_;
};

}  // namespace

SNFResult smith_normal_form(const IntMatrix& m) {
  SNFResult r{IntMatrix::identity(m.rows()), m, IntMatrix::identity(m.cols())};
  SmithReducer(r.D, &r.U, &r.V).run();
  return r;
}

std::vector<Int> invariant_factors(const IntMatrix& m) {
  IntMatrix a = m;
  SmithReducer(a, nullptr, nullptr).run();
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
    if (a(i, i) != 0) d.push_back(a(i, i));
  return d;
}

std::size_t rank(const IntMatrix& m) {
  // Fraction-free elimination; cheaper than a full Smith reduction.
  IntMatrix a = m;
  std::size_t r = 0;
  Int prev = 1;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c) == 0) ++p;
    if (p == a.rows()) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(p, j));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      for (std::size_t j = c + 1; j < a.cols(); ++j)
        a(i, j) = (a(r, c) * a(i, j) - a(i, c) * a(r, j)) / prev;
      a(i, c) = 0;
    }
    prev = a(r, c);
    ++r;
  }
  return r;
}

std::vector<IntVector> integer_kernel(const IntMatrix& m) {
  SNFResult s = smith_normal_form(m);
  std::size_t r = 0;
  while (r < std::min(s.D.rows(), s.D.cols()) && s.D(r, r) != 0) ++r;
  std::vector<IntVector> basis;
  for (std::size_t j = r; j < m.cols(); ++j) basis.push_back(s.V.column(j));
  return basis;
}

Int determinant(const IntMatrix& m) {
  if (!m.is_square()) throw LatticeError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  if (!m.is_square()) throw LatticeError("inverse of non-square matrix");
  SNFResult s = smith_normal_form(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (s.D(i, i) != 1) throw LatticeError("matrix is not unimodular");
  return s.V * s.U;
}

std::optional<IntVector> solve_integral(const IntMatrix& a, const IntVector& b) {
  if (a.rows() != b.size()) throw LatticeError("length mismatch");
  SNFResult s = smith_normal_form(a);
  IntVector ub = s.U * b;
  IntVector y(a.cols());
  const std::size_t k = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < k; ++i)
    if (s.D(i, i) == 0) throw LatticeError("solve_integral needs full column rank");
  if (a.cols() > a.rows()) throw LatticeError("solve_integral needs full column rank");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const Int d = i < k ? s.D(i, i) : Int(0);
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
      continue;
    }
    if (ub[i] % d != 0) return std::nullopt;
    y[i] = ub[i] / d;
  }
  return s.V * y;
}

std::optional<IntMatrix> solve_integral(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix x(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto col = solve_integral(a, b.column(j));
    if (!col) return std::nullopt;
    for (std::size_t i = 0; i < a.cols(); ++i) x(i, j) = (*col)[i];
  }
  return x;
}

}  // namespace tropper
