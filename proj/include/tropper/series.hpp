#pragma once
// Truncated series in A_k[Λ] = ℂ[Λ][t]/(t^{k+1}): sparse maps from
// (lattice exponent, t-exponent) to a coefficient. Products drop every term
// of t-order above the truncation order.
//
// Coefficients are exact rationals or long double complex numbers; both
// share one template so the normalization test can run in either mode.

#include "tropper/lattice.hpp"

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace tropper {

using Complex = std::complex<long double>;

struct SeriesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Monomial {
  IntVector m;
  int e = 0;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

template <class C>
inline bool is_zero_coeff(const C& c) {
  return c == C(0);
}

template <class C>
class Series {
 public:
  Series(std::size_t rank, int order) : rank_(rank), order_(order) {
    if (order < 0) throw SeriesError("negative truncation order");
  }
  static Series constant(std::size_t rank, int order, const C& c) {
    Series s(rank, order);
    s.add(IntVector(rank), 0, c);
    return s;
  }
  static Series monomial(std::size_t rank, int order, const IntVector& m, int e, const C& c) {
    Series s(rank, order);
    s.add(m, e, c);
    return s;
  }

  std::size_t rank() const { return rank_; }
  int order() const { return order_; }
  const std::map<Monomial, C>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  C coefficient(const IntVector& m, int e) const {
    auto it = terms_.find({m, e});
    return it == terms_.end() ? C(0) : it->second;
  }

  void add(const IntVector& m, int e, const C& c) {
    if (m.size() != rank_) throw SeriesError("monomial of wrong rank");
    if (e < 0) throw SeriesError("negative t-exponent");
    if (e > order_ || is_zero_coeff(c)) return;
    auto [it, fresh] = terms_.try_emplace(Monomial{m, e}, c);
    if (!fresh) {
      it->second += c;
      if (is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  Series truncated(int order) const {
    Series s(rank_, std::min(order, order_));
    for (const auto& [k, c] : terms_) s.add(k.m, k.e, c);
    return s;
  }

  Series& operator+=(const Series& o) {
    check(o);
    for (const auto& [k, c] : o.terms_) add(k.m, k.e, c);
    return *this;
  }
  Series& operator-=(const Series& o) {
    check(o);
    for (const auto& [k, c] : o.terms_) add(k.m, k.e, -c);
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const C& s, const Series& a) {
    Series r(a.rank_, a.order_);
    for (const auto& [k, c] : a.terms_) r.add(k.m, k.e, s * c);
    return r;
  }
  friend Series operator*(const Series& a, const Series& b) {
    a.check(b);
    Series r(a.rank_, std::min(a.order_, b.order_));
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        if (ka.e + kb.e <= r.order_) r.add(ka.m + kb.m, ka.e + kb.e, ca * cb);
    return r;
  }

  // Multiplies by z^m t^e.
  Series shifted(const IntVector& m, int e, int order) const {
    Series r(rank_, order);
    for (const auto& [k, c] : terms_) r.add(k.m + m, k.e + e, c);
    return r;
  }

  // Part of t-order zero.
  Series reduction() const {
    Series r(rank_, 0);
    for (const auto& [k, c] : terms_)
      if (k.e == 0) r.add(k.m, 0, c);
    return r;
  }

  bool is_one_mod_t() const {
    const Series r = reduction();
    return r.terms_.size() == 1 && r.coefficient(IntVector(rank_), 0) == C(1);
  }

  // f^{-1} for f ≡ 1 mod t: Σ_i (1 − f)^i, which terminates at t-order k.
  Series inverse() const {
    if (!is_one_mod_t()) throw SeriesError("series is not invertible: not 1 modulo t");
    const Series h = constant(rank_, order_, C(1)) - *this;
    Series out = constant(rank_, order_, C(1));
    Series power = out;
    for (int i = 1; i <= order_; ++i) {
      power = power * h;
      out += power;
    }
    return out;
  }

  Series pow(long long p) const {
    if (p < 0) return inverse().pow(-p);
    Series out = constant(rank_, order_, C(1));
    Series base = *this;
    while (p) {
      if (p & 1) out = out * base;
      base = base * base;
      p >>= 1;
    }
    return out;
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.rank_ == b.rank_ && a.order_ == b.order_ && a.terms_ == b.terms_;
  }

  std::string str() const;

 private:
  void check(const Series& o) const {
    if (o.rank_ != rank_) throw SeriesError("series over lattices of different rank");
  }
  std::size_t rank_;
  int order_;
  std::map<Monomial, C> terms_;
};

using ExactSeries = Series<Rational>;
using FloatSeries = Series<Complex>;

FloatSeries to_float(const ExactSeries& s);

// Max-norm distance between coefficient maps.
long double distance(const FloatSeries& a, const FloatSeries& b);

// θ: z^m ↦ f^{⟨d,m⟩} z^m, truncated at the order of f.
template <class C>
Series<C> wall_transform(const Series<C>& f, const IntCovector& d, const IntVector& m) {
  const Int k = pairing(d, m);
  if (k != 0 && !f.is_one_mod_t()) throw SeriesError("wall function is not invertible: not 1 modulo t");
  return f.pow(static_cast<long long>(k)).shifted(m, 0, f.order());
}

// Coefficients of pure t^e (lattice part 0), 1 ≤ e ≤ k, in log(f/a).
template <class C>
struct NormalizationReport {
  bool normalized = true;
  std::map<int, C> offending;  // t-exponent → coefficient
};

// The expansion Σ (−1)^{i+1}/i · g^i with g = f/a − 1 is summed exactly as far
// as pure t-terms up to order k are concerned. This needs a covector λ with
// λ(m) > 0 on every lattice monomial of g of t-order 0; otherwise the
// expansion does not terminate and SeriesError is thrown.
NormalizationReport<Rational> normalization(const ExactSeries& f, int k);
NormalizationReport<Complex> normalization(const FloatSeries& f, int k, long double tolerance = 1e-12L);
bool check_normalized(const ExactSeries& f, int k);
// Removes the offending pure t-terms of log(f/a) order by order by adjusting
// the pure t-coefficients of f.
ExactSeries normalize(ExactSeries f, int k);
bool check_normalized(const FloatSeries& f, int k, long double tolerance = 1e-12L);

// t^κ f = z^m t^{κ'} f' over the common truncation range.
bool compatibility_check(const ExactSeries& f, const ExactSeries& f_prime, const IntVector& m, int kappa, int kappa_prime);
bool compatibility_check(const FloatSeries& f, const FloatSeries& f_prime, const IntVector& m, int kappa, int kappa_prime,
                         long double tolerance = 1e-12L);

// Evaluates f at (t, z) with z^m = ∏ z_j^{m_j}.
Complex evaluate(const FloatSeries& f, Complex t, std::span<const Complex> z);

}  // namespace tropper
