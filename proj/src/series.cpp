#include "tropper/series.hpp"

#include <cmath>
#include <sstream>

namespace tropper {

namespace {

std::string coeff_str(const Rational& c) { return c.str(); }
std::string coeff_str(const Complex& c) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << static_cast<double>(c.real()) << "," << static_cast<double>(c.imag()) << ")";
  return os.str();
}

// Integer covector positive on every vector of `ms`, searched in growing boxes.
std::optional<IntCovector> positive_covector(const std::vector<IntVector>& ms, std::size_t rank) {
  if (ms.empty()) return IntCovector(rank);
  for (long long box = 1; box <= 6; ++box) {
    std::vector<long long> c(rank, -box);
    while (true) {
      IntCovector l(rank);
      for (std::size_t i = 0; i < rank; ++i) l[i] = c[i];
      bool ok = true;
      for (const auto& m : ms)
        if (pairing(l, m) <= 0) {
          ok = false;
          break;
        }
      if (ok) return l;
      std::size_t i = 0;
      while (i < rank && c[i] == box) c[i++] = -box;
      if (i == rank) break;
      ++c[i];
    }
  }
  return std::nullopt;
}

template <class C>
NormalizationReport<C> normalization_impl(const Series<C>& f, int k, const std::function<bool(const C&)>& negligible) {
  if (k > f.order()) throw SeriesError("k = " + std::to_string(k) + " exceeds the truncation order " + std::to_string(f.order()));
  if (k < 1) return {};
  const std::size_t r = f.rank();
  const C a = f.coefficient(IntVector(r), 0);
  if (is_zero_coeff(a)) throw SeriesError("slab function has vanishing constant term");
  Series<C> g = (C(1) / a) * f.truncated(k);
  g.add(IntVector(r), 0, C(-1));

  std::vector<IntVector> level0;
  for (const auto& [mono, c] : g.terms())
    if (mono.e == 0) level0.push_back(mono.m);
  const auto lambda = positive_covector(level0, r);
  if (!lambda) throw SeriesError("log expansion does not terminate: the t-order-zero part of f/a - 1 is not in an open half-space");
  Int slack = 0;
  for (const auto& [mono, c] : g.terms())
    if (mono.e > 0) slack = std::max(slack, Int(-pairing(*lambda, mono.m)));

  std::map<int, C> pure;
  Series<C> power = g;
  for (int i = 1; !power.empty(); ++i) {
    const C w = (i % 2 ? C(1) : C(-1)) / C(i);
    for (const auto& [mono, c] : power.terms())
      if (mono.e >= 1 && mono.m.is_zero()) pure[mono.e] += w * c;
    Series<C> next = power * g;
    Series<C> kept(r, k);
    // A term whose λ-degree exceeds what the remaining t-budget can undo never
    // reaches lattice degree zero again.
    for (const auto& [mono, c] : next.terms())
      if (pairing(*lambda, mono.m) <= slack * (k - mono.e)) kept.add(mono.m, mono.e, c);
    power = std::move(kept);
  }

  NormalizationReport<C> rep;
  for (const auto& [e, c] : pure)
    if (!negligible(c)) {
      rep.normalized = false;
      rep.offending[e] = c;
    }
  return rep;
}

template <class C>
bool compatibility_impl(const Series<C>& f, const Series<C>& fp, const IntVector& m, int kappa, int kappa_prime,
                        const std::function<bool(const Series<C>&, const Series<C>&)>& equal) {
  if (kappa < 0 || kappa_prime < 0) throw SeriesError("negative kink");
  if (f.order() + kappa != fp.order() + kappa_prime)
    throw SeriesError("incompatible truncation orders: " + std::to_string(f.order() + kappa) + " vs " +
                      std::to_string(fp.order() + kappa_prime));
  const int order = f.order() + kappa;
  const Series<C> lhs = f.shifted(IntVector(f.rank()), kappa, order);
  const Series<C> rhs = fp.shifted(m, kappa_prime, order);
  return equal(lhs, rhs);
}

}  // namespace

template <>
std::string Series<Rational>::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    os << (first ? "" : " + ") << coeff_str(c) << "*z^" << k.m.str() << "*t^" << k.e;
    first = false;
  }
  return first ? "0" : os.str();
}

template <>
std::string Series<Complex>::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    os << (first ? "" : " + ") << coeff_str(c) << "*z^" << k.m.str() << "*t^" << k.e;
    first = false;
  }
  return first ? "0" : os.str();
}

FloatSeries to_float(const ExactSeries& s) {
  FloatSeries out(s.rank(), s.order());
  for (const auto& [k, c] : s.terms()) out.add(k.m, k.e, Complex(static_cast<long double>(c), 0));
  return out;
}

long double distance(const FloatSeries& a, const FloatSeries& b) {
  long double d = 0;
  const FloatSeries diff = a - b;
  for (const auto& [k, c] : diff.terms()) d = std::max(d, std::abs(c));
  return d;
}

NormalizationReport<Rational> normalization(const ExactSeries& f, int k) {
  return normalization_impl<Rational>(f, k, [](const Rational& c) { return c == 0; });
}

NormalizationReport<Complex> normalization(const FloatSeries& f, int k, long double tolerance) {
  return normalization_impl<Complex>(f, k, [tolerance](const Complex& c) { return std::abs(c) < tolerance; });
}

bool check_normalized(const ExactSeries& f, int k) { return normalization(f, k).normalized; }
bool check_normalized(const FloatSeries& f, int k, long double tolerance) { return normalization(f, k, tolerance).normalized; }

ExactSeries normalize(ExactSeries f, int k) {
  const IntVector zero(f.rank());
  const Rational a = f.coefficient(zero, 0);
  if (a == 0) throw SeriesError("normalization needs a nonzero constant term");
  // Subtracting a·c·t^e shifts the t^e coefficient of log(f/a) by −c and only
  // touches higher orders otherwise.
  for (int step = 0; step <= k; ++step) {
    const auto r = normalization(f, k);
    if (r.normalized) return f;
    const auto& [e, c] = *r.offending.begin();
    f.add(zero, e, -a * c);
  }
  throw SeriesError("normalization did not settle within the truncation order");
}

bool compatibility_check(const ExactSeries& f, const ExactSeries& fp, const IntVector& m, int kappa, int kappa_prime) {
  return compatibility_impl<Rational>(f, fp, m, kappa, kappa_prime,
                                      [](const ExactSeries& a, const ExactSeries& b) { return a == b; });
}

bool compatibility_check(const FloatSeries& f, const FloatSeries& fp, const IntVector& m, int kappa, int kappa_prime,
                         long double tolerance) {
  return compatibility_impl<Complex>(f, fp, m, kappa, kappa_prime, [tolerance](const FloatSeries& a, const FloatSeries& b) {
    long double scale = 1;
    for (const auto& [k, c] : a.terms()) scale = std::max(scale, std::abs(c));
    return distance(a, b) <= tolerance * scale;
  });
}

Complex evaluate(const FloatSeries& f, Complex t, std::span<const Complex> z) {
  if (z.size() != f.rank()) throw SeriesError("point of wrong rank");
  Complex sum = 0;
  for (const auto& [k, c] : f.terms()) {
    Complex term = c * std::pow(t, k.e);
    for (std::size_t j = 0; j < z.size(); ++j) term *= std::pow(z[j], static_cast<long double>(to_ll(k.m[j])));
    sum += term;
  }
  return sum;
}

}  // namespace tropper
