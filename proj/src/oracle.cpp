#include "tropper/oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace tropper {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr Complex kI{0, 1};

// Where the node chart of the Tate family meets the smooth chart: |z| = ε̂ and |w| = ε̂'.
constexpr long double kChartEdge = 0.9L;
constexpr long double kChartEdgePrime = 0.9L;

using Gauss = boost::math::quadrature::gauss<long double, 20>;

// Uniform trapezoid over (ℝ/2πℤ)^dim; spectrally accurate for periodic f.
Complex torus_sum(std::size_t dim, std::size_t n, const std::function<Complex(std::span<const long double>)>& f) {
  std::vector<std::size_t> idx(dim, 0);
  std::vector<long double> theta(dim, 0);
  const long double h = 2 * kPi / static_cast<long double>(n);
  Complex sum = 0;
  for (;;) {
    for (std::size_t j = 0; j < dim; ++j) theta[j] = h * static_cast<long double>(idx[j]);
    sum += f(theta);
    std::size_t j = 0;
    while (j < dim && ++idx[j] == n) idx[j++] = 0;
    if (j == dim) break;
  }
  return sum * std::pow(h, static_cast<long double>(dim));
}

// ∫ z'/z along z(s) on [s0, s1] by Gauss–Legendre on `pieces` equal parts.
Complex path_dlog(const std::function<Complex(long double)>& z, const std::function<Complex(long double)>& dz, long double s0,
                  long double s1, std::size_t pieces) {
  Complex out = 0;
  const long double h = (s1 - s0) / static_cast<long double>(pieces);
  for (std::size_t p = 0; p < pieces; ++p) {
    const long double a = s0 + h * static_cast<long double>(p);
    const auto re = Gauss::integrate([&](long double s) { return (dz(s) / z(s)).real(); }, a, a + h);
    const auto im = Gauss::integrate([&](long double s) { return (dz(s) / z(s)).imag(); }, a, a + h);
    out += Complex(re, im);
  }
  return out;
}

// Straight radial segment ρ·e^{iφ}, ρ from r0 to r1, split geometrically.
Complex radial_dlog(long double r0, long double r1, long double phase) {
  const Complex u = std::polar(1.0L, phase);
  const auto pieces = static_cast<std::size_t>(std::ceil(std::abs(std::log(r1 / r0)) / std::log(1.5L))) + 1;
  Complex out = 0;
  for (std::size_t p = 0; p < pieces; ++p) {
    const long double a = r0 * std::pow(r1 / r0, static_cast<long double>(p) / pieces);
    const long double b = r0 * std::pow(r1 / r0, static_cast<long double>(p + 1) / pieces);
    out += path_dlog([&](long double s) { return u * (a + s * (b - a)); }, [&](long double) { return u * (b - a); }, 0, 1, 1);
  }
  return out;
}

Rational floor_q(const Rational& x) {
  const Int n = numerator(x), d = denominator(x);
  Int q = n / d;
  if (n % d != 0 && n < 0) --q;
  return Rational(q);
}

Int floor_int(const Rational& x) { return numerator(floor_q(x)); }

Rational level(const VertexStar& s, std::span<const Rational> phi) {
  Rational c = 0;
  for (const auto& v : s.vectors) {
    Rational p = 0;
    for (std::size_t j = 0; j < s.dim; ++j) p += Rational(v[j]) * phi[j];
    c += floor_q(p);
  }
  return c;
}

void sort_unique(std::vector<Rational>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

Rational measure_1d(const VertexStar& s) {
  std::vector<Rational> cuts{0, 1};
  for (const auto& v : s.vectors) {
    const Int a = boost::multiprecision::abs(v[0]);
    for (Int k = 1; k < a; ++k) cuts.push_back(Rational(k, a));
  }
  sort_unique(cuts);
  Rational total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational mid[1] = {(cuts[i] + cuts[i + 1]) / 2};
    total += level(s, mid) * (cuts[i + 1] - cuts[i]);
  }
  return total;
}

// Lines p·x + q·y = k meeting the open unit square.
struct Line {
  Rational p, q, k;
};

Rational measure_2d(const VertexStar& s) {
  std::vector<Line> lines;
  for (const auto& v : s.vectors) {
    const Rational p(v[0]), q(v[1]);
    const Rational corners[4] = {Rational(0), p, q, p + q};
    const Int lo = floor_int(*std::min_element(corners, corners + 4));
    const Int hi = floor_int(*std::max_element(corners, corners + 4)) + 1;
    for (Int k = lo; k <= hi; ++k) lines.push_back({p, q, Rational(k)});
  }
  std::vector<Rational> cuts{0, 1};
  auto keep = [&](const Rational& x) {
    if (x > 0 && x < 1) cuts.push_back(x);
  };
  for (const auto& l : lines) {
    if (l.p == 0) continue;
    keep(l.k / l.p);              // y = 0, or the whole line when q = 0
    keep((l.k - l.q) / l.p);      // y = 1
  }
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const Rational det = lines[a].p * lines[b].q - lines[a].q * lines[b].p;
      if (det != 0) keep((lines[a].k * lines[b].q - lines[a].q * lines[b].k) / det);
    }
  sort_unique(cuts);

  Rational total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational x = (cuts[i] + cuts[i + 1]) / 2, width = cuts[i + 1] - cuts[i];
    // No line crosses another or the square's edges inside the strip, so
    // each cell is a trapezoid whose mean height is its height at x.
    std::vector<Rational> ys{0, 1};
    for (const auto& l : lines) {
      if (l.q == 0) continue;
      const Rational y = (l.k - l.p * x) / l.q;
      if (y > 0 && y < 1) ys.push_back(y);
    }
    sort_unique(ys);
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Rational mid[2] = {x, (ys[j] + ys[j + 1]) / 2};
      total += level(s, mid) * width * (ys[j + 1] - ys[j]);
    }
  }
  return total;
}

long double det_small(std::vector<std::vector<long double>> a) {
  const std::size_t n = a.size();
  long double d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (a[p][c] == 0) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

// Argument in [0, 2π), the branch used for log t throughout.
long double arg_0_2pi(Complex t) {
  const long double a = std::arg(t);
  return a < 0 ? a + 2 * kPi : a;
}

std::string complex_label(Complex t) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << "|t|=" << static_cast<double>(std::abs(t)) << ",arg=" << static_cast<double>(arg_0_2pi(t));
  return os.str();
}

}  // namespace

std::size_t QuadratureConfig::samples_for(std::size_t dim) const {
  if (samples) return samples;
  return dim <= 1 ? 2048 : dim == 2 ? 256 : 64;
}

std::vector<Complex> QuadratureConfig::t_grid() const {
  if (!t_samples.empty()) return t_samples;
  std::vector<Complex> g;
  for (long double r : {0.05L, 0.3L, 0.7L})
    for (long double a : {0.4L, 2.5L, 5.1L}) g.push_back(std::polar(r, a));
  return g;
}

void QuadratureConfig::validate() const {
  if (samples != 0 && samples < 64) throw OracleError("quadrature needs at least 64 samples per dimension");
  if (!(tolerance > 0)) throw OracleError("quadrature tolerance must be positive");
  for (const auto& t : t_samples)
    if (!(std::abs(t) > 0 && std::abs(t) < 1)) throw OracleError("t samples must lie in the punctured unit disk");
}

Complex integrate_alpha(int n, const QuadratureConfig& cfg) {
  cfg.validate();
  if (n < 1 || n > 3) throw OracleError("integrate_alpha supports n = 1, 2, 3");
  const auto dim = static_cast<std::size_t>(n);
  std::vector<long double> radii(dim);
  for (std::size_t j = 0; j < dim; ++j) radii[j] = 0.5L + 0.25L * static_cast<long double>(j);
  return torus_sum(dim, cfg.samples_for(dim), [&](std::span<const long double> theta) {
    Complex form = 1;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const Complex z = std::polar(radii[j], theta[j]);
      form *= kI * z / z;  // dz_j/dθ_j over z_j
    }
    return form;
  });
}

TatePatch tate_patches(Complex t, int k, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(std::abs(t) > 0 && std::abs(t) < 1)) throw OracleError("tate_period needs 0 < |t| < 1");
  if (k < 1) throw OracleError("tate_period needs k ≥ 1");
  TatePatch out;
  // Smooth chart: u runs along the positive reals from ε̂ to 1/ε̂'.
  out.g1 = radial_dlog(kChartEdge, 1 / kChartEdgePrime, 0);
  // Node chart: z = t^k/w starts at w = ε̂', then the angular part brings arg z
  // from kψ to 0 and the radial part runs out to |z| = ε̂.
  const long double psi = arg_0_2pi(t);
  const long double start = static_cast<long double>(k) * psi;
  const long double r0 = std::pow(std::abs(t), static_cast<long double>(k)) / kChartEdgePrime;
  const auto pieces = static_cast<std::size_t>(std::ceil(start)) + 1;
  const Complex angular = path_dlog([&](long double s) { return std::polar(r0, s); },
                                    [&](long double s) { return kI * std::polar(r0, s); }, start, 0, pieces);
  // Track arg z along the arc; principal-arg jumps reveal branch crossings.
  const std::size_t probes = cfg.samples_for(1);
  long double turned = 0, prev = std::arg(std::polar(r0, start));
  for (std::size_t i = 1; i <= probes; ++i) {
    const long double s = start * (1 - static_cast<long double>(i) / probes);
    const long double a = std::arg(std::polar(r0, s));
    turned += std::remainder(a - prev, 2 * kPi);
    prev = a;
  }
  out.winding = turned / (2 * kPi);
  out.g2 = angular + radial_dlog(r0, kChartEdge, 0);
  return out;
}

Complex tate_period(Complex t, int k, const QuadratureConfig& cfg) { return tate_patches(t, k, cfg).total(); }

Complex wall_integral(const FloatSeries& f_tilde, std::span<const long double> radii, Complex t, const QuadratureConfig& cfg) {
  cfg.validate();
  const std::size_t dim = f_tilde.rank();
  if (radii.size() != dim) throw OracleError("one radius per lattice coordinate");
  for (long double r : radii)
    if (!(r > 0)) throw OracleError("radii must be positive");
  if (f_tilde.coefficient(IntVector(dim), 0) != Complex(0)) throw OracleError("f̃ has a constant term");
  auto integrand = [&](std::span<const long double> theta) {
    std::vector<Complex> z(dim);
    for (std::size_t j = 0; j < dim; ++j) z[j] = std::polar(radii[j], theta[j]);
    const Complex w = evaluate(f_tilde, t, z);
    if (std::abs(w) >= 1) throw OracleError("|f̃| ≥ 1 on the sampled torus");
    if (std::abs(Complex(1) + w) < 1e-6L) throw OracleError("log(1+f̃) is singular on the sampled torus");
    return std::log(Complex(1) + w);  // Re(1+f̃) > 0, so the principal branch is continuous
  };
  if (dim == 0) return integrand({});
  return torus_sum(dim, cfg.samples_for(dim), integrand);
}

Int torus_degree(const IntVector& xi, std::size_t j) {
  const std::size_t n = xi.size();
  if (xi.is_zero()) throw OracleError("torus_degree needs ξ ≠ 0");
  if (j < 1 || j > n) throw OracleError("coordinate index out of range");
  // Columns ξ, e_i (i ≠ j): the determinant of ⊕_{i≠j} ℤe_i → ℤ^n/ξℤ with
  // T oriented by ξ first.
  IntMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) m(r, 0) = xi[r];
  for (std::size_t i = 0, c = 1; i < n; ++i)
    if (i + 1 != j) m(i, c++) = 1;
  return determinant(m);
}

long double torus_degree_numeric(const IntVector& xi, std::size_t j, std::size_t samples) {
  const std::size_t n = xi.size();
  if (xi.is_zero()) throw OracleError("torus_degree needs ξ ≠ 0");
  if (j < 1 || j > n) throw OracleError("coordinate index out of range");
  const Int g = gcd_of(xi.entries());
  IntMatrix row(1, n);
  for (std::size_t i = 0; i < n; ++i) row(0, i) = xi[i];
  auto w = integer_kernel(row);  // lattice of the identity component
  std::vector<IntVector> frame{xi};
  frame.insert(frame.end(), w.begin(), w.end());
  const Int orient = determinant(IntMatrix::from_columns(frame, n));
  if (w.empty()) return static_cast<long double>(to_ll(g)) * (orient > 0 ? 1 : -1);
  if (orient < 0) w[0] = -w[0];

  // Sample the pulled-back form on a grid of the identity component; the
  // other g − 1 components are translates and carry the same measure.
  const std::size_t d = n - 1;
  auto coords = [&](std::span<const long double> u) {
    std::vector<long double> theta;
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 == j) continue;
      long double x = 0;
      for (std::size_t k = 0; k < d; ++k) x += u[k] * static_cast<long double>(to_ll(w[k][i]));
      theta.push_back(x - std::floor(x));
    }
    return theta;
  };
  const long double h = 1e-4L;
  long double sum = 0;
  std::vector<std::size_t> idx(d, 0);
  std::vector<long double> u(d);
  for (;;) {
    for (std::size_t k = 0; k < d; ++k) u[k] = (static_cast<long double>(idx[k]) + 0.5L) / samples;
    std::vector<std::vector<long double>> jac(d, std::vector<long double>(d));
    for (std::size_t k = 0; k < d; ++k) {
      auto up = u, dn = u;
      up[k] += h;
      dn[k] -= h;
      const auto a = coords(up), b = coords(dn);
      for (std::size_t r = 0; r < d; ++r) jac[r][k] = std::remainder(a[r] - b[r], 1.0L) / (2 * h);
    }
    sum += det_small(jac);
    std::size_t k = 0;
    while (k < d && ++idx[k] == samples) idx[k++] = 0;
    if (k == d) break;
  }
  return static_cast<long double>(to_ll(g)) * sum / std::pow(static_cast<long double>(samples), static_cast<long double>(d));
}

void VertexStar::validate() const {
  if (dim != 1 && dim != 2) throw OracleError("vertex stars are implemented in dimensions 1 and 2");
  if (vectors.size() < 2) throw OracleError("a vertex star needs at least two edges");
  IntVector sum(dim);
  for (const auto& v : vectors) {
    if (v.size() != dim) throw OracleError("star vector of wrong dimension");
    if (v.is_zero()) throw OracleError("star vector is zero");
    sum += v;
  }
  if (!sum.is_zero()) throw OracleError("unbalanced star: vectors sum to " + sum.str());
}

Rational vertex_measure_exact(const VertexStar& star) {
  star.validate();
  return star.dim == 1 ? measure_1d(star) : measure_2d(star);
}

long double vertex_measure(const VertexStar& star) {
  const Rational m = vertex_measure_exact(star);
  return static_cast<long double>(m - floor_q(m));
}

std::vector<VertexStar> make_trivalent(const VertexStar& star) {
  star.validate();
  const std::size_t v = star.vectors.size();
  if (v <= 3) return {star};
  std::vector<IntVector> partial{star.vectors[0]};
  for (std::size_t i = 1; i < v; ++i) partial.push_back(partial.back() + star.vectors[i]);
  std::vector<VertexStar> out;
  auto emit = [&](std::vector<IntVector> vs) {
    std::erase_if(vs, [](const IntVector& x) { return x.is_zero(); });
    if (!vs.empty()) out.push_back({star.dim, std::move(vs)});
  };
  // partial[i] = ξ₁ + … + ξ_{i+1} is the section on f_i.
  emit({star.vectors[0], star.vectors[1], -partial[1]});
  for (std::size_t w = 2; w + 1 < v - 1; ++w) emit({partial[w - 1], star.vectors[w], -partial[w]});
  emit({partial[v - 3], star.vectors[v - 2], star.vectors[v - 1]});
  return out;
}

std::vector<long double> moment_map(std::span<const IntVector> points, std::span<const Complex> z) {
  if (points.empty()) throw OracleError("moment map of an empty lattice-point set");
  const std::size_t n = z.size();
  std::vector<long double> logw;
  for (const auto& m : points) {
    if (m.size() != n) throw OracleError("lattice point of wrong rank");
    long double l = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (z[j] == Complex(0)) throw OracleError("moment map needs a torus point");
      l += 2 * static_cast<long double>(to_ll(m[j])) * std::log(std::abs(z[j]));
    }
    logw.push_back(l);
  }
  const long double top = *std::max_element(logw.begin(), logw.end());
  std::vector<long double> mu(n, 0);
  long double total = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const long double w = std::exp(logw[i] - top);
    total += w;
    for (std::size_t j = 0; j < n; ++j) mu[j] += w * static_cast<long double>(to_ll(points[i][j]));
  }
  for (auto& x : mu) x /= total;
  return mu;
}

std::vector<long double> canonical_section(std::span<const IntVector> points, std::span<const long double> b) {
  if (points.empty()) throw OracleError("canonical section of an empty lattice-point set");
  if (b.size() != 1) throw OracleError("canonical section is implemented in rank one");
  long double lo = 0, hi = 0;
  bool first = true;
  for (const auto& m : points) {
    if (m.size() != 1) throw OracleError("lattice point of wrong rank");
    const auto x = static_cast<long double>(to_ll(m[0]));
    lo = first ? x : std::min(lo, x);
    hi = first ? x : std::max(hi, x);
    first = false;
  }
  if (!(b[0] > lo && b[0] < hi)) throw OracleError("section point must lie in the interior of σ");
  // μ(e^x) is increasing in x; Newton safeguarded by a bracket.
  auto mu = [&](long double x) {
    const Complex z[1] = {Complex(std::exp(x), 0)};
    return moment_map(points, z)[0];
  };
  // d/dx μ(e^x) = 2·Var of m under the weights e^{2mx}.
  auto var = [&](long double x) {
    long double top = -std::numeric_limits<long double>::infinity();
    for (const auto& p : points) top = std::max(top, 2 * static_cast<long double>(to_ll(p[0])) * x);
    long double e1 = 0, e2 = 0, tot = 0;
    for (const auto& p : points) {
      const auto m = static_cast<long double>(to_ll(p[0]));
      const long double w = std::exp(2 * m * x - top);
      e1 += w * m;
      e2 += w * m * m;
      tot += w;
    }
    return e2 / tot - (e1 / tot) * (e1 / tot);
  };
  long double a = -1, c = 1;
  while (mu(a) > b[0]) a *= 2;
  while (mu(c) < b[0]) c *= 2;
  long double x = 0;
  for (int it = 0; it < 200; ++it) {
    const long double f = mu(x) - b[0];
    if (std::abs(f) < 1e-16L) break;
    (f > 0 ? c : a) = x;
    const long double d = 2 * var(x);
    long double next = d > 0 ? x - f / d : (a + c) / 2;
    if (!(next > a && next < c)) next = (a + c) / 2;
    x = next;
  }
  return {std::exp(x)};
}

VertexStar random_star(std::mt19937_64& rng, std::size_t dim, std::size_t valency) {
  std::uniform_int_distribution<int> entry(-3, 3);
  for (;;) {
    VertexStar s{dim, {}};
    IntVector sum(dim);
    for (std::size_t i = 0; i + 1 < valency; ++i) {
      IntVector v(dim);
      for (std::size_t j = 0; j < dim; ++j) v[j] = entry(rng);
      if (v.is_zero()) break;
      sum += v;
      s.vectors.push_back(v);
    }
    if (s.vectors.size() + 1 != valency || sum.is_zero()) continue;
    s.vectors.push_back(-sum);
    return s;
  }
}

ExactSeries random_normalized_slab(std::mt19937_64& rng, std::size_t rank, int order) {
  std::uniform_int_distribution<int> num(-3, 3), exponent(-2, 2), t_exp(1, std::max(order, 1));
  ExactSeries f = ExactSeries::constant(rank, order, Rational(1));
  // t-order 0 terms sit in the half-space m₀ > 0 so that log(1+f̃) terminates.
  for (int i = 0; i < 2; ++i) {
    IntVector m(rank);
    if (rank) m[0] = 1 + (i % 2);
    for (std::size_t j = 1; j < rank; ++j) m[j] = exponent(rng);
    if (rank) f.add(m, 0, Rational(num(rng), 40));
  }
  for (int i = 0; i < 2; ++i) {
    IntVector m(rank);
    for (std::size_t j = 0; j < rank; ++j) m[j] = exponent(rng);
    f.add(m, t_exp(rng), Rational(num(rng), 20));
  }
  return normalize(f, order);
}

std::vector<OracleRow> verification_suite(const QuadratureConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::vector<OracleRow> rows;
  auto row = [&](std::string q, Complex closed, Complex numeric, long double tol, bool relative) {
    const long double err = std::abs(closed - numeric);
    const long double scale = relative ? std::max<long double>(std::abs(closed), 1e-300L) : 1;
    rows.push_back({std::move(q), closed, numeric, err, err <= tol * scale});
  };

  for (int n = 1; n <= 3; ++n)
    row("alpha n=" + std::to_string(n), std::pow(2 * kPi * kI, n), integrate_alpha(n, cfg), n < 3 ? 1e-8L : 1e-6L, true);

  const Complex alpha = integrate_alpha(1, cfg);
  for (int k : {1, 2, 5})
    for (const auto& t : cfg.t_grid()) {
      const long double psi = arg_0_2pi(t);
      const Complex closed = -static_cast<long double>(k) * Complex(std::log(std::abs(t)), psi);
      const Complex g = tate_period(t, k, cfg);
      row("tate k=" + std::to_string(k) + " " + complex_label(t), closed, g, 1e-8L, true);
      row("canonical coordinate k=" + std::to_string(k) + " " + complex_label(t), std::pow(t, k), std::exp(-2 * kPi * kI * g / alpha),
          1e-8L, true);
    }

  std::mt19937_64 rng(seed);
  std::vector<std::pair<IntVector, std::size_t>> degrees{{IntVector{1, 0}, 1}, {IntVector{2, 1}, 1}, {IntVector{2, 1}, 2}};
  std::uniform_int_distribution<int> coord(-3, 3);
  while (degrees.size() < 8) {
    IntVector xi{coord(rng), coord(rng), coord(rng)};
    if (xi[0] == 0 || xi[1] == 0 || xi[2] == 0) continue;
    degrees.push_back({xi, 1 + degrees.size() % 3});
  }
  for (const auto& [xi, j] : degrees) {
    const auto exact = static_cast<long double>(to_ll(torus_degree(xi, j)));
    const long double numeric = torus_degree_numeric(xi, j);
    row("torus degree xi=" + xi.str() + " j=" + std::to_string(j), exact, numeric, 0.1L, false);
    if (std::lround(numeric) != std::lround(exact)) rows.back().pass = false;
  }

  const std::vector<std::vector<long long>> trivalent{{1, 1, -2}, {2, 3, -5}, {1, 2, -3}};
  for (const auto& a : trivalent) {
    VertexStar s{1, {}};
    std::string label = "vertex measure a=(";
    for (std::size_t i = 0; i < a.size(); ++i) {
      s.vectors.push_back(IntVector{a[i]});
      label += (i ? "," : "") + std::to_string(a[i]);
    }
    row(label + ")", 0.5L, vertex_measure(s), 1e-9L, false);
  }
  for (std::size_t dim : {1u, 2u})
    for (std::size_t valency : {3u, 4u, 5u}) {
      const VertexStar s = random_star(rng, dim, valency);
      const long double direct = vertex_measure(s);
      long double split = 0;
      for (const auto& w : make_trivalent(s)) split += static_cast<long double>(vertex_measure_exact(w));
      split -= std::floor(split);
      std::string label = "vertex measure dim=" + std::to_string(dim) + " star=";
      for (const auto& v : s.vectors) label += v.str();
      row(label, direct, split, 1e-9L, false);
      const long double twice = 2 * direct;
      if (std::abs(twice - std::round(twice)) > 1e-9L) rows.back().pass = false;
    }

  const long double unit_radii[1] = {0.8L};
  FloatSeries lattice_only = FloatSeries::monomial(1, 3, IntVector{1}, 0, Complex(0.3L));
  row("wall f=0.3*z", 0, wall_integral(lattice_only, unit_radii, Complex(0.3L), cfg), 1e-6L, false);
  FloatSeries pure_t = FloatSeries::monomial(1, 3, IntVector{0}, 1, Complex(0.3L));
  row("wall f=0.3*t (control)", 2 * kPi * std::log(1.15L), wall_integral(pure_t, unit_radii, Complex(0.5L), cfg), 1e-10L, true);
  for (int i = 0; i < 3; ++i) {
    const std::size_t rank = 1 + i % 2;
    const ExactSeries f = random_normalized_slab(rng, rank, 4);
    FloatSeries tilde = to_float(f) - FloatSeries::constant(rank, 4, Complex(1));
    std::vector<long double> radii(rank, 0.9L);
    row("wall normalized slab " + std::to_string(i) + " rank=" + std::to_string(rank), 0,
        wall_integral(tilde, radii, std::polar(0.02L, 1.0L), cfg), 1e-6L, false);
  }

  const IntVector p1[2] = {IntVector{0}, IntVector{1}};
  const Complex equal[1] = {Complex(1)};
  row("moment map P1 at z=w", 0.5L, moment_map(p1, equal)[0], 1e-15L, false);
  const IntVector seg[3] = {IntVector{0}, IntVector{1}, IntVector{2}};
  for (long double b : {0.25L, 1.0L, 1.7L}) {
    const long double pt[1] = {b};
    const auto s = canonical_section(seg, pt);
    const Complex z[1] = {Complex(s[0])};
    std::ostringstream label;
    label << "moment map section round trip b=" << static_cast<double>(b);
    row(label.str(), b, moment_map(seg, z)[0], 1e-12L, false);
  }
  return rows;
}

}  // namespace tropper
