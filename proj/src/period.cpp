#include "tropper/period.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace tropper {

namespace {

Complex ipow(Complex z, Int k) {
  if (k < 0) return Complex(1) / ipow(z, -k);
  Complex out = 1;
  for (long long e = to_ll(k); e; e >>= 1) {
    if (e & 1) out *= z;
    z *= z;
  }
  return out;
}

template <class K>
void bump(std::map<K, Int>& m, const K& key, const Int& delta) {
  if (delta == 0) return;
  auto [it, fresh] = m.try_emplace(key, delta);
  if (!fresh) {
    it->second += delta;
    if (it->second == 0) m.erase(it);
  }
}

std::string complex_str(Complex c) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(12) << "(" << static_cast<double>(c.real()) << "," << static_cast<double>(c.imag()) << ")";
  return os.str();
}

}  // namespace

void GluingData::set(std::size_t piece, int side, std::vector<Complex> values) {
  if (static_cast<int>(values.size()) != rank_) throw PeriodError("gluing data of wrong rank");
  for (const auto& v : values)
    if (v == Complex(0)) throw PeriodError("gluing value vanishes");
  values_[{piece, side}] = std::move(values);
}

std::vector<Complex> GluingData::values(std::size_t piece, int side) const {
  auto it = values_.find({piece, side});
  return it == values_.end() ? std::vector<Complex>(rank_, Complex(1)) : it->second;
}

Complex GluingData::evaluate(std::size_t piece, int side, const IntVector& m) const {
  if (m.size() != static_cast<std::size_t>(rank_)) throw PeriodError("gluing evaluated on a vector of wrong rank");
  const auto v = values(piece, side);
  Complex out = 1;
  for (std::size_t j = 0; j < m.size(); ++j) out *= ipow(v[j], m[j]);
  return out;
}

Complex PeriodData::slab_constant(std::size_t piece) const {
  auto it = slabs.find(piece);
  return it == slabs.end() ? Complex(1) : it->second.constant;
}

std::string PeriodProduct::str() const {
  std::ostringstream os;
  os << (sign < 0 ? "-" : "");
  if (std::abs(constant - Complex(1)) > 1e-12L) os << complex_str(constant) << "*";
  os << "t^" << t_exponent.str();
  return os.str();
}

Complex s_p(const TropicalManifold& m, const Crossing& c, const PeriodData& data) {
  const IntVector arrived = m.crossing(c.piece, c.from_side) * c.xi;
  return ipow(data.slab_constant(c.piece), c.pairing) * data.gluing.evaluate(c.piece, 1 - c.from_side, arrived) /
         data.gluing.evaluate(c.piece, c.from_side, c.xi);
}

namespace {

void require_periodic(const TropicalManifold& m, const TropicalOneCycle& c) {
  validate_cycle(m, c);
  if (touches_boundary(m, c)) throw PeriodError("cycle " + c.name + " meets the boundary; its period integral is not finite");
  const auto bad = balancing_defects(m, c);
  if (!bad.empty()) throw PeriodError("cycle " + c.name + " is unbalanced at vertex " + std::to_string(bad.front().vertex));
}

}  // namespace

PeriodProduct compute_period(const TropicalManifold& m, const TropicalOneCycle& c, const PeriodData& data) {
  require_periodic(m, c);
  PeriodProduct h;
  const std::size_t nu = valency_sum(c);
  h.odd_valency = nu % 2 == 1;
  h.sign = h.odd_valency ? -1 : 1;
  for (const auto& x : crossings(m, c)) {
    CrossingFactor f{x, s_p(m, x, data), x.kink * x.pairing};
    h.constant *= f.s_p;
    h.t_exponent += f.t_exponent;
    h.breakdown.push_back(std::move(f));
  }
  return h;
}

bool same_period(const PeriodProduct& a, const PeriodProduct& b, long double tolerance) {
  return a.sign == b.sign && a.t_exponent == b.t_exponent &&
         std::abs(a.constant - b.constant) <= tolerance * std::max<long double>(1, std::abs(a.constant));
}

PeriodProduct inverse(const PeriodProduct& p) {
  PeriodProduct r;
  r.sign = p.sign;
  r.constant = Complex(1) / p.constant;
  r.t_exponent = -p.t_exponent;
  r.odd_valency = p.odd_valency;
  return r;
}

PeriodProduct operator*(const PeriodProduct& a, const PeriodProduct& b) {
  PeriodProduct r;
  r.sign = a.sign * b.sign;
  r.constant = a.constant * b.constant;
  r.t_exponent = a.t_exponent + b.t_exponent;
  r.odd_valency = a.odd_valency != b.odd_valency;
  r.breakdown = a.breakdown;
  r.breakdown.insert(r.breakdown.end(), b.breakdown.begin(), b.breakdown.end());
  return r;
}

LogTValue& LogTValue::operator+=(const LogTValue& o) {
  log_t += o.log_t;
  for (const auto& [k, v] : o.logs) bump(logs, k, v);
  for (const auto& [k, v] : o.radii) bump(radii, k, v);
  half_units += o.half_units;
  return *this;
}

std::string LogTValue::str() const {
  std::ostringstream os;
  os << log_t.str() << "*log(t)";
  for (const auto& [a, c] : logs) {
    os << " + " << c.str() << "*log(" << (a.kind == LogAtom::SlabConstant ? "a" : "s") << "[" << a.piece;
    if (a.kind == LogAtom::Gluing) os << "," << a.side << "," << a.coordinate;
    os << "])";
  }
  for (const auto& [r, c] : radii) os << " + " << c.str() << "*log(" << r.str() << ")";
  if (half_units != 0) os << " + " << half_units.str() << "*(pi*i)";
  return os.str();
}

Complex principal_log(Complex z) {
  if (z == Complex(0)) throw PeriodError("logarithm of zero");
  long double arg = std::arg(z);
  if (arg < 0) arg += 2 * std::numbers::pi_v<long double>;
  return {std::log(std::abs(z)), arg};
}

PeriodProduct exponentiate(const LogTValue& v, const PeriodData& data) {
  if (!v.radii.empty()) throw PeriodError("radius terms did not cancel: " + v.str());
  PeriodProduct h;
  h.t_exponent = -v.log_t;
  Complex log_constant = 0;
  for (const auto& [a, c] : v.logs) {
    const Complex x = a.kind == LogAtom::SlabConstant ? data.slab_constant(a.piece) : data.gluing.values(a.piece, a.side).at(a.coordinate);
    log_constant -= static_cast<long double>(to_ll(c)) * principal_log(x);
  }
  h.constant = std::exp(log_constant);
  h.sign = v.half_units % 2 == 0 ? 1 : -1;
  return h;
}

LogTValue slab_integral_closed_form(const TropicalManifold& m, const Crossing& c, const PeriodData& data,
                                    std::span<const Rational> r, std::span<const Rational> r_prime) {
  const std::size_t n = m.rank();
  if (r.size() != n || r_prime.size() != n) throw PeriodError("endpoint radii of wrong rank");
  for (std::size_t j = 0; j < n; ++j)
    if (r[j] <= 0 || r_prime[j] <= 0) throw PeriodError("endpoint radius must be positive");
  const IntVector arrived = m.crossing(c.piece, c.from_side) * c.xi;
  LogTValue v;
  // The v_1-direction of the add-in is opposite to d_p.
  v.log_t = -c.kink * c.pairing;
  if (data.slabs.count(c.piece)) bump(v.logs, LogAtom{LogAtom::SlabConstant, c.piece, 0, 0}, -c.pairing);
  for (std::size_t j = 0; j < n; ++j) {
    if (data.gluing.has(c.piece, c.from_side)) bump(v.logs, LogAtom{LogAtom::Gluing, c.piece, c.from_side, j}, c.xi[j]);
    if (data.gluing.has(c.piece, 1 - c.from_side)) bump(v.logs, LogAtom{LogAtom::Gluing, c.piece, 1 - c.from_side, j}, -arrived[j]);
    bump(v.radii, r_prime[j], arrived[j]);
    bump(v.radii, r[j], -c.xi[j]);
  }
  return v;
}

RadiusAssignment random_radii(const TropicalManifold& m, const TropicalOneCycle& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 997), den(1, 991);
  auto point = [&] {
    std::vector<Rational> p(m.rank());
    for (auto& x : p) x = Rational(num(rng), den(rng));
    return p;
  };
  RadiusAssignment a;
  for (std::size_t i = 0; i < c.vertices.size(); ++i) a.vertex.push_back(point());
  for (const auto& e : c.edges) {
    auto& row = a.crossing.emplace_back();
    for (std::size_t k = 0; k < e.route.size(); ++k) {
      auto before = point();
      row.emplace_back(std::move(before), point());
    }
  }
  return a;
}

Assembly assemble_integral(const TropicalManifold& m, const TropicalOneCycle& c, const PeriodData& data, const RadiusAssignment& radii) {
  require_periodic(m, c);
  const std::size_t n = m.rank();
  if (radii.vertex.size() != c.vertices.size() || radii.crossing.size() != c.edges.size())
    throw PeriodError("radius assignment does not match the cycle");
  Assembly out;
  LogTValue& v = out.value;
  auto chamber = [&](const std::vector<Rational>& from, const std::vector<Rational>& to, const IntVector& xi) {
    for (std::size_t j = 0; j < n; ++j) {
      bump(v.radii, to[j], xi[j]);
      bump(v.radii, from[j], Int(-xi[j]));
      if (xi[j] != 0) out.radius_terms += 2;
    }
  };
  const auto xs = crossings(m, c);
  std::size_t next = 0;
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    const auto& ed = c.edges[e];
    if (radii.crossing[e].size() != ed.route.size()) throw PeriodError("radius assignment does not match the route");
    std::vector<Rational> at = radii.vertex[ed.source];
    IntVector xi = ed.xi;
    for (std::size_t k = 0; k < ed.route.size(); ++k, ++next) {
      const auto& [before, after] = radii.crossing[e][k];
      chamber(at, before, xi);
      v += slab_integral_closed_form(m, xs[next], data, before, after);
      out.radius_terms += 2 * n;
      xi = m.crossing(ed.route[k].piece, ed.route[k].from_side) * xi;
      at = after;
    }
    chamber(at, radii.vertex[ed.target], xi);
  }
  // Vertex add-ins contribute (2πi)^n·a_v with a_v ≡ valency/2 modulo ℤ.
  std::vector<std::size_t> val(c.vertices.size(), 0);
  for (const auto& ed : c.edges) {
    ++val[ed.source];
    ++val[ed.target];
  }
  for (auto x : val) v.half_units += x;
  v.half_units %= 2;
  out.radii_cancel = v.radii.empty();
  if (out.radii_cancel) out.exponentiated = exponentiate(v, data);
  out.exponentiated.odd_valency = valency_sum(c) % 2 == 1;
  return out;
}

}  // namespace tropper
