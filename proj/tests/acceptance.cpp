// One line per acceptance criterion. Tolerances and sample sizes are fixed
// here; the exit status is nonzero when any criterion fails.

#include "tropper/cech.hpp"
#include "tropper/manifest.hpp"
#include "tropper/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

using namespace tropper;

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
const Complex kI(0, 1);

constexpr double kTateBudget = 1.0;         // seconds, criterion 1
constexpr double kQuadratureBudget = 10.0;  // seconds, criterion 2
constexpr double kHomologyBudget = 30.0;    // seconds, criterion 7
constexpr long double kCanonicalRel = 1e-8L;
constexpr long double kAlphaRel12 = 1e-8L;
constexpr long double kAlphaRel3 = 1e-6L;
constexpr long double kHalfIntegral = 1e-9L;
constexpr long double kWallVanishing = 1e-6L;
constexpr long double kWallControl = 1e-3L;
constexpr long double kExactPeriod = 1e-12L;  // constants are products of gluing values

Manifest fixture(const std::string& name) { return load_manifest(std::string(FIXTURE_DIR) + "/" + name + ".json"); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail << what;
    else if (detail.tellp() < 400) detail << "; " << what;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<TropicalOneCycle> closed_cycles(const TropicalManifold& m, const Manifest& mf) {
  std::vector<TropicalOneCycle> out = explicit_cycles(m, mf);
  for (const auto& [n, w] : mf.skeleton_weights) out.push_back(from_skeleton_weights(m, w, n));
  std::erase_if(out, [&](const TropicalOneCycle& c) { return touches_boundary(m, c); });
  return out;
}

Manifest tate(int k) {
  auto mf = fixture("tate_k2");
  for (auto& d : mf.input.kinks) d.kink = k;
  return mf;
}

void tate_exact(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 1; k <= 5; ++k) {
    const auto mf = tate(k);
    const TropicalManifold m(mf.input);
    const auto h = compute_period(m, resolve_cycle(m, mf.cycles.front()), period_data(m, mf));
    o.require(h.sign == 1 && h.constant == Complex(1) && h.t_exponent == k, "k=" + std::to_string(k) + " gave " + h.str());
  }
  const double s = seconds_since(t0);
  o.require(s < kTateBudget, "took " + std::to_string(s) + " s");
  o.detail << (o.pass ? "h = t^k for k = 1..5" : "");
}

void tate_numeric(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const QuadratureConfig cfg;
  const Complex alpha = integrate_alpha(1, cfg);
  long double worst = 0;
  for (int k = 1; k <= 5; ++k)
    for (const auto& t : cfg.t_grid()) {
      const Complex q = std::exp(-2 * kPi * kI * tate_period(t, k, cfg) / alpha);
      const Complex want = std::pow(t, k);
      worst = std::max(worst, std::abs(q - want) / std::abs(want));
    }
  const double s = seconds_since(t0);
  o.require(worst <= kCanonicalRel, "relative error " + std::to_string(static_cast<double>(worst)));
  o.require(s < kQuadratureBudget, "took " + std::to_string(s) + " s");
  if (o.pass) o.detail << "max relative error " << static_cast<double>(worst) << " over 5 kinks x 9 t";
}

void alpha(Outcome& o) {
  for (int n = 1; n <= 3; ++n) {
    const Complex want = std::pow(2 * kPi * kI, n);
    const long double rel = std::abs(integrate_alpha(n) - want) / std::abs(want);
    o.require(rel <= (n < 3 ? kAlphaRel12 : kAlphaRel3), "n=" + std::to_string(n) + " relative " + std::to_string(static_cast<double>(rel)));
    if (o.pass) o.detail << "n=" << n << ":" << static_cast<double>(rel) << " ";
  }
}

void degrees(Outcome& o) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> entry(1, 3), sign(0, 1), coord(1, 3);
  for (int trial = 0; trial < 25; ++trial) {
    IntVector xi(3);
    for (std::size_t i = 0; i < 3; ++i) xi[i] = entry(rng) * (sign(rng) ? 1 : -1);
    const auto j = static_cast<std::size_t>(coord(rng));
    const Int exact = torus_degree(xi, j);
    const Int want = (j % 2 == 1 ? 1 : -1) * xi[j - 1];
    const long double numeric = torus_degree_numeric(xi, j);
    o.require(exact == want, "xi=" + xi.str() + " j=" + std::to_string(j) + " degree " + std::to_string(to_ll(exact)));
    o.require(std::llround(numeric) == to_ll(exact), "numeric degree " + std::to_string(static_cast<double>(numeric)) + " for xi=" + xi.str());
  }
  if (o.pass) o.detail << "25 random xi in Z^3";
}

void vertex_measures(Outcome& o) {
  for (const auto& a : std::vector<std::vector<long long>>{{1, 1, -2}, {2, 3, -5}, {1, 2, -3}}) {
    VertexStar s{1, {}};
    for (auto x : a) s.vectors.push_back(IntVector{x});
    const long double v = vertex_measure(s);
    o.require(std::abs(v - 0.5L) <= kHalfIntegral, "trivalent star measure " + std::to_string(static_cast<double>(v)));
  }
  std::mt19937_64 rng(77);
  for (int i = 0; i < 10; ++i) {
    const std::size_t dim = 1 + static_cast<std::size_t>(i % 2);
    const std::size_t valency = 3 + static_cast<std::size_t>(i % 3);
    const VertexStar s = random_star(rng, dim, valency);
    const long double twice = 2 * vertex_measure(s);
    o.require(std::abs(twice - std::round(twice)) <= kHalfIntegral, "random star measure " + std::to_string(static_cast<double>(twice / 2)));
  }
  if (o.pass) o.detail << "3 trivalent stars at 1/2, 10 random stars half-integral";
}

void walls(Outcome& o) {
  const QuadratureConfig cfg;
  std::mt19937_64 rng(5);
  const Complex ts[2] = {std::polar(0.02L, 1.0L), std::polar(0.05L, 4.0L)};
  const long double rs[2] = {0.9L, 0.6L};
  long double worst = 0;
  std::size_t checked = 0;
  for (int i = 0; i < 12; ++i) {
    const std::size_t rank = 1 + static_cast<std::size_t>(i % 2);
    const int order = 2 + i % 3;
    const ExactSeries f = random_normalized_slab(rng, rank, order);
    if (!check_normalized(f, order)) {
      o.require(false, "generator produced an unnormalized slab");
      continue;
    }
    const FloatSeries tilde = to_float(f) - FloatSeries::constant(rank, order, Complex(1));
    for (const auto& t : ts)
      for (long double r : rs) {
        const std::vector<long double> radii(rank, r);
        worst = std::max(worst, std::abs(wall_integral(tilde, radii, t, cfg)));
        ++checked;
      }
  }
  o.require(worst < kWallVanishing, "normalized wall integral " + std::to_string(static_cast<double>(worst)));
  const long double r1[1] = {0.8L};
  const auto pure = FloatSeries::monomial(1, 3, IntVector{0}, 1, Complex(0.3L));
  const long double control = std::abs(wall_integral(pure, r1, Complex(0.5L), cfg));
  o.require(control > kWallControl, "pure-t control only " + std::to_string(static_cast<double>(control)));
  if (o.pass) o.detail << checked << " samples, max " << static_cast<double>(worst) << "; control " << static_cast<double>(control);
}

void appendix_homology(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& name : {"circle", "interval", "torus", "focus_focus"}) {
    const std::string tag = std::string(name) + ": ";
    const TropicalManifold m(fixture(name).input);
    std::optional<ChainComplex> base;
    for (int level : {0, 1}) {
      const Level lvl(m, level);
      auto c = simplicial_chain_complex(lvl.complex(), boundary_subcomplex(lvl.complex()), build_pushforward(lvl));
      o.require(c.squares_to_zero(), tag + "d^2 != 0 at level " + std::to_string(level));
      if (!base) base = std::move(c);
      else o.require(barycentric_comparison(*base, c).isomorphic, tag + "barycentric ranks differ");
    }
    const auto f = build_pushforward(Level(m, 0));
    o.require(concentration_holds(cech_complex(ConstructibleSheaf::constant(m.complex(), 1)), m.complex()), tag + "graded concentration");
    const auto pl = poincare_lefschetz_check(f);
    o.require(pl.comparison.chain_identity, tag + "chain-map identity");
    const auto n = static_cast<std::size_t>(m.rank());
    o.require(pl.chains[1].rank == pl.cech[n - 1].rank, tag + "rank H_1 != rank H^{n-1}");
    o.require(pl.ok, tag + "duality");
  }
  const double s = seconds_since(t0);
  o.require(s < kHomologyBudget, "took " + std::to_string(s) + " s");
  if (o.pass) o.detail << "4 fixtures in " << s << " s";
}

void generation(Outcome& o) {
  for (const auto& name : {"torus", "focus_focus"}) {
    const auto mf = fixture(name);
    const TropicalManifold m(mf.input);
    const CycleHomology h(m);
    std::vector<TropicalOneCycle> skeleton;
    for (const auto& [n, w] : mf.skeleton_weights) skeleton.push_back(from_skeleton_weights(m, w, n));
    const auto g = generation_check(h, skeleton);
    const std::string tag = std::string(name) + " rank " + std::to_string(g.achieved) + " of " + std::to_string(g.target);
    o.require(g.generates && g.achieved == h.basis.rank(), tag);
    if (g.generates) o.detail << (o.detail.tellp() ? "; " : "") << tag;
  }
}

void assembly(Outcome& o) {
  std::size_t cycles = 0;
  for (const auto& name : {"tate_k2", "interval", "circle", "torus", "focus_focus"}) {
    const auto mf = fixture(name);
    const TropicalManifold m(mf.input);
    const auto data = period_data(m, mf);
    for (const auto& c : closed_cycles(m, mf)) {
      ++cycles;
      const std::string tag = std::string(name) + "/" + c.name;
      const auto h = compute_period(m, c, data);
      std::optional<LogTValue> first;
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto a = assemble_integral(m, c, data, random_radii(m, c, seed));
        o.require(a.radii_cancel, tag + " radius terms survive");
        o.require(same_period(a.exponentiated, h, kExactPeriod), tag + " assembly " + a.exponentiated.str() + " vs " + h.str());
        if (!first) first = a.value;
        o.require(a.value == *first, tag + " depends on the radii");
      }
    }
  }
  if (o.pass) o.detail << cycles << " closed cycles x 10 radius draws";
}

void invariances(Outcome& o) {
  std::size_t checks = 0;
  auto same = [&](const PeriodProduct& a, const PeriodProduct& b, const std::string& what) {
    ++checks;
    o.require(same_period(a, b, kExactPeriod), what + ": " + a.str() + " vs " + b.str());
  };
  for (const auto& name : {"tate_k2", "circle", "torus", "focus_focus"}) {
    const auto mf = fixture(name);
    const TropicalManifold m(mf.input);
    const auto data = period_data(m, mf);
    for (const auto& [n, w] : mf.skeleton_weights) {
      if (touches_boundary(m, from_skeleton_weights(m, w, n))) continue;
      std::set<CellId> all;
      for (const auto& [omega, a] : w) all.insert(omega);
      same(compute_period(m, from_skeleton_weights(m, w, n), data), compute_period(m, from_skeleton_weights(m, w, n, all), data),
           std::string(name) + "/" + n + " vertex choice");
    }
    const auto cs = closed_cycles(m, mf);
    for (const auto& c : cs) {
      const std::string tag = std::string(name) + "/" + c.name;
      const auto h = compute_period(m, c, data);
      same(compute_period(m, reversed(m, c), data), inverse(h), tag + " reversal");
      same(compute_period(m, scaled(c, Int(2)), data), h * h, tag + " doubling");
      for (const auto& d : cs) same(compute_period(m, disjoint_union(c, d), data), h * compute_period(m, d, data), tag + " union " + d.name);
    }
  }
  if (o.pass) o.detail << checks << " exact identities";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"Tate canonical coordinate is t^k", tate_exact},
      {"quadrature matches t^k", tate_numeric},
      {"alpha integrates to (2 pi i)^n", alpha},
      {"subtorus degrees", degrees},
      {"vertex add-in measures", vertex_measures},
      {"normalized walls integrate to zero", walls},
      {"twisted homology and duality", appendix_homology},
      {"skeleton cycles generate H_1", generation},
      {"assembly matches the product formula", assembly},
      {"period invariances", invariances},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s  %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
