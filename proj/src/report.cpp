#include "tropper/report.hpp"

#include "tropper/cech.hpp"

#include <iomanip>
#include <sstream>

namespace tropper {

void Report::note(std::string text) { human_.push_back(std::move(text)); }

void Report::value(std::string key, std::string v) { machine_.emplace_back(std::move(key), std::move(v)); }

void Report::check(const std::string& key, bool ok, const std::string& detail) {
  value(key, ok ? "pass" : "fail");
  if (!ok) {
    ++failures_;
    human_.push_back("FAIL " + key + (detail.empty() ? "" : ": " + detail));
  }
}

void Report::error(const std::string& module, const std::string& message) {
  value(module + ".error", message);
  ++failures_;
  human_.push_back("ERROR " + module + ": " + message);
}

void Report::append(const Report& other) {
  human_.insert(human_.end(), other.human_.begin(), other.human_.end());
  machine_.insert(machine_.end(), other.machine_.begin(), other.machine_.end());
  failures_ += other.failures_;
}

std::string Report::human() const {
  std::string s;
  for (const auto& l : human_) s += l + "\n";
  s += failures_ == 0 ? "all checks passed\n" : std::to_string(failures_) + " check(s) failed\n";
  return s;
}

std::string Report::machine() const {
  std::string s;
  for (const auto& [k, v] : machine_) s += k + "=" + v + "\n";
  s += "failures=" + std::to_string(failures_) + "\n";
  return s;
}

std::string fixed(long double x, int digits) {
  std::ostringstream os;
  if (std::abs(x) < 0.5L * std::pow(10.0L, -digits)) x = 0;  // no "-0.000…"
  os << std::fixed << std::setprecision(digits) << static_cast<double>(x);
  return os.str();
}

std::string fixed(Complex z, int digits) { return "(" + fixed(z.real(), digits) + "," + fixed(z.imag(), digits) + ")"; }

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"validate", "homology", "period", "verify", "generate", "all"};
  return names;
}

bool needs_manifest(const std::string& command) { return command != "verify"; }

namespace {

std::string group_str(const HomologyGroup& g) { return g.str(); }

std::string ranks_str(const HomologyResult& h) {
  std::string s;
  for (std::size_t i = 0; i < h.groups.size(); ++i) s += (i ? "," : "") + std::to_string(h.groups[i].rank);
  return s;
}

template <class F>
void guarded(Report& r, const std::string& module, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    r.error(module, e.what());
  }
}

// Cycles named in the manifest: explicit ones, then one per skeleton weight.
std::vector<TropicalOneCycle> all_cycles(const TropicalManifold& m, const Manifest& mf) {
  auto out = explicit_cycles(m, mf);
  for (const auto& [name, w] : mf.skeleton_weights) out.push_back(from_skeleton_weights(m, w, name));
  return out;
}

int slab_order(const SlabDecl& s, const RunOptions& opt) { return opt.order ? std::min(*opt.order, s.order) : s.order; }

}  // namespace

Report run_validate(const Manifest& mf, const RunOptions& opt) {
  Report r;
  r.note("validate " + mf.name);
  const PolyComplex& p = mf.input.complex;
  r.value("complex.dim", std::to_string(p.dim()));
  for (int d = 0; d <= p.dim(); ++d) r.value("complex.cells." + std::to_string(d), std::to_string(p.cells_of_dim(d).size()));
  r.value("complex.euler", std::to_string(p.euler_characteristic()));
  r.check("complex.valid", validate(p.cells()).ok(), validate(p.cells()).summary());
  guarded(r, "affine", [&] {
    const TropicalManifold m(mf.input);
    r.value("affine.pieces", std::to_string(m.pieces().size()));
    r.value("affine.discriminant", std::to_string(m.discriminant().size()));
    for (std::size_t i = 0; i < m.discriminant().size(); ++i)
      r.value("affine.discriminant." + std::to_string(i) + ".monodromy", m.discriminant()[i].monodromy.str());
    r.check("affine.kinks_consistent", kink_consistency(m));
    if (m.rank() >= 2)
      for (auto v : p.cells_of_dim(0)) {
        if (!p.is_interior(v)) continue;
        guarded(r, "affine.local_pl." + cell_name(p, v), [&] { local_pl_representative(m, v); });
      }
    for (const auto& s : mf.slabs) {
      const std::string key = "slab." + cell_name(p, s.facet);
      const int k = slab_order(s, opt);
      const bool ok = s.exact_terms ? check_normalized(ExactSeries::constant(s.lattice_rank, s.order, Rational(1)) + *s.exact_terms, k)
                                    : check_normalized(FloatSeries::constant(s.lattice_rank, s.order, Complex(1)) + s.terms, k, opt.tolerance);
      r.check(key + ".normalized", ok);
    }
    for (const auto& c : explicit_cycles(m, mf)) {
      guarded(r, "cycle." + c.name, [&] {
        validate_cycle(m, c);
        r.check("cycle." + c.name + ".balanced", check_balancing(m, c));
      });
    }
    for (const auto& [name, w] : mf.skeleton_weights)
      guarded(r, "skeleton." + name, [&] {
        const auto bad = weight_imbalance(m, w);
        std::string where;
        for (auto v : bad) where += (where.empty() ? "" : ",") + cell_name(p, v);
        r.check("skeleton." + name + ".balanced", bad.empty(), "imbalance at " + where);
        validate_cycle(m, from_skeleton_weights(m, w, name));
      });
  });
  return r;
}

Report run_homology(const Manifest& mf, const RunOptions&) {
  Report r;
  r.note("homology " + mf.name);
  guarded(r, "homology", [&] {
    const TropicalManifold m(mf.input);
    const int n = m.rank();
    std::vector<ChainComplex> levels;
    for (int lv = 0; lv <= 1; ++lv) {
      const Level L(m, lv);
      const auto F = build_pushforward(L);
      auto C = simplicial_chain_complex(L.complex(), boundary_subcomplex(L.complex()), F);
      const std::string key = "homology.level" + std::to_string(lv);
      r.check(key + ".d_squared_zero", C.squares_to_zero());
      const auto H = homology(C);
      for (std::size_t i = 0; i < H.groups.size(); ++i) r.value(key + ".H" + std::to_string(i), group_str(H[i]));
      r.note("  level " + std::to_string(lv) + " ranks of H_i(B,dB;i_*L): " + ranks_str(H));
      levels.push_back(std::move(C));
    }
    const auto cmp = barycentric_comparison(levels[0], levels[1]);
    r.check("homology.barycentric_invariance", cmp.isomorphic);

    if (m.complex().has_self_incidence()) {
      r.value("cech.status", "skipped: a maximal cell is glued to itself");
      r.note("  Cech comparison skipped: a maximal cell is glued to itself");
      return;
    }
    const Level L0(m, 0);
    const auto F0 = build_pushforward(L0);
    const auto pl = poincare_lefschetz_check(F0);
    for (std::size_t j = 0; j < pl.cech.groups.size() && j <= static_cast<std::size_t>(n); ++j)
      r.value("cech.H" + std::to_string(j), group_str(pl.cech[j]));
    std::vector<std::string> failures;
    const bool conc = concentration_holds(cech_complex(ConstructibleSheaf::constant(L0.complex(), 1)), L0.complex(), &failures);
    std::string where;
    for (const auto& f : failures) where += f + "; ";
    r.check("cech.graded_concentration", conc, where);
    r.check("cech.termwise_iso", pl.comparison.termwise_iso, pl.comparison.detail);
    r.check("cech.chain_identity", pl.comparison.chain_identity, pl.comparison.detail);
    for (int i = 0; i <= n; ++i) {
      const auto j = static_cast<std::size_t>(n - i);
      const bool eq = j < pl.cech.groups.size() && pl.chains[static_cast<std::size_t>(i)].rank == pl.cech[j].rank;
      r.check("duality.rank_H" + std::to_string(i), eq);
    }
    r.note("  Cech ranks of H^j(B;i_*L): " + ranks_str(pl.cech));
    r.check("duality.poincare_lefschetz", pl.ok);
  });
  return r;
}

Report run_period(const Manifest& mf, const RunOptions& opt) {
  Report r;
  r.note("period " + mf.name);
  guarded(r, "period", [&] {
    const TropicalManifold m(mf.input);
    const PeriodData data = period_data(m, mf);
    for (const auto& c : all_cycles(m, mf)) {
      const std::string key = "period." + c.name;
      if (touches_boundary(m, c)) {
        r.value(key, "open");
        r.note("  " + c.name + ": meets the boundary, no period");
        continue;
      }
      guarded(r, key, [&] {
        const auto h = compute_period(m, c, data);
        r.value(key + ".sign", std::to_string(h.sign));
        r.value(key + ".constant", fixed(h.constant));
        r.value(key + ".t_exponent", h.t_exponent.str());
        r.check(key + ".even_valency", !h.odd_valency);
        r.note("  h_" + c.name + " = " + h.str());
        r.note("    edge step piece side pairing kink s_p");
        for (std::size_t i = 0; i < h.breakdown.size(); ++i) {
          const auto& f = h.breakdown[i];
          const auto& x = f.crossing;
          const std::string ck = key + ".crossing" + std::to_string(i);
          r.value(ck, "edge=" + std::to_string(x.edge) + " step=" + std::to_string(x.step) + " piece=" + std::to_string(x.piece) +
                          " from_side=" + std::to_string(x.from_side) + " pairing=" + x.pairing.str() + " kink=" + x.kink.str() +
                          " s_p=" + fixed(f.s_p));
          r.note("    " + std::to_string(x.edge) + " " + std::to_string(x.step) + " " + std::to_string(x.piece) + " " +
                 std::to_string(x.from_side) + " " + x.pairing.str() + " " + x.kink.str() + " " + fixed(f.s_p, 6));
        }
        const auto radii = random_radii(m, c, opt.seed);
        const auto a = assemble_integral(m, c, data, radii);
        r.check(key + ".assembly_radii_cancel", a.radii_cancel, a.value.str());
        if (a.radii_cancel)
          r.check(key + ".assembly_matches", same_period(a.exponentiated, h, 1e-12L), a.exponentiated.str() + " vs " + h.str());
      });
    }
  });
  return r;
}

Report run_generate(const Manifest& mf, const RunOptions&) {
  Report r;
  r.note("generate " + mf.name);
  guarded(r, "generate", [&] {
    const TropicalManifold m(mf.input);
    std::vector<TropicalOneCycle> cycles;
    for (const auto& [name, w] : mf.skeleton_weights) cycles.push_back(from_skeleton_weights(m, w, name));
    const CycleHomology h(m);
    const auto g = generation_check(h, cycles);
    for (std::size_t i = 0; i < cycles.size(); ++i) {
      std::string cls;
      for (std::size_t j = 0; j < g.classes[i].size(); ++j) cls += (j ? "," : "") + g.classes[i][j].str();
      r.value("generate." + cycles[i].name + ".class", "(" + cls + ")");
      r.note("  " + cycles[i].name + ": class (" + cls + ")");
    }
    r.value("generate.achieved", std::to_string(g.achieved));
    r.value("generate.target", std::to_string(g.target));
    r.note("  skeleton-weight cycles span rank " + std::to_string(g.achieved) + " of " + std::to_string(g.target));
    r.check("generate.spans", g.generates);
  });
  return r;
}

Report run_verify(const RunOptions& opt) {
  Report r;
  r.note("verify");
  guarded(r, "oracle", [&] {
    QuadratureConfig cfg;
    cfg.samples = opt.samples;
    r.note("  quantity | closed form | numeric | error | verdict");
    std::size_t i = 0;
    for (const auto& row : verification_suite(cfg, opt.seed)) {
      const std::string key = "verify." + std::to_string(i++);
      r.value(key + ".quantity", row.quantity);
      r.value(key + ".closed", fixed(row.closed_form));
      r.value(key + ".numeric", fixed(row.numeric));
      r.check(key, row.pass, row.quantity);
      std::ostringstream err;
      err << std::scientific << std::setprecision(2) << static_cast<double>(row.error);
      r.note("  " + row.quantity + " | " + fixed(row.closed_form, 9) + " | " + fixed(row.numeric, 9) + " | " + err.str() + " | " +
             (row.pass ? "pass" : "FAIL"));
    }
  });
  return r;
}

Report run(const std::string& command, const Manifest* mf, const RunOptions& opt) {
  if (needs_manifest(command) && !mf) throw std::invalid_argument(command + " needs a manifest");
  if (command == "validate") return run_validate(*mf, opt);
  if (command == "homology") return run_homology(*mf, opt);
  if (command == "period") return run_period(*mf, opt);
  if (command == "generate") return run_generate(*mf, opt);
  if (command == "verify") return run_verify(opt);
  if (command == "all") {
    Report r = run_validate(*mf, opt);
    r.append(run_homology(*mf, opt));
    r.append(run_period(*mf, opt));
    r.append(run_generate(*mf, opt));
    r.append(run_verify(opt));
    return r;
  }
  throw std::invalid_argument("unknown command " + command);
}

}  // namespace tropper
