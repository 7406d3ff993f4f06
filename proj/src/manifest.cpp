#include "tropper/manifest.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace tropper {

using nlohmann::json;

std::string to_string(ManifestIssue k) {
  switch (k) {
    case ManifestIssue::Syntax: return "Syntax";
    case ManifestIssue::DanglingId: return "DanglingId";
    case ManifestIssue::DimensionMismatch: return "DimensionMismatch";
    case ManifestIssue::Schema: return "Schema";
  }
  return "?";
}

ManifestError::ManifestError(ManifestIssue k, int l, const std::string& source, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(l) + ": " + to_string(k) + ": " + msg), kind(k), line(l) {}

namespace {

// Input iterator that tracks the line of the last non-blank character read.
struct LineCounter {
  int line = 1;
  int token_line = 1;
};

struct CountingIterator {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  LineCounter* counter = nullptr;

  reference operator*() const { return *p; }
  CountingIterator& operator++() {
    const char c = *p++;
    if (c == '\n') ++counter->line;
    else if (c != ' ' && c != '\t' && c != '\r') counter->token_line = counter->line;
    return *this;
  }
  CountingIterator operator++(int) {
    CountingIterator old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.p == b.p; }
};

// Builds the DOM and records the line of every value by JSON pointer.
class LineSax {
 public:
  LineSax(json& root, LineCounter& c) : dom_(root, false), counter_(c) {}

  bool null() { return scalar() && dom_.null(); }
  bool boolean(bool v) { return scalar() && dom_.boolean(v); }
  bool number_integer(json::number_integer_t v) { return scalar() && dom_.number_integer(v); }
  bool number_unsigned(json::number_unsigned_t v) { return scalar() && dom_.number_unsigned(v); }
  bool number_float(json::number_float_t v, const std::string& s) { return scalar() && dom_.number_float(v, s); }
  bool string(std::string& v) { return scalar() && dom_.string(v); }
  bool binary(json::binary_t& v) { return scalar() && dom_.binary(v); }
  bool start_object(std::size_t n) {
    open(false);
    return dom_.start_object(n);
  }
  bool key(std::string& k) {
    frames_.back().key = k;
    return dom_.key(k);
  }
  bool end_object() {
    close();
    return dom_.end_object();
  }
  bool start_array(std::size_t n) {
    open(true);
    return dom_.start_array(n);
  }
  bool end_array() {
    close();
    return dom_.end_array();
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
    error_ = ex.what();
    error_line_ = counter_.line;
    return false;
  }

  std::map<std::string, int> lines;
  std::optional<std::string> error_;
  int error_line_ = 0;

 private:
  struct Frame {
    bool array;
    std::string pointer;
    std::size_t index = 0;
    std::string key;
  };
  static std::string escape(const std::string& k) {
    std::string out;
    for (char c : k) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }
  std::string child_pointer() const {
    if (frames_.empty()) return "";
    const auto& f = frames_.back();
    return f.pointer + "/" + (f.array ? std::to_string(f.index) : escape(f.key));
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }
  bool scalar() {
    lines[child_pointer()] = counter_.token_line;
    advance();
    return true;
  }
  void open(bool array) {
    const std::string ptr = child_pointer();
    lines[ptr] = counter_.token_line;
    frames_.push_back({array, ptr, 0, {}});
  }
  void close() {
    frames_.pop_back();
    advance();
  }

  nlohmann::detail::json_sax_dom_parser<json> dom_;
  LineCounter& counter_;
  std::vector<Frame> frames_;
};

struct Doc {
  json root;
  std::map<std::string, int> lines;
  std::string source;
  std::size_t cell_count = 0;
};

// A value together with its JSON pointer for error reporting.
class Node {
 public:
  Node(const Doc& d, const json& j, std::string ptr) : d_(&d), j_(&j), ptr_(std::move(ptr)) {}
  const json& j() const { return *j_; }
  int line() const {
    auto it = d_->lines.find(ptr_);
    return it == d_->lines.end() ? 0 : it->second;
  }
  [[noreturn]] void fail(ManifestIssue k, const std::string& msg) const { throw ManifestError(k, line(), d_->source, msg); }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key) && !(*j_)[key].is_null(); }
  Node operator[](const std::string& key) const {
    if (!j_->is_object()) fail(ManifestIssue::Schema, "expected an object at " + where());
    if (!j_->contains(key)) fail(ManifestIssue::Schema, "missing key '" + key + "' at " + where());
    return Node(*d_, (*j_)[key], ptr_ + "/" + key);
  }
  std::size_t size() const {
    if (!j_->is_array()) fail(ManifestIssue::Schema, "expected an array at " + where());
    return j_->size();
  }
  Node at(std::size_t i) const { return Node(*d_, (*j_)[i], ptr_ + "/" + std::to_string(i)); }
  std::vector<Node> items() const {
    std::vector<Node> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i));
    return out;
  }
  std::vector<Node> items_or_empty(const std::string& key) const {
    if (!has(key)) return {};
    return (*this)[key].items();
  }

  long long integer() const {
    if (!j_->is_number_integer()) fail(ManifestIssue::Schema, "expected an integer at " + where());
    return j_->get<long long>();
  }
  std::string text() const {
    if (!j_->is_string()) fail(ManifestIssue::Schema, "expected a string at " + where());
    return j_->get<std::string>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail(ManifestIssue::Schema, "expected a boolean at " + where());
    return j_->get<bool>();
  }
  CellId cell() const {
    const long long v = integer();
    if (v < 0 || static_cast<std::size_t>(v) >= d_->cell_count)
      fail(ManifestIssue::DanglingId, "cell id " + std::to_string(v) + " at " + where() + " does not exist");
    return CellId{static_cast<std::uint32_t>(v)};
  }
  std::optional<Rational> rational() const {
    if (j_->is_number_integer()) return Rational(j_->get<long long>());
    if (j_->is_string()) {
      try {
        return Rational(j_->get<std::string>());
      } catch (const std::exception&) {
        fail(ManifestIssue::Schema, "malformed rational at " + where());
      }
    }
    return std::nullopt;
  }
  Rational exact() const {
    auto r = rational();
    if (!r) fail(ManifestIssue::Schema, "expected an integer or a rational string at " + where());
    return *r;
  }
  long double real() const {
    if (j_->is_number()) return j_->get<long double>();
    if (auto r = rational()) return static_cast<long double>(*r);
    fail(ManifestIssue::Schema, "expected a number at " + where());
  }
  Complex complex() const {
    if (j_->is_array()) {
      if (j_->size() != 2) fail(ManifestIssue::Schema, "complex numbers are [re, im] at " + where());
      return {at(0).real(), at(1).real()};
    }
    return {real(), 0};
  }
  // Exact when the value is a real rational.
  std::optional<Rational> exact_complex() const {
    if (j_->is_array()) {
      if (j_->size() != 2) return std::nullopt;
      auto re = at(0).rational(), im = at(1).rational();
      if (re && im && *im == 0) return re;
      return std::nullopt;
    }
    return rational();
  }
  std::vector<CellId> cells() const {
    std::vector<CellId> out;
    for (const auto& x : items()) out.push_back(x.cell());
    return out;
  }
  IntVector int_vector() const {
    IntVector v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = at(i).integer();
    return v;
  }
  IntMatrix int_matrix() const {
    const std::size_t r = size();
    if (r == 0) fail(ManifestIssue::Schema, "empty matrix at " + where());
    const std::size_t c = at(0).size();
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (at(i).size() != c) fail(ManifestIssue::Schema, "ragged matrix at " + where());
      for (std::size_t k = 0; k < c; ++k) m(i, k) = at(i).at(k).integer();
    }
    return m;
  }
  std::string where() const { return ptr_.empty() ? "/" : ptr_; }

 private:
  const Doc* d_;
  const json* j_;
  std::string ptr_;
};

Doc read_doc(std::string_view text, const std::string& source) {
  Doc d;
  d.source = source;
  LineCounter counter;
  LineSax sax(d.root, counter);
  CountingIterator first{text.data(), &counter}, last{text.data() + text.size(), &counter};
  const bool ok = json::sax_parse(first, last, &sax);
  if (!ok || sax.error_) throw ManifestError(ManifestIssue::Syntax, sax.error_line_, source, sax.error_.value_or("malformed JSON"));
  d.lines = std::move(sax.lines);
  return d;
}

std::vector<Cell> read_cells(Doc& d) {
  const Node root(d, d.root, "");
  const Node cells = root["cells"];
  d.cell_count = cells.size();
  std::vector<Cell> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Node c = cells.at(i);
    if (c.has("id") && c["id"].integer() != static_cast<long long>(i))
      c["id"].fail(ManifestIssue::Schema, "cell ids must be consecutive from 0; expected " + std::to_string(i));
    Cell cell;
    cell.id = CellId{static_cast<std::uint32_t>(i)};
    cell.dim = static_cast<int>(c["dim"].integer());
    if (c.has("label")) cell.label = c["label"].text();
    if (c.has("orientation")) cell.orientation = static_cast<int>(c["orientation"].integer());
    out.push_back(std::move(cell));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (const auto& f : cells.at(i).items_or_empty("facets")) {
      if (f.size() != 2) f.fail(ManifestIssue::Schema, "facet entries are [id, sign]");
      const CellId t = f.at(0).cell();
      const int sign = static_cast<int>(f.at(1).integer());
      if (sign != 1 && sign != -1) f.at(1).fail(ManifestIssue::Schema, "incidence sign must be +1 or -1");
      if (out[t.value].dim != out[i].dim - 1)
        f.fail(ManifestIssue::DimensionMismatch,
               "facet " + std::to_string(t.value) + " of cell " + std::to_string(i) + " has dimension " + std::to_string(out[t.value].dim));
      out[i].facets.push_back({t, sign});
    }
  }
  return out;
}

}  // namespace

Manifest parse_manifest(std::string_view text, const std::string& source) {
  Doc d = read_doc(text, source);
  if (!d.root.is_object()) throw ManifestError(ManifestIssue::Schema, 1, source, "manifest must be a JSON object");
  Manifest mf;
  mf.source = source;
  auto cells = read_cells(d);
  const Node root(d, d.root, "");
  if (root.has("name")) mf.name = root["name"].text();
  if (root.has("description")) mf.description = root["description"].text();

  int top = 0;
  for (const auto& c : cells) top = std::max(top, c.dim);

  ManifoldInput& in = mf.input;
  for (const auto& ch : root.items_or_empty("charts")) {
    ChartDecl c{ch["cell"].cell(), {}};
    for (const auto& pt : ch["corners"].items()) {
      RatPoint p;
      for (const auto& x : pt.items()) p.push_back(x.exact());
      if (static_cast<int>(p.size()) != top) pt.fail(ManifestIssue::DimensionMismatch, "chart point of wrong dimension");
      c.corners.push_back(std::move(p));
    }
    in.charts.push_back(std::move(c));
  }
  for (const auto& t : root.items_or_empty("transports")) {
    TransportDecl td{t["facet"].cell(), t["from"].cell(), std::nullopt, t["matrix"].int_matrix(), {}};
    if (t.has("from_slot")) td.from_slot = static_cast<std::size_t>(t["from_slot"].integer());
    if (t.has("corners")) td.corners = t["corners"].cells();
    if (td.matrix.rows() != static_cast<std::size_t>(top) || !td.matrix.is_square())
      t["matrix"].fail(ManifestIssue::DimensionMismatch, "transport must be " + std::to_string(top) + "x" + std::to_string(top));
    in.transports.push_back(std::move(td));
  }
  for (const auto& x : root.items_or_empty("discriminant")) {
    DiscriminantDecl dd{x["edge"].cell(), x["reference"].cell(), std::nullopt};
    if (x.has("monodromy")) dd.monodromy = x["monodromy"].int_matrix();
    in.discriminant.push_back(std::move(dd));
  }
  for (const auto& k : root.items_or_empty("kinks")) {
    KinkDecl kd{k["facet"].cell(), k["kink"].integer(), {}};
    if (k.has("corners")) kd.corners = k["corners"].cells();
    in.kinks.push_back(std::move(kd));
  }
  if (root.has("single_parameter")) in.single_parameter = root["single_parameter"].boolean();

  for (const auto& g : root.items_or_empty("gluing")) {
    GluingDecl gd{g["facet"].cell(), static_cast<int>(g["side"].integer()), {}, {}};
    if (gd.side != 0 && gd.side != 1) g["side"].fail(ManifestIssue::Schema, "side must be 0 or 1");
    for (const auto& v : g["values"].items()) gd.values.push_back(v.complex());
    if (static_cast<int>(gd.values.size()) != top) g["values"].fail(ManifestIssue::DimensionMismatch, "gluing needs one value per frame vector");
    if (g.has("corners")) gd.corners = g["corners"].cells();
    mf.gluing.push_back(std::move(gd));
  }
  for (const auto& s : root.items_or_empty("slabs")) {
    SlabDecl sd;
    sd.facet = s["facet"].cell();
    sd.constant = s["constant"].complex();
    if (sd.constant == Complex(0)) s["constant"].fail(ManifestIssue::Schema, "slab constant must be nonzero");
    const auto exact_a = s["constant"].exact_complex();
    sd.exact_constant = exact_a.has_value();
    sd.order = static_cast<int>(s["order"].integer());
    sd.lattice_rank = s.has("lattice_rank") ? static_cast<std::size_t>(s["lattice_rank"].integer()) : static_cast<std::size_t>(top - 1);
    sd.terms = FloatSeries(sd.lattice_rank, sd.order);
    ExactSeries exact(sd.lattice_rank, sd.order);
    bool all_exact = true;
    for (const auto& t : s.items_or_empty("terms")) {
      const IntVector m = t["m"].int_vector();
      if (m.size() != sd.lattice_rank) t["m"].fail(ManifestIssue::DimensionMismatch, "slab monomial of wrong rank");
      const int e = static_cast<int>(t["e"].integer());
      if (e < 0) t["e"].fail(ManifestIssue::Schema, "negative t-exponent");
      if (e == 0 && m.is_zero()) t.fail(ManifestIssue::Schema, "the constant term belongs in 'constant'");
      sd.terms.add(m, e, t["c"].complex());
      if (auto q = t["c"].exact_complex()) exact.add(m, e, *q);
      else all_exact = false;
    }
    if (all_exact) sd.exact_terms = exact;
    if (s.has("corners")) sd.corners = s["corners"].cells();
    mf.slabs.push_back(std::move(sd));
  }
  for (const auto& c : root.items_or_empty("cycles")) {
    CycleDecl cd;
    cd.name = c["name"].text();
    for (const auto& v : c["vertices"].items()) {
      const CellId cell = v["cell"].cell();
      const CellId anchor = v.has("anchor") ? v["anchor"].cell() : cell;
      const int occ = v.has("occurrence") ? static_cast<int>(v["occurrence"].integer()) : 0;
      cd.vertices.push_back({cell, {anchor, occ}});
    }
    for (const auto& e : c["edges"].items()) {
      CycleEdgeDecl ed;
      const long long src = e["source"].integer(), tgt = e["target"].integer();
      if (src < 0 || tgt < 0 || static_cast<std::size_t>(std::max(src, tgt)) >= cd.vertices.size())
        e.fail(ManifestIssue::DanglingId, "edge names a missing cycle vertex");
      ed.source = static_cast<std::size_t>(src);
      ed.target = static_cast<std::size_t>(tgt);
      ed.xi = e["xi"].int_vector();
      if (static_cast<int>(ed.xi.size()) != top) e["xi"].fail(ManifestIssue::DimensionMismatch, "section of wrong rank");
      for (const auto& st : e.items_or_empty("route")) {
        RouteDecl r{st["facet"].cell(), std::nullopt, static_cast<int>(st["from_side"].integer())};
        if (st.has("corner")) r.corner = st["corner"].cell();
        ed.route.push_back(r);
      }
      cd.edges.push_back(std::move(ed));
    }
    mf.cycles.push_back(std::move(cd));
  }
  for (const auto& w : root.items_or_empty("skeleton_weights")) {
    SkeletonWeights a;
    for (const auto& x : w["weights"].items()) a[x["edge"].cell()] += x["a"].integer();
    mf.skeleton_weights.emplace_back(w["name"].text(), std::move(a));
  }

  in.complex = PolyComplex(std::move(cells));
  return mf;
}

Manifest load_manifest(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_manifest(ss.str(), path.string());
}

std::vector<std::size_t> select_pieces(const TropicalManifold& m, CellId facet, const std::vector<CellId>& corners) {
  std::vector<std::size_t> out;
  for (auto i : m.pieces_of(facet))
    if (corners.empty() || std::find(corners.begin(), corners.end(), m.pieces()[i].corner) != corners.end()) out.push_back(i);
  if (out.empty()) throw std::runtime_error("no piece of facet " + std::to_string(facet.value) + " matches the corner list");
  return out;
}

PeriodData period_data(const TropicalManifold& m, const Manifest& mf) {
  PeriodData d{GluingData(m.rank()), {}};
  for (const auto& g : mf.gluing)
    for (auto p : select_pieces(m, g.facet, g.corners)) d.gluing.set(p, g.side, g.values);
  for (const auto& s : mf.slabs)
    for (auto p : select_pieces(m, s.facet, s.corners)) {
      SlabFunction f{p, s.constant, std::nullopt, s.terms};
      if (s.exact_terms && s.exact_constant) f.exact = s.exact_terms;
      d.slabs[p] = std::move(f);
    }
  return d;
}

TropicalOneCycle resolve_cycle(const TropicalManifold& m, const CycleDecl& d) {
  TropicalOneCycle c;
  c.name = d.name;
  c.vertices = d.vertices;
  for (const auto& e : d.edges) {
    CycleEdge ce{e.source, e.target, e.xi, {}};
    for (const auto& r : e.route) {
      std::vector<CellId> corner;
      if (r.corner) corner.push_back(*r.corner);
      const auto ps = select_pieces(m, r.facet, corner);
      if (ps.size() != 1) throw CycleError("route step across facet " + std::to_string(r.facet.value) + " needs a corner");
      ce.route.push_back({ps.front(), r.from_side});
    }
    c.edges.push_back(std::move(ce));
  }
  validate_cycle(m, c);
  return c;
}

std::vector<TropicalOneCycle> explicit_cycles(const TropicalManifold& m, const Manifest& mf) {
  std::vector<TropicalOneCycle> out;
  for (const auto& d : mf.cycles) out.push_back(resolve_cycle(m, d));
  return out;
}

}  // namespace tropper
