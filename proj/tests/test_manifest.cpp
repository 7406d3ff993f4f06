#include "support.hpp"
#include "tropper/report.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

using namespace tropper;
using namespace testing;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tate_text() { return read_text(std::string(FIXTURE_DIR) + "/tate_k2.json"); }

int line_of(const std::string& text, std::size_t pos) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

// Replaces the first occurrence of `from`; returns the line it sat on.
int replace_once(std::string& text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return line_of(text, pos);
}

ManifestError expect_error(const std::string& text) {
  try {
    parse_manifest(text, "test.json");
  } catch (const ManifestError& e) {
    return e;
  }
  FAIL("manifest parsed without error");
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("the Tate fixture parses") {
  const auto mf = parse_manifest(tate_text(), "tate_k2.json");
  CHECK(mf.name == "tate_k2");
  CHECK(mf.input.complex.cells().size() == 2);
  CHECK(mf.cycles.size() == 1);
  CHECK(mf.skeleton_weights.size() == 1);
  const TropicalManifold m(mf.input);
  CHECK(m.rank() == 1);
  REQUIRE(m.pieces().size() == 1);
  CHECK(m.kink(0) == 2);
  CHECK(m.discriminant().empty());
  const auto data = period_data(m, mf);
  CHECK(data.slab_constant(0) == Complex(1));
  CHECK(explicit_cycles(m, mf).size() == 1);
}

TEST_CASE("every bundled fixture builds") {
  for (const auto& name : fixture_names()) {
    const auto mf = fixture(name);
    INFO(name);
    CHECK(mf.name == name);
    const TropicalManifold m(mf.input);
    CHECK_NOTHROW(period_data(m, mf));
    CHECK_NOTHROW(explicit_cycles(m, mf));
  }
  CHECK(TropicalManifold(fixture("torus").input).discriminant().empty());
  CHECK(TropicalManifold(fixture("focus_focus").input).discriminant().size() == 1);
}

TEST_CASE("dangling ids carry the line of the reference") {
  const std::string path = std::string(FIXTURE_DIR) + "/../tests/data/dangling_facet.json";
  try {
    load_manifest(path);
    FAIL("expected a ManifestError");
  } catch (const ManifestError& e) {
    CHECK(e.kind == ManifestIssue::DanglingId);
    CHECK(e.line == 6);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("cell id 7"));
  }

  auto text = tate_text();
  const int line = replace_once(text, "\"facet\": 0,\n   \"kink\"", "\"facet\": 5,\n   \"kink\"");
  const auto e = expect_error(text);
  CHECK(e.kind == ManifestIssue::DanglingId);
  CHECK(e.line == line);
}

TEST_CASE("syntax errors report their line") {
  auto text = tate_text();
  const int line = replace_once(text, "\"dim\": 0\n", "\"dim\": 0,,\n");
  const auto e = expect_error(text);
  CHECK(e.kind == ManifestIssue::Syntax);
  CHECK(e.line == line);
  CHECK_THAT(e.what(), Catch::Matchers::StartsWith("test.json:" + std::to_string(line) + ": Syntax"));
}

TEST_CASE("dimension mismatches and schema errors") {
  {
    auto text = tate_text();
    const int line = replace_once(text, "\"xi\": [1]", "\"xi\": [1, 0]");
    const auto e = expect_error(text);
    CHECK(e.kind == ManifestIssue::DimensionMismatch);
    CHECK(e.line == line);
  }
  {
    auto text = tate_text();
    const int line = replace_once(text, "\"constant\": [1, 0]", "\"constant\": [0, 0]");
    const auto e = expect_error(text);
    CHECK(e.kind == ManifestIssue::Schema);
    CHECK(e.line == line);
  }
  {
    auto text = tate_text();
    replace_once(text, "\"cells\"", "\"cellz\"");
    CHECK(expect_error(text).kind == ManifestIssue::Schema);
  }
  CHECK(expect_error("[1, 2]").kind == ManifestIssue::Schema);
  CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.json"), std::runtime_error);
}

TEST_CASE("piece selection without corners takes every piece") {
  const auto mf = fixture("torus");
  const TropicalManifold m(mf.input);
  const CellId facet = m.complex().cells_of_dim(1).front();
  const auto all = select_pieces(m, facet, {});
  CHECK(all.size() == 2);
  for (auto p : all) CHECK(m.pieces()[p].parent == facet);
}

TEST_CASE("report pipelines") {
  const RunOptions opt;
  {
    const auto mf = fixture("tate_k2");
    const auto r = run("period", &mf, opt);
    CHECK(r.ok());
    CHECK_THAT(r.human(), Catch::Matchers::ContainsSubstring("h_beta = t^2"));
  }
  {
    const auto mf = fixture("torus");
    const auto r = run("homology", &mf, opt);
    CHECK(r.ok());
    CHECK_THAT(r.machine(), Catch::Matchers::ContainsSubstring("homology.level0.H1=Z^4"));
    CHECK_THAT(r.machine(), Catch::Matchers::ContainsSubstring("cech.H1=Z^4"));
  }
  for (const auto& name : fixture_names()) {
    const auto mf = fixture(name);
    RunOptions seeded;
    seeded.seed = 7;
    INFO(name);
    CHECK(run("all", &mf, seeded).machine() == run("all", &mf, seeded).machine());
  }
  CHECK(needs_manifest("period"));
  CHECK_FALSE(needs_manifest("verify"));
}

TEST_CASE("module failures become failed checks") {
  Report r;
  r.check("a", true);
  CHECK(r.ok());
  r.error("period_engine", "boom");
  CHECK_FALSE(r.ok());
  CHECK(r.failures() == 1);
  Report outer;
  outer.append(r);
  CHECK(outer.failures() == 1);
  CHECK(fixed(0.5L, 3) == "0.500");
}
