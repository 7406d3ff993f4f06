#pragma once
// Command pipelines behind the CLI. Each produces a human summary and a
// line-oriented key=value block; floats are printed at fixed precision so the
// block is byte-identical across runs with the same inputs.

#include "tropper/manifest.hpp"
#include "tropper/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tropper {

struct RunOptions {
  std::optional<int> order;  // truncation order; each slab's own order when absent
  long double tolerance = 1e-12L;
  std::size_t samples = 0;   // quadrature samples per dimension; 0 for the defaults
  std::uint64_t seed = 1;
};

class Report {
 public:
  void note(std::string text);
  void value(std::string key, std::string v);
  void check(const std::string& key, bool ok, const std::string& detail = {});
  // An exception escaping a module: recorded as a failed check named after it.
  void error(const std::string& module, const std::string& message);
  void append(const Report& other);

  bool ok() const { return failures_ == 0; }
  std::size_t failures() const { return failures_; }
  std::string human() const;
  std::string machine() const;

 private:
  std::vector<std::string> human_;
  std::vector<std::pair<std::string, std::string>> machine_;
  std::size_t failures_ = 0;
};

std::string fixed(long double x, int digits = 12);
std::string fixed(Complex z, int digits = 12);

const std::vector<std::string>& commands();
bool needs_manifest(const std::string& command);

Report run_validate(const Manifest& mf, const RunOptions& opt);
Report run_homology(const Manifest& mf, const RunOptions& opt);
Report run_period(const Manifest& mf, const RunOptions& opt);
Report run_generate(const Manifest& mf, const RunOptions& opt);
Report run_verify(const RunOptions& opt);
// Dispatches by name; `mf` may be null for commands that need no manifest.
Report run(const std::string& command, const Manifest* mf, const RunOptions& opt);

}  // namespace tropper
