// tropper <command> [manifest]: runs one pipeline and prints the human summary
// followed by the key=value block. Exit status is zero iff every check passed.

#include "tropper/manifest.hpp"
#include "tropper/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"tropper: homology, periods and numeric checks for tropical manifolds"};
  std::string command;
  std::string manifest_path;
  std::string report_path;
  int order = -1;
  tropper::RunOptions opt;
  double tolerance = static_cast<double>(opt.tolerance);

  app.add_option("command", command, "validate | homology | period | generate | verify | all")
      ->required()
      ->check(CLI::IsMember(tropper::commands()));
  app.add_option("manifest", manifest_path, "JSON manifest");
  app.add_option("--order", order, "truncation order for slab normalization")->check(CLI::NonNegativeNumber);
  app.add_option("--tolerance", tolerance, "tolerance for floating comparisons")->check(CLI::PositiveNumber);
  app.add_option("--samples", opt.samples, "quadrature samples per angular dimension");
  app.add_option("--seed", opt.seed, "seed for random radii, stars and slab functions");
  app.add_option("--report", report_path, "also write the key=value block to this file");
  CLI11_PARSE(app, argc, argv);

  if (order >= 0) opt.order = order;
  opt.tolerance = tolerance;

  std::optional<tropper::Manifest> mf;
  if (tropper::needs_manifest(command)) {
    if (manifest_path.empty()) {
      std::cerr << "tropper: command '" << command << "' needs a manifest\n";
      return 2;
    }
    try {
      mf = tropper::load_manifest(manifest_path);
    } catch (const std::exception& e) {  // ManifestError already reads "source:line: Kind: msg"
      std::cerr << e.what() << "\n";
      return 3;
    }
  }

  const tropper::Report report = tropper::run(command, mf ? &*mf : nullptr, opt);
  std::cout << report.human() << "\n" << report.machine();
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!(out << report.machine())) {
      std::cerr << "tropper: cannot write " << report_path << "\n";
      return 4;
    }
  }
  return report.ok() ? 0 : 1;
}
