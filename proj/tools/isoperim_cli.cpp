// Command-line driver: `run` executes a manifest's checks and streams report
// lines; `table` dumps a profile function as CSV. Exit codes: 0 all pass,
// 1 an inequality check failed, 2 configuration/hypothesis/evaluation errors.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "isoperim/manifest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"deficit checks for weighted isoperimetric inequalities"};
  app.require_subcommand(1);

  std::string manifest_path;
  std::string out_path = "-";
  std::string format = "jsonl";
  std::string kind;

  CLI::App* run = app.add_subcommand("run", "run the checks listed in a manifest");
  run->add_option("--manifest", manifest_path, "path to the manifest JSON")->required();
  run->add_option("--out", out_path, "output path ('-' = stdout)");
  run->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  CLI::App* table = app.add_subcommand("table", "dump a profile function table as CSV");
  table->add_option("--kind", kind, "profile function kind (Psi, Xi, ..., F0Tilde)")->required();
  table->add_option("--manifest", manifest_path, "path to the manifest JSON")->required();
  table->add_option("--out", out_path, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const isoperim::Manifest man = isoperim::load_manifest_file(manifest_path);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (out_path != "-") {
      file.open(out_path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
      os = &file;
    }

    if (run->parsed()) {
      const auto fmt =
          format == "csv" ? isoperim::OutputFormat::Csv : isoperim::OutputFormat::JsonLines;
      const int code = isoperim::run_manifest(man, *os, fmt);
      os->flush();
      return code;
    }
    isoperim::write_profile_table(isoperim::profile_kind_from_string(kind), man, *os);
    os->flush();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
