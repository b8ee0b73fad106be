// Command-line front end: reads a config file, runs the selected case, and
// writes the configured outputs.  Exit codes: 0 success, 1 config problem,
// 2 solver failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aeromix/config.hpp"
#include "aeromix/runner.hpp"

namespace {

int run(const std::string& config_path, const std::string& output_override,
        const std::string& case_override, bool quiet) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  aeromix::ParseResult parsed = aeromix::parse_config(buffer.str());
  if (!parsed.issues.empty()) {
    for (const aeromix::ConfigIssue& issue : parsed.issues) {
      std::cerr << "config error";
      if (issue.line > 0) std::cerr << " (line " << issue.line << ")";
      std::cerr << ": " << issue.message << "\n";
    }
    return 1;
  }
  aeromix::RunConfig config = *parsed.config;

  if (!case_override.empty()) {
    if (case_override == "mechanical")
      config.kind = aeromix::CaseKind::mechanical;
    else if (case_override == "thermal")
      config.kind = aeromix::CaseKind::thermal;
    else if (case_override == "mms-mechanical")
      config.kind = aeromix::CaseKind::mms_mechanical;
    else if (case_override == "mms-thermal")
      config.kind = aeromix::CaseKind::mms_thermal;
    else {
      std::cerr << "error: unknown case '" << case_override << "'\n";
      return 1;
    }
  }
  if (!output_override.empty()) config.output_dir = output_override;

  try {
    aeromix::run_case(config, quiet ? nullptr : &std::cerr);
  } catch (const aeromix::SolverFailure& err) {
    std::cerr << "solver failure: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "run failed: " << err.what() << "\n";
    return 2;
  }
  if (!quiet) std::cerr << "done\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Finite-element runs for a gas-filled aerogel/fiber composite: coupled "
      "pressure-displacement consolidation and three-temperature heat "
      "transport."};

  std::string config_path;
  std::string output_override;
  std::string case_override;
  bool quiet = false;

  app.add_option("-c,--config", config_path, "config file")->required();
  app.add_option("-o,--output", output_override,
                 "output directory (overrides [output] dir)");
  app.add_option("--case", case_override,
                 "run this case instead of the configured one "
                 "(mechanical | thermal | mms-mechanical | mms-thermal)");
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  CLI11_PARSE(app, argc, argv);
  return run(config_path, output_override, case_override, quiet);
}
