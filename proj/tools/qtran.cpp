#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtran/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent quantum transport through open devices"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out;
  struct Entry {
    qtran::Subcommand cmd;
    const char* help;
  };
  const Entry entries[] = {
      {qtran::Subcommand::GroundState, "Print the ground-state density matrix and occupations"},
      {qtran::Subcommand::Propagate, "Propagate the reduced density matrix and write a CSV trace"},
      {qtran::Subcommand::Steady, "Steady-state Landauer current, or an I-V table"},
      {qtran::Subcommand::Transmission, "Transmission sweep T(eps) as CSV"},
      {qtran::Subcommand::Oracle, "Discretized-lead reference run compared with the wide-band propagator"},
      {qtran::Subcommand::Verify, "Run the acceptance suite"},
  };
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(qtran::to_string(e.cmd), e.help);
    auto* opt = sub->add_option("--config", config, "JSON run configuration");
    if (e.cmd != qtran::Subcommand::Verify) opt->required();
    sub->add_option("--out", out, "Output path (stdout when omitted)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors count as configuration errors
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const auto cmd = qtran::parse_subcommand(chosen->get_name());
  return qtran::run_cli(*cmd, config, out, std::cout, std::cerr);
}
