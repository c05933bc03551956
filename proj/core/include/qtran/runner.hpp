#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "qtran/config.hpp"

namespace qtran {

enum class Subcommand { GroundState, Propagate, Steady, Transmission, Oracle, Verify };

std::optional<Subcommand> parse_subcommand(const std::string& name);
const char* to_string(Subcommand cmd);

/// Runs one configuration. Artifacts go to `out_path` when given, else to `out`.
/// `config_text` is the source document, needed to expand sweep entries.
void execute(Subcommand cmd, const RunConfig& cfg, const std::string& config_text, const std::string& out_path,
             std::ostream& out);

/// File-level entry point. Returns 0, or 2/3/4 after a CONFIG/NUMERIC/IO failure
/// reported on `err` as "CONFIG: ...", "NUMERIC: ..." or "IO: ...".
int run_cli(Subcommand cmd, const std::string& config_path, const std::string& out_path, std::ostream& out,
            std::ostream& err);

}  // namespace qtran
