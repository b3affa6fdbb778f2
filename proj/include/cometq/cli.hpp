#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cometq::cli {

// Parses argv-style arguments (program name excluded), runs one subcommand
// (dims | solve | polygon | verify | higgs | gt | brane | wildify), and writes
// the JSON artifact to `out` or the --out path. Returns 0 on success, 2 on
// usage or validation errors (diagnostic on `err`), 3 when a solve fails to
// converge or a verification exceeds its tolerance.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cometq::cli
