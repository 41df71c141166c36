#pragma once

#include <iosfwd>
#include <string>

namespace slab {

// JSON-driven implementations of the CLI subcommands. `name` is one of
// propagate, kernel, decompose, sweep, audit, verify. Throws slab::Error with
// the code that maps to the documented exit codes.
void run_command(const std::string& name, const std::string& config_json,
                 std::ostream& out);

}  // namespace slab
