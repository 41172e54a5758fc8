#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cat::cli {

/// Exit codes.
enum Exit : int {
    ok = 0,          // ran; board matches the schema when one was given
    parse_error = 1, // program, schema or argument could not be parsed
    exec_error = 2,  // interpreter error
    mismatch = 3,    // ran cleanly but the board differs from the schema
    io_error = 4,
};

/// Entry point shared by the binary and the tests. args[0] is the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cat::cli
