#pragma once

#include <iosfwd>

namespace katka {

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUnexpected = 1,
    kExitValidation = 2,  // bad flags, parameters or input content
    kExitIo = 3,          // unreadable or unwritable files
    kExitFormat = 4,      // malformed index or input structure
};

// Entry point of the `katka` tool; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace katka
