#pragma once

#include <stdexcept>
#include <string>

namespace katka {

// Base class for every error raised by the library. The subclasses map onto
// the CLI's exit codes (validation, I/O, format).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed FASTA/newick, illegal parameters, reserved symbols.
class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Corrupt or incompatible KTK2 index data.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace katka
