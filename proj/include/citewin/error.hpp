#pragma once

#include <stdexcept>
#include <string>

namespace citewin {

// Base for every error raised by the library. The CLI maps subclasses to exit
// codes: data problems -> 1, usage and missing inputs -> 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed content in an input file; carries file and 1-based line.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

// Cross-record inconsistency: dangling ids, duplicates, broken invariants.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Invalid configuration or command-line arguments.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A required input (file, directory, observation year) is absent.
class MissingInputError : public Error {
public:
    using Error::Error;
};

// An analysis cannot be carried out on the given data (empty partitions,
// too few units, inconsistent tables).
class AnalysisError : public Error {
public:
    using Error::Error;
};

}  // namespace citewin
