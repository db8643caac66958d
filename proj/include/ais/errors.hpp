#pragma once

#include <stdexcept>
#include <string>

namespace ais {

// Input files (ratings, connection logs, bit-string lists) that fail to
// parse. Carries the 1-based line number the message already names.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Invalid configuration value or unknown key.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// An algorithm could not produce a result (e.g. detector generation
// exhausted its draw budget with nothing surviving censoring).
class GenerationError : public std::runtime_error {
public:
    explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ais
