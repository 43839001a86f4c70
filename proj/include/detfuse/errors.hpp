#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace detfuse {

/// Malformed input file. Carries the offending file and 1-based line so the
/// CLI can emit a machine-readable error record.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Config schema violation. Lists the offending keys.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& what, std::vector<std::string> keys)
        : std::invalid_argument(what), keys_(std::move(keys)) {}

    const std::vector<std::string>& keys() const { return keys_; }

private:
    std::vector<std::string> keys_;
};

}  // namespace detfuse
