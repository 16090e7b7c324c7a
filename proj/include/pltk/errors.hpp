#pragma once

#include "pltk/complex.hpp"

#include <stdexcept>
#include <string>

namespace pltk {

/// Malformed structured input (JSON shape, wrong types, out-of-range indices).
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string location, const std::string& message)
        : std::runtime_error(location + ": " + message), location_(std::move(location)) {}

    [[nodiscard]] const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

/// Malformed line-oriented text input.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input that parsed but breaks a complex or sheaf invariant.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report)
        : std::runtime_error(summary(report)), report_(std::move(report)) {}

    [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
    static std::string summary(const ValidationReport& r) {
        std::string s = std::to_string(r.violations.size()) + " violation(s)";
        if (!r.violations.empty()) {
            const auto& v = r.violations.front();
            s += ", first: [" + v.rule + "] " + v.location + ": " + v.message;
        }
        return s;
    }

    ValidationReport report_;
};

/// A numerical step failed with no fallback available.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pltk
