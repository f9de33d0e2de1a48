#pragma once

#include <stdexcept>
#include <string>

namespace txg {

// Operand lengths disagree (e.g. dot of a 3-bit and a 4-bit vector).
class dimension_error : public std::runtime_error {
public:
    explicit dimension_error(const std::string& what) : std::runtime_error(what) {}
};

// Input exceeds a hard size cap (m over 24, dense matrix over m=10, ...).
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// A value-level invariant is broken (negative weight, conflicting clause, bad state norm).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Floating-point residue outside the accepted window.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Text input that does not match a file format; carries the offending line.
class parse_error : public std::runtime_error {
public:
    parse_error(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

}  // namespace txg
