#pragma once

#include <stdexcept>
#include <string>

namespace plekit {

// Base class for every error raised by the library. Each analysis failure
// mode gets its own type so callers (and the CLI exit-code mapping) can
// react per class instead of parsing messages.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file (bad JSON, bad CSV header, token count mismatch...).
class ParseError : public Error {
public:
    using Error::Error;
};

// A domain-type invariant is violated. Carries the offending field name.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& detail)
        : Error(field + ": " + detail), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Solver hit the iteration cap while the cost was still changing.
class NonConvergence : public Error {
public:
    using Error::Error;
};

// Data carries no usable signal for a fit (e.g. constant counts).
class DegenerateData : public Error {
public:
    using Error::Error;
};

// Position windows and separation constraint cannot all hold at once.
class ConstraintInfeasible : public Error {
public:
    using Error::Error;
};

class EmptyGrid : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class TooFewSuccessfulLines : public Error {
public:
    using Error::Error;
};

class NonPositiveDt : public Error {
public:
    using Error::Error;
};

class NonPositiveSeparation : public Error {
public:
    using Error::Error;
};

class EmptyRegion : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace plekit
