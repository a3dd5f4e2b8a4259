#pragma once

#include <stdexcept>
#include <string>

namespace curricula {

// User-facing failures (bad files, bad arguments, bad configuration).
// The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File ingestion failed: missing file, malformed row, broken reference.
class IngestError : public Error {
public:
    using Error::Error;
};

// An operation received an out-of-domain argument value.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// A lookup by id found nothing.
class LookupError : public Error {
public:
    using Error::Error;
};

// A configuration (file or flag set) violates an invariant.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Internal precondition broken by the caller; maps to exit code 2.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace curricula
