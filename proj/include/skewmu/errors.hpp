#ifndef SKEWMU_ERRORS_HPP
#define SKEWMU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace skewmu {

// Base class for all library failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: violated preconditions, malformed config, out-of-range requests.
// The CLI maps this to exit code 2.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// The requested computation cannot be certified at the current precision
// (or error budget exceeded).  The CLI maps this to exit code 3.
struct PrecisionError : Error {
    explicit PrecisionError(const std::string& msg) : Error(msg) {}
};

// A point sits within its error bound of a cell/arc boundary, so a digit or
// arc membership cannot be decided.  Callers may retry at higher precision.
struct BoundaryAmbiguousError : PrecisionError {
    explicit BoundaryAmbiguousError(const std::string& msg) : PrecisionError(msg) {}
};

// An enumeration or table would exceed the configured size budget.
struct BudgetError : ValidationError {
    explicit BudgetError(const std::string& msg) : ValidationError(msg) {}
};

} // namespace skewmu

#endif
