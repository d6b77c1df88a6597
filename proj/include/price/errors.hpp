#pragma once

#include <stdexcept>
#include <string>

namespace price {

// Bad inputs, malformed files, violated invariants. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Configurations that cannot be scheduled (more datasets than instances). CLI exit code 2.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace price
