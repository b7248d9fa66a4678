#pragma once

#include <stdexcept>
#include <string>

namespace slitkit {

// Malformed or mismatched combinatorial data (wrong tableau, bad symbol, parse failure).
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument to an algebraic operation (non-prime modulus, non-cocycle input, ...).
struct ArgumentError : std::runtime_error {
    explicit ArgumentError(const std::string& what) : std::runtime_error(what) {}
};

// Requested computation exceeds the configured budget.
struct ResourceError : std::runtime_error {
    int h;
    ResourceError(const std::string& what, int h_) : std::runtime_error(what), h(h_) {}
};

// Integral (or odd-prime) coefficients requested where the orientation system is non-constant.
struct UnsupportedOrientationError : std::runtime_error {
    explicit UnsupportedOrientationError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant failed (e.g. deltaable does not square to zero); always a bug.
struct InternalConsistencyError : std::logic_error {
    explicit InternalConsistencyError(const std::string& what) : std::logic_error(what) {}
};

} // namespace slitkit
