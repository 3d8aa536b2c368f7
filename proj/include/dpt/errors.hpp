#pragma once

#include <stdexcept>
#include <string>

namespace dpt {

// Base class for all failures raised by this library. CLI maps these to
// exit code 3 (numerical failure) unless they stem from input validation.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Matrix has an eigenvalue below the negative tolerance band.
class NotPsdError : public Error {
public:
    explicit NotPsdError(const std::string& msg) : Error(msg) {}
};

// A generated potential failed its convexity precondition.
class NotConvexError : public Error {
public:
    explicit NotConvexError(const std::string& msg) : Error(msg) {}
};

// Dimension outside the supported range or mismatched operands.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Time step violates the advection stability bound.
class CflError : public Error {
public:
    explicit CflError(const std::string& msg) : Error(msg) {}
};

// Closedness obstruction: the first Fourier modes of the input measure
// do not vanish, so no support function exists.
class ObstructionError : public Error {
public:
    explicit ObstructionError(const std::string& msg) : Error(msg) {}
};

// Electromagnetic lagrangian is not a function of the Lorentz invariants:
// the Minkowski momentum D x B and the Abraham momentum E x H disagree.
class PqMismatchError : public Error {
public:
    explicit PqMismatchError(const std::string& msg) : Error(msg) {}
};

// Field fails the required decay at the spatial box boundary.
class DecayError : public Error {
public:
    explicit DecayError(const std::string& msg) : Error(msg) {}
};

// Malformed configuration input. CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// NaN/Inf or an iteration that failed to converge.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

} // namespace dpt
