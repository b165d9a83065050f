#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace thinfem {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateSimplex : public Error {
public:
    using Error::Error;
};

class InvalidParam : public Error {
public:
    using Error::Error;
};

class EmptyMesh : public Error {
public:
    using Error::Error;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

/// Malformed mesh or plan file. `line()` is 1-based; 0 when the problem is
/// not tied to a particular line (e.g. premature end of file).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidPlan : public Error {
public:
    using Error::Error;
};

class DimensionUnsupported : public Error {
public:
    using Error::Error;
};

class AmbiguousLongestEdge : public Error {
public:
    using Error::Error;
};

class ConflictingCoverValues : public Error {
public:
    using Error::Error;
};

class InvalidCoverGeometry : public Error {
public:
    using Error::Error;
};

class AssumptionViolated : public Error {
public:
    using Error::Error;
};

class MissingHessian : public Error {
public:
    using Error::Error;
};

class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    NoConvergence(std::size_t max_iter, double rel_residual)
        : Error("conjugate gradients did not converge in " + std::to_string(max_iter) +
                " iterations (relative residual " + scientific(rel_residual) + ")"),
          max_iter_(max_iter),
          rel_residual_(rel_residual) {}
    std::size_t max_iter() const noexcept { return max_iter_; }
    double relative_residual() const noexcept { return rel_residual_; }

private:
    static std::string scientific(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return buf;
    }

    std::size_t max_iter_;
    double rel_residual_;
};

}  // namespace thinfem
