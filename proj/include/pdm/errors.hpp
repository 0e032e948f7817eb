#pragma once

#include <stdexcept>
#include <string>

namespace pdm {

// Raised when an input string cannot be turned into an expression tree.
// `offset` is the byte position in the source text where scanning stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Raised for structurally valid but unusable configuration: unknown profile
// names, unbound parameters, out-of-range option values, malformed grids.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a mathematical function is evaluated outside its domain
// (sqrt of a negative, log of a non-positive, division by zero, a mass
// profile that goes non-positive inside its declared window).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an iterative numerical procedure fails to reach its target
// accuracy: quadrature recursion bottoming out, root polishing stalling,
// eigensolves not converging.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pdm
