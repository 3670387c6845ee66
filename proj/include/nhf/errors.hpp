#pragma once

#include <stdexcept>
#include <string>

namespace nhf {

/// Invalid user input: bad geometry, non-finite data, out-of-range exponent.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// Two fields (or a field and an operator) live on different grids.
class DomainMismatch : public InvalidArgument {
public:
    explicit DomainMismatch(const std::string& what) : InvalidArgument(what) {}
};

/// An iterative solver hit its cap before reaching tolerance.
class NotConverged : public std::runtime_error {
public:
    explicit NotConverged(const std::string& what) : std::runtime_error(what) {}
};

/// A construction target is unreachable at this resolution / parameter set.
class Infeasible : public std::runtime_error {
public:
    explicit Infeasible(const std::string& what) : std::runtime_error(what) {}
};

/// File I/O or format failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nhf
