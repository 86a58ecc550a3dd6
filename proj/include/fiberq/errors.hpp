#pragma once

#include <stdexcept>
#include <string>

namespace fiberq {

/// Shapes or spaces of two operands do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A parameter violates a builder or operation precondition.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Propagation aborted because a density-matrix invariant drifted past its
/// abort threshold.
class InvariantBreach : public std::runtime_error {
public:
    InvariantBreach(double z_km, const std::string& what)
        : std::runtime_error(what), z_km_(z_km) {}

    double z_km() const noexcept { return z_km_; }

private:
    double z_km_;
};

}  // namespace fiberq
