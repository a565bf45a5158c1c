#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ethdyn {

/// Bad caller input: out-of-domain parameters, malformed arguments, schema
/// violations. The CLI maps these to exit status 1.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Empty or unbounded halfspace intersection.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested construction does not exist for this input (repeated eigenvalue
/// closed form, for instance).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state component left the finite range during integration.
class OverflowError : public std::runtime_error {
public:
    OverflowError(const std::string& what, std::size_t last_finite_step)
        : std::runtime_error(what), last_finite_step_(last_finite_step) {}

    std::size_t last_finite_step() const noexcept { return last_finite_step_; }

private:
    std::size_t last_finite_step_;
};

} // namespace ethdyn
