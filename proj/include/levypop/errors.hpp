#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levypop {

/// A parameter lies outside the domain an operation is defined on.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation requested at a point where the quantity diverges.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Solver or simulator configuration that cannot be run as given.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A density (or ensemble) has no mass where some is required.
class EmptyDensityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite or runaway values produced while time stepping.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::size_t step, std::size_t path = npos)
        : std::runtime_error(what + " (step " + std::to_string(step) +
                             (path == npos ? std::string{} : ", path " + std::to_string(path)) + ")"),
          step_(step),
          path_(path) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] std::size_t path() const noexcept { return path_; }

private:
    std::size_t step_;
    std::size_t path_;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace detail

}  // namespace levypop
