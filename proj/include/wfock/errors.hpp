#pragma once

#include <stdexcept>
#include <string>

namespace wfock {

struct BufferTooSmall : std::runtime_error {
    explicit BufferTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct NoSolutionInTruncation : std::runtime_error {
    explicit NoSolutionInTruncation(const std::string& what) : std::runtime_error(what) {}
};

struct IllConditioned : std::runtime_error {
    explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureNotConverged : std::runtime_error {
    explicit QuadratureNotConverged(const std::string& what) : std::runtime_error(what) {}
};

struct PositivityViolated : std::runtime_error {
    explicit PositivityViolated(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wfock
