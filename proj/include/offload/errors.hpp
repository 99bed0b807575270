#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace offload {

/// Invalid argument to a model primitive: bad location, off-grid size,
/// inadmissible action, malformed model data.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver precondition does not hold. `clause()` names the violated
/// structural requirement (e.g. "convex-penalty", "free-wifi").
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string clause, const std::string& what)
        : std::runtime_error(what), clause_(std::move(clause)) {}
    const std::string& clause() const noexcept { return clause_; }

private:
    std::string clause_;
};

/// Requested work exceeds a configured budget.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::size_t required)
        : std::runtime_error(what), required_(required) {}
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace offload
