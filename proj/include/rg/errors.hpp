#pragma once

#include <stdexcept>
#include <string>

namespace rg {

/// Bad user input: malformed files, arity mismatches, spec violations.
/// CLI maps these to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public InputError {
public:
    explicit ValidationError(const std::string& what) : InputError(what) {}
};

class CompositionError : public InputError {
public:
    explicit CompositionError(const std::string& what) : InputError(what) {}
};

class MatchError : public InputError {
public:
    explicit MatchError(const std::string& what) : InputError(what) {}
};

class ReplayError : public InputError {
public:
    ReplayError(const std::string& what, std::size_t step) : InputError(what), step_index(step) {}
    std::size_t step_index;
};

class ParseError : public InputError {
public:
    explicit ParseError(const std::string& what) : InputError(what) {}
};

/// Resource limits: tensor rank cap, rewrite step budget, build caps.
/// CLI maps these to exit code 3.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rg
