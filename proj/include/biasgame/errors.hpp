#pragma once

#include <stdexcept>
#include <string>

namespace biasgame {

/// Base class for every error raised by the library.
class GameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A ModelParams (or sweep / config) invariant is violated.  The message
/// names the offending field.
class InvalidParams : public GameError {
public:
    using GameError::GameError;
};

/// Computational failures.  The CLI maps these to exit code 3.
class ComputeError : public GameError {
public:
    using GameError::GameError;
};

class SingularSystem : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class BracketExhausted : public ComputeError {
public:
    using ComputeError::ComputeError;
};

class NoConvergence : public ComputeError {
public:
    NoConvergence(const std::string& what, double last_change, int iterations)
        : ComputeError(what), last_change_(last_change), iterations_(iterations) {}

    double last_change() const noexcept { return last_change_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_change_;
    int iterations_;
};

/// A finite-difference stencil would leave the parameter domain.
class StepOutOfDomain : public InvalidParams {
public:
    using InvalidParams::InvalidParams;
};

}  // namespace biasgame
