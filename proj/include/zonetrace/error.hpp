#pragma once

#include <stdexcept>
#include <string>

namespace zonetrace {

enum class ErrorKind {
    Input,        // malformed or inconsistent input data
    Numerical,    // singular system, failed residual check
    NoLoopFlows,  // nothing left to split
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

class NoLoopFlowsError : public Error {
public:
    explicit NoLoopFlowsError(const std::string& what) : Error(ErrorKind::NoLoopFlows, what) {}
};

/// Process exit status associated with an error kind.
int exit_code(ErrorKind kind) noexcept;

}  // namespace zonetrace
