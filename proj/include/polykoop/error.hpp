#pragma once

#include <stdexcept>
#include <string>

namespace polykoop {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class UnboundParameter : public Error {
public:
    explicit UnboundParameter(const std::string& name)
      : Error("unbound parameter: " + name)
      , name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// compute_lifting hit its observable cap before reaching a fixpoint.
class CapExceeded : public Error {
public:
    using Error::Error;
};

// A lie derivative produced a monomial outside the lifting. Internal invariant violation.
class ClosureError : public Error {
public:
    using Error::Error;
};

class InvalidPermutation : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    NonFiniteState(const std::string& what, long step)
      : Error(what)
      , step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

} // namespace polykoop
