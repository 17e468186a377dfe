#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arcan {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// jet-core
class ZeroDivisor : public Error {
public:
    ZeroDivisor() : Error("division by a jet with no nonzero retained coefficient") {}
};

class OddValuation : public Error {
public:
    explicit OddValuation(int v) : Error("square root of a jet with odd valuation " + std::to_string(v)) {}
};

class NegativeLeading : public Error {
public:
    NegativeLeading() : Error("square root of a jet with negative leading coefficient") {}
};

/// Exact square root requested of a rational that is not a perfect square.
class IrrationalRoot : public Error {
public:
    IrrationalRoot() : Error("square root is not rational") {}
};

class PoleAtOrigin : public Error {
public:
    explicit PoleAtOrigin(int v) : Error("jet has a pole of order " + std::to_string(-v) + " at t = 0") {}
};

/// Requested coefficient lies beyond the retained window.
class TruncationError : public Error {
public:
    TruncationError(int k, int order)
        : Error("coefficient t^" + std::to_string(k) + " lies beyond retained order " + std::to_string(order))
    {
    }
};

// expr
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error("syntax error at " + std::to_string(position) + ": " + what), position_(position)
    {
    }

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class ArityError : public Error {
public:
    ArityError(const std::string& fn, std::size_t expected, std::size_t got)
        : Error(fn + "() expects " + std::to_string(expected) + " argument(s), got " + std::to_string(got))
    {
    }
};

/// Pointwise evaluation left the real domain (negative radicand, unguarded pole).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Division by an exact zero during pointwise evaluation. Caught by guard nodes.
class DivisionByZero : public DomainError {
public:
    DivisionByZero() : DomainError("division by zero") {}
};

/// Series evaluation along an arc failed (the arc leaves the real domain of the expression).
class ArcDomainError : public Error {
public:
    using Error::Error;
};

// homog
class GenericityFailure : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    SingularSystem() : Error("singular linear system") {}
};

class PremiseViolated : public Error {
public:
    using Error::Error;
};

// classify
class CapExceeded : public Error {
public:
    explicit CapExceeded(int cap) : Error("no exponent N <= " + std::to_string(cap) + " fits the samples") {}
};

// blowup
class BadCenter : public Error {
public:
    using Error::Error;
};

} // namespace arcan
