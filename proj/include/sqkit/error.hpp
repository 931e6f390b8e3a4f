#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sqkit {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Bad kind, arity, entry or position supplied by the caller.
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

class DimensionMismatch : public Error
{
public:
    using Error::Error;
};

class Unsupported : public Error
{
public:
    using Error::Error;
};

// Malformed element JSON, cache file or config.
class FormatError : public Error
{
public:
    using Error::Error;
};

class GuardrailExceeded : public Error
{
public:
    using Error::Error;
};

// A mathematical precondition of an operation does not hold for the input.
class PreconditionViolation : public Error
{
public:
    using Error::Error;
};

class NotInNullSubspace : public PreconditionViolation
{
public:
    NotInNullSubspace(const std::string& what, std::vector<int> monomial)
        : PreconditionViolation(what), offending(std::move(monomial))
    {
    }
    std::vector<int> offending;
};

class NotInDelta : public PreconditionViolation
{
public:
    NotInDelta(const std::string& what, int i) : PreconditionViolation(what), failing_index(i) {}
    int failing_index;  // x Sq^{2^i} != 0
};

// A result contradicts a theorem the code relies on. Always a bug.
class InternalInconsistency : public Error
{
public:
    using Error::Error;
};

}  // namespace sqkit
