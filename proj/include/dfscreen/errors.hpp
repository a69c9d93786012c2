#pragma once
#include <stdexcept>
#include <string>

namespace dfscreen {

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range or otherwise invalid scalar parameter.
class ParameterError : public Error
{
public:
    using Error::Error;
};

/// Dimension mismatch between matrices/vectors.
class ShapeError : public Error
{
public:
    using Error::Error;
};

/// Response value outside the domain of its link.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Input data violates a documented precondition (e.g. unstandardized columns).
class ContractError : public Error
{
public:
    using Error::Error;
};

class SymmetryError : public Error
{
public:
    using Error::Error;
};

class NumericalError : public Error
{
public:
    using Error::Error;
};

/// A column has (numerically) no component outside the current span.
class DegeneracyError : public Error
{
public:
    using Error::Error;
};

/// File or text could not be read or parsed.
class IoError : public Error
{
public:
    using Error::Error;
};

/// A Monte-Carlo replication failed; carries the replication seed.
class ReplicationError : public Error
{
public:
    ReplicationError(const std::string& what, unsigned long long seed)
        : Error(what), seed_(seed)
    {}
    unsigned long long seed() const { return seed_; }

private:
    unsigned long long seed_;
};

} // namespace dfscreen
