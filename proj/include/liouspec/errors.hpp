// errors.hpp: exception types raised by the liouspec library.
#pragma once

#include <stdexcept>
#include <string>

namespace liouspec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand shapes do not match.
class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidParameterError : public Error {
public:
    using Error::Error;
};

// A matrix failed the physical-state checks of DensityMatrix.
class InvalidStateError : public Error {
public:
    using Error::Error;
};

// The biorthogonal normalizer of some mode collapsed (exceptional point nearby).
class NearDefectiveError : public Error {
public:
    using Error::Error;
};

class MixedParityError : public Error {
public:
    using Error::Error;
};

class NoBracketError : public Error {
public:
    using Error::Error;
};

// The slowest eigenvalue is complex, so no two-state manifold exists.
class NotMetastableError : public Error {
public:
    using Error::Error;
};

class OutsideManifoldError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    using Error::Error;
};

class NonStationaryError : public Error {
public:
    using Error::Error;
};

class DegenerateSpectrumError : public Error {
public:
    using Error::Error;
};

} // namespace liouspec
