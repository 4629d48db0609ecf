#pragma once

#include <stdexcept>
#include <string>

namespace elasticorner {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (x <= 0, |e| != 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class UnsupportedOrderError : public Error {
public:
    using Error::Error;
};

/// Invalid or degenerate geometry: collinear vertices, nonconvex polygons, arcs off the origin.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Lame pair violating mu > 0, n*lambda + 2*mu > 0.
class ConvexityError : public Error {
public:
    ConvexityError(const std::string& what, double margin) : Error(what), margin_(margin) {}
    double margin() const noexcept { return margin_; }

private:
    double margin_;
};

/// Cone of opening pi: the sector moment constant vanishes.
class DegenerateConeError : public Error {
public:
    using Error::Error;
};

/// Requested operation is not available for this input (3D volume potential, ...).
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A numerical budget or accuracy precondition cannot be met.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Malformed scene or configuration document.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace elasticorner
