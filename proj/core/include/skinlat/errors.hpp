#pragma once

#include <stdexcept>
#include <string>

namespace skinlat {

// Base for every failure raised by the library. The CLI maps these to
// exit status 3 (computational) unless they are ParameterError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid model/experiment parameters (odd L for the extended model, u < 0, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

// Vector/matrix dimensions that do not match the lattice.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A zero hopping amplitude where a logarithm or ratio of hoppings is required.
class SingularParameterError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double worst_residual)
        : Error(what), worst_residual_(worst_residual) {}
    double worst_residual() const noexcept { return worst_residual_; }

private:
    double worst_residual_;
};

// Winding requested around a point that lies on the loop.
class DegenerateLoopError : public Error {
public:
    using Error::Error;
};

// Adaptive loop refinement did not stabilise.
class SamplingError : public Error {
public:
    using Error::Error;
};

// Energy too close to a branch point of the lattice Green function.
class NearSingularError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class GaplessError : public Error {
public:
    using Error::Error;
};

class ClassificationError : public Error {
public:
    using Error::Error;
};

// No positive-component circuit realizes the requested hoppings.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, std::string landscape)
        : Error(what), landscape_(std::move(landscape)) {}
    const std::string& landscape() const noexcept { return landscape_; }

private:
    std::string landscape_;
};

class NetlistParseError : public Error {
public:
    using Error::Error;
};

}  // namespace skinlat
