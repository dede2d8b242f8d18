#ifndef DESMOOTH_ERRORS_HPP
#define DESMOOTH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace desmooth {

/// Base class for all library errors. Everything thrown on a documented
/// failure path derives from this, so callers can catch desmooth::Error
/// without enumerating the concrete types.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// h <= 0 passed to a kernel-weighted routine.
class InvalidBandwidthError : public Error {
public:
    using Error::Error;
};

/// Kernel moment or roughness order above the tabulated range.
class UnsupportedMomentError : public Error {
public:
    using Error::Error;
};

/// A coefficient-function derivative of unavailable order was requested.
class MissingDerivativeError : public Error {
public:
    using Error::Error;
};

/// Weighted design matrix numerically singular at a grid point.
class RankDeficiencyError : public Error {
public:
    RankDeficiencyError(const std::string& msg, double x0) : Error(msg), x0_(x0) {}
    double grid_point() const noexcept { return x0_; }

private:
    double x0_;
};

/// Scalar minimizer could not bracket a minimum at a grid point.
class OptimizerFailureError : public Error {
public:
    OptimizerFailureError(const std::string& msg, double x0) : Error(msg), x0_(x0) {}
    double grid_point() const noexcept { return x0_; }

private:
    double x0_;
};

/// Every bandwidth in a cross-validation grid was degenerate at every point.
class NoValidBandwidthError : public Error {
public:
    using Error::Error;
};

/// Asymptotically optimal bandwidth does not exist for the given inputs
/// (lambda = 0, or a vanishing even-degree drift factor).
class UndefinedOptimumError : public Error {
public:
    using Error::Error;
};

/// All covariate values coincide; the parametric fit is unidentifiable.
class DegenerateDesignError : public Error {
public:
    using Error::Error;
};

/// Log-linear regression requires strictly positive responses.
class NonpositiveResponseError : public Error {
public:
    using Error::Error;
};

/// A dataset ended up with zero observations.
class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

/// Median absolute deviation over an all-degenerate fit.
class UndefinedMadError : public Error {
public:
    using Error::Error;
};

/// Structural problem in an input file (wrong header, bad schema).
class FormatError : public Error {
public:
    using Error::Error;
};

/// A cell or token could not be parsed; message carries the line number.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (bad flag combination, bad config field).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure while reading or writing.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace desmooth

#endif // DESMOOTH_ERRORS_HPP
