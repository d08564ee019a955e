#pragma once

#include <stdexcept>
#include <string>

namespace mejpa {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input outside the domain of an operation (non-positive resistance, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Model validity violated: the requested evaluation point is outside the
/// regime where the small-signal expansion holds (pump too strong, flux
/// bias inside the inductance-divergence band, ...).
class ValidityError : public Error {
public:
    using Error::Error;
};

/// Pump strength at or beyond the parametric-oscillation threshold.
/// Carries the critical modulation depth at which gain diverges.
class ThresholdError : public Error {
public:
    ThresholdError(const std::string& msg, double critical_delta_phi)
        : Error(msg), critical_delta_phi(critical_delta_phi) {}
    double critical_delta_phi;
};

/// Two redundant inputs disagree beyond tolerance.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A fit or feature-extraction step could not produce a usable result
/// (non-monotone data, resonance not found, tone not detected, ...).
class FitError : public Error {
public:
    using Error::Error;
};

/// Configuration file problem: parse failure, schema violation or a
/// type-invariant violation detected at load time.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mejpa
