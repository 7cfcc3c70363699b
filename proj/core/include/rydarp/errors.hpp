#pragma once

#include <stdexcept>
#include <string>

namespace rydarp {

/// Invalid user input: bad config values, wrong matrix dimensions, missing calibration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A formula evaluated outside its domain, e.g. adiabatic elimination at zero one-photon detuning.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integrator failure or a propagated state that violates density-matrix invariants.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Delay calibration could not bracket the target phase.
class CalibrationError : public NumericalError {
public:
    CalibrationError(const std::string& what, double required_step_us)
        : NumericalError(what), required_step_us_(required_step_us) {}

    /// Estimated step duration pi / (2 V_int) in microseconds (infinite when V_int = 0).
    double required_step_us() const noexcept { return required_step_us_; }

private:
    double required_step_us_;
};

}  // namespace rydarp
