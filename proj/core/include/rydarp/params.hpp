#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "rydarp/units.hpp"

namespace rydarp {

/// peak * exp(-(t - t_c)^2 / (2 tau^2)). Unit agnostic; tau must be positive.
double gaussian_rabi(double t, double peak, double t_c, double tau);

/// Two-photon Rabi frequency Omega_p * Omega_S / Delta_p. Throws DomainError for Delta_p == 0.
double two_photon_rabi(double rabi_p, double rabi_s, double detuning_p);

/// Instantaneous field parameters in internal units (rad/us).
struct FieldSample {
    double rabi_p = 0.0;
    double rabi_s = 0.0;
    double detuning_p = 0.0;          ///< one-photon detuning Delta_p
    double detuning_s = 0.0;          ///< Delta_S
    double two_photon_detuning = 0.0; ///< delta = Delta_p + Delta_S
};

/// Gaussian pump and Stokes envelopes with a common linear chirp.
///
/// Inputs carry laboratory units as suffixed: MHz, ns, us, MHz/us.
struct PulseSet {
    double omega0_p_mhz = 0.0;
    double omega0_s_mhz = 0.0;
    double tau_p_ns = 100.0;
    double tau_s_ns = 100.0;
    double t_c_us = 0.0;
    double alpha_mhz_per_us = 0.0;
    double delta0_p_mhz = 0.0;
    double delta0_s_mhz = 0.0;

    void validate() const;

    double tau_p_us() const noexcept { return ns_to_us(tau_p_ns); }
    double tau_s_us() const noexcept { return ns_to_us(tau_s_ns); }
    double max_tau_us() const noexcept;

    // Laboratory-unit evaluations (MHz, t in us).
    double rabi_p(double t_us) const;
    double rabi_s(double t_us) const;
    double detuning_p(double t_us) const noexcept;
    double detuning_s(double t_us) const noexcept;
    double two_photon_detuning(double t_us) const noexcept;

    /// All fields at t converted to internal units.
    FieldSample sample(double t_us, const UnitConvention& units) const;

    friend bool operator==(const PulseSet&, const PulseSet&) = default;
};

enum class LevelScheme {
    three_level,  ///< |g>, |i>, |r> per atom (9 two-atom states)
    four_level,   ///< |g'>, |g>, |i>, |r> per atom (16 two-atom states); |g'> is the dark qubit |0>
};

std::string_view to_string(LevelScheme scheme) noexcept;

struct AtomSystem {
    LevelScheme levels = LevelScheme::three_level;
    double gamma_i_mhz = 6.0;
    double gamma_r_khz = 0.485;
    double v_int_mhz = 0.0;
    /// Qubit hyperfine splitting. Metadata only: |g'> sits at zero rotating-frame energy.
    double qubit_splitting_ghz = 6.835;

    void validate() const;

    double gamma_i(const UnitConvention& units) const noexcept { return units.from_mhz(gamma_i_mhz); }
    double gamma_r(const UnitConvention& units) const noexcept { return units.from_khz(gamma_r_khz); }
    double v_int(const UnitConvention& units) const noexcept { return units.from_mhz(v_int_mhz); }

    std::size_t levels_per_atom() const noexcept { return levels == LevelScheme::three_level ? 3 : 4; }

    friend bool operator==(const AtomSystem&, const AtomSystem&) = default;
};

enum class StepperKind {
    adaptive,   ///< embedded Dormand-Prince 5(4)
    fixed_rk4,  ///< classical RK4 with step max_step_us, for convergence studies
};

struct SimGrid {
    double t_start_us = -0.5;
    double t_end_us = 0.5;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step_us = 1e-2;
    std::size_t samples = 201;  ///< output samples, including both endpoints
    StepperKind stepper = StepperKind::adaptive;

    void validate() const;

    /// [t_c - n*tau, t_c + n*tau] with tau the wider of the two pulses.
    static SimGrid around(const PulseSet& pulses, double n_widths = 5.0);

    std::vector<double> sample_times() const;

    friend bool operator==(const SimGrid&, const SimGrid&) = default;
};

/// A time-dependent field program, possibly piecewise. Between consecutive breakpoints
/// the fields are smooth; `at` receives the segment index so that one-sided limits at a
/// breakpoint are well defined.
class FieldLaw {
public:
    virtual ~FieldLaw() = default;
    virtual FieldSample at(double t_us, std::size_t segment) const = 0;
    /// Sorted interior breakpoints.
    virtual std::vector<double> breakpoints() const { return {}; }

    /// Segment containing t (right-continuous).
    std::size_t segment_of(double t_us) const;
    FieldSample operator()(double t_us) const { return at(t_us, segment_of(t_us)); }
};

/// Smooth Gaussian/linear-chirp law of a single PulseSet.
class PulseLaw final : public FieldLaw {
public:
    PulseLaw(PulseSet pulses, UnitConvention units);
    FieldSample at(double t_us, std::size_t segment) const override;

    const PulseSet& pulses() const noexcept { return pulses_; }

private:
    PulseSet pulses_;
    UnitConvention units_;
};

/// Time-independent fields.
class FrozenLaw final : public FieldLaw {
public:
    explicit FrozenLaw(FieldSample sample) : sample_(sample) {}
    FieldSample at(double, std::size_t) const override { return sample_; }

private:
    FieldSample sample_;
};

}  // namespace rydarp
