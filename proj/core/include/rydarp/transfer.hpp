#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rydarp/dynamics.hpp"
#include "rydarp/observables.hpp"
#include "rydarp/params.hpp"

namespace rydarp {

/// Peak-field adiabaticity measures Omega^2 / (2 alpha) and 2 alpha tau^2, with
/// Omega = Omega_0p Omega_0S / Delta_0p, evaluated in both unit conventions.
struct Adiabaticity {
    double rabi_sq_over_2alpha_plain = 0.0;
    double rabi_sq_over_2alpha_two_pi = 0.0;
    double two_alpha_tau_sq_plain = 0.0;
    double two_alpha_tau_sq_two_pi = 0.0;

    double rabi_sq_over_2alpha(const UnitConvention& u) const;
    double two_alpha_tau_sq(const UnitConvention& u) const;
};

Adiabaticity adiabaticity(const PulseSet& pulses);

struct TransferResult {
    double efficiency = 0.0;  ///< final rho_rr
    Populations final_populations;
    Adiabaticity diagnostics;
    IntegratorStats stats;
    InvariantReport invariants;
};

/// Lindblad propagation from |gg><gg| over `grid`; returns the final double-Rydberg population.
TransferResult transfer_efficiency(const PulseSet& pulses, const AtomSystem& atoms, const UnitConvention& units,
                                   const SimGrid& grid);

/// Two-axis grid over two-photon Rabi frequency and chirp rate.
///
/// Each point scales Omega_0p = Omega_0S = sqrt(Omega |Delta_0p|) at the base one-photon
/// detuning and replaces the chirp; everything else comes from `base`.
struct SweepSpec {
    PulseSet base;
    double omega_min_mhz = 5.0;
    double omega_max_mhz = 30.0;
    std::size_t omega_points = 8;
    double alpha_min_mhz_per_us = 50.0;
    double alpha_max_mhz_per_us = 600.0;
    std::size_t alpha_points = 8;

    void validate() const;
    /// Grid axes only; the base pulses are checked when a sweep runs.
    void validate_axes() const;
    std::vector<double> omegas() const;
    std::vector<double> alphas() const;
    PulseSet point(double omega_mhz, double alpha_mhz_per_us) const;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct SweepPoint {
    double omega_mhz = 0.0;
    double alpha_mhz_per_us = 0.0;
    double efficiency = 0.0;
    Adiabaticity diagnostics;
    std::optional<std::string> error;
};

struct SweepResult {
    std::size_t omega_points = 0;
    std::size_t alpha_points = 0;
    std::vector<SweepPoint> points;  ///< omega-major

    const SweepPoint& at(std::size_t omega_index, std::size_t alpha_index) const {
        return points.at(omega_index * alpha_points + alpha_index);
    }
    std::size_t failures() const;
};

/// Window [t_c - n tau, t_c + n tau] with the tolerances and stepper of `tmpl`.
SimGrid window_for(const PulseSet& pulses, const SimGrid& tmpl, double n_widths = 5.0);

/// Runs every grid point on `workers` threads (0 picks the hardware concurrency).
/// Results are stored by grid position, so the output does not depend on scheduling.
/// Failures are recorded per point.
SweepResult run_sweep(const SweepSpec& spec, const AtomSystem& atoms, const UnitConvention& units,
                      const SimGrid& tmpl, std::size_t workers = 0);

/// Applies `task(k)` for k in [0, n) on a pool of worker threads.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task);

}  // namespace rydarp
