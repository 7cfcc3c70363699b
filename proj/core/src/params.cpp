#include "rydarp/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

void require(bool condition, const char* message) {
    if (!condition) {
        throw ValidationError(message);
    }
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

double gaussian_rabi(double t, double peak, double t_c, double tau) {
    const double x = (t - t_c) / tau;
    return peak * std::exp(-0.5 * x * x);
}

double two_photon_rabi(double rabi_p, double rabi_s, double detuning_p) {
    if (detuning_p == 0.0) {
        throw DomainError("two-photon Rabi frequency undefined at zero one-photon detuning");
    }
    return rabi_p * rabi_s / detuning_p;
}

void PulseSet::validate() const {
    require(finite(omega0_p_mhz) && finite(omega0_s_mhz) && finite(tau_p_ns) && finite(tau_s_ns) &&
                finite(t_c_us) && finite(alpha_mhz_per_us) && finite(delta0_p_mhz) &&
                finite(delta0_s_mhz),
            "pulse parameters must be finite");
    require(tau_p_ns > 0.0 && tau_s_ns > 0.0, "pulse widths tau_p, tau_s must be positive");
    require(omega0_p_mhz >= 0.0 && omega0_s_mhz >= 0.0, "peak Rabi frequencies must be non-negative");
}

double PulseSet::max_tau_us() const noexcept { return std::max(tau_p_us(), tau_s_us()); }

double PulseSet::rabi_p(double t_us) const { return gaussian_rabi(t_us, omega0_p_mhz, t_c_us, tau_p_us()); }

double PulseSet::rabi_s(double t_us) const { return gaussian_rabi(t_us, omega0_s_mhz, t_c_us, tau_s_us()); }

double PulseSet::detuning_p(double t_us) const noexcept {
    return delta0_p_mhz + alpha_mhz_per_us * (t_us - t_c_us);
}

double PulseSet::detuning_s(double t_us) const noexcept {
    return delta0_s_mhz + alpha_mhz_per_us * (t_us - t_c_us);
}

double PulseSet::two_photon_detuning(double t_us) const noexcept {
    return delta0_p_mhz + delta0_s_mhz + 2.0 * alpha_mhz_per_us * (t_us - t_c_us);
}

FieldSample PulseSet::sample(double t_us, const UnitConvention& units) const {
    FieldSample s;
    s.rabi_p = units.from_mhz(rabi_p(t_us));
    s.rabi_s = units.from_mhz(rabi_s(t_us));
    s.detuning_p = units.from_mhz(detuning_p(t_us));
    s.detuning_s = units.from_mhz(detuning_s(t_us));
    s.two_photon_detuning = units.from_mhz(two_photon_detuning(t_us));
    return s;
}

std::string_view to_string(LevelScheme scheme) noexcept {
    return scheme == LevelScheme::three_level ? "three" : "four";
}

void AtomSystem::validate() const {
    require(finite(gamma_i_mhz) && finite(gamma_r_khz) && finite(v_int_mhz) && finite(qubit_splitting_ghz),
            "atom parameters must be finite");
    require(gamma_i_mhz >= 0.0 && gamma_r_khz >= 0.0, "decay rates must be non-negative");
}

void SimGrid::validate() const {
    require(finite(t_start_us) && finite(t_end_us), "time window must be finite");
    require(t_end_us > t_start_us, "t_end must exceed t_start");
    require(rel_tol > 0.0 && abs_tol > 0.0, "integrator tolerances must be positive");
    require(max_step_us > 0.0, "max_step must be positive");
    require(samples >= 2, "at least two output samples are required");
}

SimGrid SimGrid::around(const PulseSet& pulses, double n_widths) {
    SimGrid grid;
    const double half = n_widths * pulses.max_tau_us();
    grid.t_start_us = pulses.t_c_us - half;
    grid.t_end_us = pulses.t_c_us + half;
    return grid;
}

std::vector<double> SimGrid::sample_times() const {
    std::vector<double> times(samples);
    const double span = t_end_us - t_start_us;
    for (std::size_t k = 0; k < samples; ++k) {
        times[k] = t_start_us + span * static_cast<double>(k) / static_cast<double>(samples - 1);
    }
    times.back() = t_end_us;
    return times;
}

std::size_t FieldLaw::segment_of(double t_us) const {
    const auto bps = breakpoints();
    return static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), t_us) - bps.begin());
}

PulseLaw::PulseLaw(PulseSet pulses, UnitConvention units) : pulses_(pulses), units_(units) {
    pulses_.validate();
}

FieldSample PulseLaw::at(double t_us, std::size_t) const { return pulses_.sample(t_us, units_); }

}  // namespace rydarp
