#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "rydarp/dressed.hpp"
#include "rydarp/dynamics.hpp"
#include "rydarp/motional.hpp"
#include "rydarp/params.hpp"

namespace rydarp {

enum class GateVariant {
    antisymmetric,  ///< delta(T+t) = -delta(T-t), Delta_p flips sign in step II
    symmetric,      ///< step II is the plain time reflection of step I
};

std::string_view to_string(GateVariant v) noexcept;

/// Two-step controlled-phase protocol. Step I pulses are centred at T - dwell and step II
/// pulses at T + dwell, where dwell = t_c - T is the step duration tau_st.
struct GateProtocol {
    GateVariant variant = GateVariant::antisymmetric;
    double boundary_us = 0.0;       ///< T
    std::optional<double> dwell_us;  ///< t_c - T; unset until calibrated or given explicitly
    double padding_widths = 5.0;    ///< window extends this many pulse widths past each centre

    void validate() const;
    /// Throws ValidationError when no delay has been set.
    double dwell() const;
    double delay_ns() const { return 2.0 * us_to_ns(dwell()); }
    double window_start(const PulseSet& pulses) const;
    double window_end(const PulseSet& pulses) const;

    friend bool operator==(const GateProtocol&, const GateProtocol&) = default;
};

/// Piecewise field law of the gate with a single breakpoint at T.
///
/// `pulses` supplies the envelopes, chirp and detunings of step I; its t_c is replaced by
/// T - dwell. Step II samples step I at 2T - t and applies the variant's sign rules.
class GateLaw final : public FieldLaw {
public:
    GateLaw(const PulseSet& pulses, const GateProtocol& protocol, const UnitConvention& units);

    FieldSample at(double t_us, std::size_t segment) const override;
    std::vector<double> breakpoints() const override { return {boundary_}; }
    const PulseSet& step_one() const noexcept { return step_one_; }

private:
    PulseSet step_one_;
    GateVariant variant_;
    double boundary_;
    UnitConvention units_;
};

struct PhaseOptions {
    std::size_t intervals_per_step = 20000;  ///< Simpson intervals on each side of T (made even)
    CrossTerm cross = CrossTerm::include;

    friend bool operator==(const PhaseOptions&, const PhaseOptions&) = default;
};

struct PhaseResult {
    double phi01 = 0.0;
    double phi10 = 0.0;
    double phi11 = 0.0;
    double min_overlap = 1.0;  ///< smallest overlap of the tracked two-atom state between samples
    std::size_t degenerate_points = 0;
};

/// Accumulated dynamical phases from adiabatically followed dressed energies.
/// phi01 = phi10 integrate the single-atom state that starts in |g>; phi11 integrates the
/// reduced two-atom state that starts in |gg>. Each step is integrated separately.
PhaseResult phase_accumulation(const GateProtocol& protocol, const PulseSet& pulses, const AtomSystem& atoms,
                               const UnitConvention& units, const PhaseOptions& opts = {});

/// Constant-Rabi estimate (V/alpha)(sqrt(4 alpha^2 x1^2 + 4 Omega^2) - sqrt(4 alpha^2 x0^2 + 4 Omega^2))
/// with x1 = T + tau_st - t_c and x0 = T - t_c. All arguments in internal units.
double phi11_closed_form(double v_int, double alpha, double two_photon_rabi, double x1_us, double x0_us);

struct CalibrationOptions {
    double target_phase = std::numbers::pi;
    double min_dwell_us = 0.0;
    double max_dwell_us = 1.0;
    std::size_t scan_points = 41;
    PhaseOptions phase;

    friend bool operator==(const CalibrationOptions&, const CalibrationOptions&) = default;
};

struct Calibration {
    double dwell_us = 0.0;
    double delay_ns = 0.0;
    double phi11 = 0.0;
    double residual = 0.0;  ///< phi11 - target, reduced mod 2 pi
    std::size_t evaluations = 0;
    PhaseResult phases;
};

/// Finds the smallest dwell in the scan range with phi11 = target (mod 2 pi).
/// Throws CalibrationError when the range holds no crossing.
Calibration calibrate_delay(const GateProtocol& protocol, const PulseSet& pulses, const AtomSystem& atoms,
                            const UnitConvention& units, const CalibrationOptions& opts = {});

struct ErrorBudget {
    double intermediate_loss = 0.0;  ///< Gamma_i times the time-integrated |i> occupancy
    double rydberg_loss = 0.0;
    double nonadiabatic_leakage = 0.0;  ///< 1 - F - losses
    std::optional<double> motional;
};

struct GateResult {
    double fidelity = 0.0;
    double phi00 = 0.0;
    PhaseResult phases;
    /// -arg <xy|rho|00> of the propagated state, wrapped to (-pi, pi].
    double dynamic_phi01 = 0.0;
    double dynamic_phi10 = 0.0;
    double dynamic_phi11 = 0.0;
    double dwell_us = 0.0;
    double delay_ns = 0.0;
    Eigen::MatrixXcd final_rho;
    ErrorBudget budget;
    InvariantReport invariants;
    IntegratorStats stats;
};

/// (|00> + |01> + |10> + |11>)/2 with |0> = |g'>, |1> = |g>.
Eigen::VectorXcd gate_input_state(const ProductBasis& basis);
/// (|00> + |01> + |10> - |11>)/2.
Eigen::VectorXcd gate_ideal_state(const ProductBasis& basis);

/// Full density-matrix gate. Requires the four-level scheme and a set dwell.
/// `tmpl` provides tolerances, stepper and sample count; the window comes from the protocol.
GateResult run_gate(const GateProtocol& protocol, const PulseSet& pulses, const AtomSystem& atoms,
                    const UnitConvention& units, const SimGrid& tmpl,
                    const std::optional<MotionalParams>& motional = std::nullopt, const PhaseOptions& phase = {});

}  // namespace rydarp
