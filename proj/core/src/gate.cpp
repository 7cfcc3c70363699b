#include "rydarp/gate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "rydarp/errors.hpp"
#include "rydarp/observables.hpp"

namespace rydarp {

namespace {

using std::numbers::pi;

double wrap(double phase) {
    double w = std::remainder(phase, 2.0 * pi);
    return w <= -pi ? w + 2.0 * pi : w;
}

// Simpson weights times h/3 over n (even) intervals.
double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size() - 1;
    double s = f.front() + f.back();
    for (std::size_t k = 1; k < n; ++k) {
        s += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    }
    return s * h / 3.0;
}

struct SingleAtomState {
    Eigen::Vector2d vec;
    double energy;
};

// Reduced single-atom Hamiltonian over (|g>, |r>) after eliminating |i>.
Eigen::Matrix2d single_atom_reduced(const FieldSample& f) {
    if (f.detuning_p == 0.0) {
        throw DomainError("adiabatic elimination undefined at zero one-photon detuning");
    }
    const double omega = two_photon_rabi(f.rabi_p, f.rabi_s, f.detuning_p);
    Eigen::Matrix2d h;
    h << -f.rabi_p * f.rabi_p / f.detuning_p, -omega, -omega,
        f.two_photon_detuning - f.rabi_s * f.rabi_s / f.detuning_p;
    return h;
}

}  // namespace

std::string_view to_string(GateVariant v) noexcept {
    return v == GateVariant::antisymmetric ? "antisymmetric" : "symmetric";
}

void GateProtocol::validate() const {
    if (!std::isfinite(boundary_us)) {
        throw ValidationError("gate boundary T must be finite");
    }
    if (dwell_us && !(std::isfinite(*dwell_us) && *dwell_us >= 0.0)) {
        throw ValidationError("gate dwell t_c - T must be finite and non-negative");
    }
    if (!(padding_widths > 0.0) || !std::isfinite(padding_widths)) {
        throw ValidationError("gate padding must be positive");
    }
}

double GateProtocol::dwell() const {
    if (!dwell_us) {
        throw ValidationError("gate delay not set: calibrate first or pass an explicit dwell");
    }
    return *dwell_us;
}

double GateProtocol::window_start(const PulseSet& pulses) const {
    return boundary_us - dwell() - padding_widths * pulses.max_tau_us();
}

double GateProtocol::window_end(const PulseSet& pulses) const {
    return boundary_us + dwell() + padding_widths * pulses.max_tau_us();
}

GateLaw::GateLaw(const PulseSet& pulses, const GateProtocol& protocol, const UnitConvention& units)
    : step_one_(pulses), variant_(protocol.variant), boundary_(protocol.boundary_us), units_(units) {
    protocol.validate();
    step_one_.t_c_us = protocol.boundary_us - protocol.dwell();
    step_one_.validate();
}

FieldSample GateLaw::at(double t_us, std::size_t segment) const {
    if (segment == 0) {
        return step_one_.sample(t_us, units_);
    }
    FieldSample f = step_one_.sample(2.0 * boundary_ - t_us, units_);
    if (variant_ == GateVariant::antisymmetric) {
        f.detuning_p = -f.detuning_p;
        f.detuning_s = -f.detuning_s;
        f.two_photon_detuning = -f.two_photon_detuning;
    }
    return f;
}

PhaseResult phase_accumulation(const GateProtocol& protocol, const PulseSet& pulses, const AtomSystem& atoms,
                               const UnitConvention& units, const PhaseOptions& opts) {
    const GateLaw law(pulses, protocol, units);
    const double v_int = atoms.v_int(units);
    const std::size_t n = std::max<std::size_t>(2, opts.intervals_per_step + opts.intervals_per_step % 2);
    const double edges[3] = {protocol.window_start(pulses), protocol.boundary_us, protocol.window_end(pulses)};

    PhaseResult out;
    std::optional<DressedSpectrum> previous;
    std::size_t label = eps3;
    Eigen::Vector2d single;
    bool started = false;
    std::vector<double> pair_energy(n + 1), atom_energy(n + 1);

    for (std::size_t seg = 0; seg < 2; ++seg) {
        const double a = edges[seg];
        const double h = (edges[seg + 1] - a) / static_cast<double>(n);
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = k == n ? edges[seg + 1] : a + h * static_cast<double>(k);
            const FieldSample f = law.at(t, seg);

            auto spectrum = solve_spectrum(adiabatic_eliminate(reduced_params(f, v_int, opts.cross)), previous);
            if (spectrum.degenerate_fallback) {
                ++out.degenerate_points;
            }
            if (!started) {
                Eigen::Index best = 0;
                spectrum.vectors.row(0).cwiseAbs().maxCoeff(&best);
                label = static_cast<std::size_t>(best);
            } else {
                const double overlap = std::abs(previous->vectors.col(static_cast<Eigen::Index>(label))
                                                    .dot(spectrum.vectors.col(static_cast<Eigen::Index>(label))));
                out.min_overlap = std::min(out.min_overlap, overlap);
            }
            pair_energy[k] = spectrum.energies[label];
            previous = std::move(spectrum);

            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(single_atom_reduced(f));
            Eigen::Index pick = 0;
            if (!started) {
                es.eigenvectors().row(0).cwiseAbs().maxCoeff(&pick);
            } else {
                (es.eigenvectors().transpose() * single).cwiseAbs().maxCoeff(&pick);
            }
            single = es.eigenvectors().col(pick);
            atom_energy[k] = es.eigenvalues()(pick);
            started = true;
        }
        out.phi11 += simpson(pair_energy, h);
        out.phi01 += simpson(atom_energy, h);
    }
    out.phi10 = out.phi01;
    return out;
}

double phi11_closed_form(double v_int, double alpha, double two_photon_rabi, double x1_us, double x0_us) {
    if (alpha == 0.0) {
        throw DomainError("closed-form phase needs a nonzero chirp");
    }
    const double w2 = 4.0 * two_photon_rabi * two_photon_rabi;
    return (v_int / alpha) *
           (std::sqrt(4.0 * alpha * alpha * x1_us * x1_us + w2) - std::sqrt(4.0 * alpha * alpha * x0_us * x0_us + w2));
}

Calibration calibrate_delay(const GateProtocol& protocol, const PulseSet& pulses, const AtomSystem& atoms,
                            const UnitConvention& units, const CalibrationOptions& opts) {
    if (protocol.variant != GateVariant::antisymmetric) {
        throw ValidationError("delay calibration is defined for the antisymmetric variant only");
    }
    if (!(opts.max_dwell_us > opts.min_dwell_us) || opts.min_dwell_us < 0.0 || opts.scan_points < 2) {
        throw ValidationError("calibration scan range is empty");
    }
    const double v = atoms.v_int(units);
    const double required = v > 0.0 ? pi / (2.0 * v) : std::numeric_limits<double>::infinity();

    Calibration cal;
    auto phase_at = [&](double dwell) {
        GateProtocol p = protocol;
        p.dwell_us = dwell;
        ++cal.evaluations;
        return phase_accumulation(p, pulses, atoms, units, opts.phase).phi11;
    };

    double lo = opts.min_dwell_us;
    double f_lo = phase_at(lo) - opts.target_phase;
    for (std::size_t k = 1; k < opts.scan_points; ++k) {
        const double hi = opts.min_dwell_us + (opts.max_dwell_us - opts.min_dwell_us) * static_cast<double>(k) /
                                                  static_cast<double>(opts.scan_points - 1);
        const double f_hi = phase_at(hi) - opts.target_phase;
        const double branch_lo = std::floor(f_lo / (2.0 * pi));
        const double branch_hi = std::floor(f_hi / (2.0 * pi));
        if (branch_lo != branch_hi || f_hi == 0.0) {
            // The crossing of target + 2 pi m nearest to lo.
            const double shift = 2.0 * pi * std::max(branch_lo, branch_hi);
            auto f = [&](double d) { return phase_at(d) - opts.target_phase - shift; };
            double a = lo, b = hi;
            double fa = f_lo - shift, fb = f_hi - shift;
            if (fa * fb > 0.0) {
                lo = hi;
                f_lo = f_hi;
                continue;
            }
            double root = fa == 0.0 ? a : b;
            if (fa != 0.0 && fb != 0.0) {
                boost::uintmax_t iters = 100;
                auto bracket = boost::math::tools::toms748_solve(
                    f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(40), iters);
                root = 0.5 * (bracket.first + bracket.second);
            }
            GateProtocol p = protocol;
            p.dwell_us = root;
            cal.dwell_us = root;
            cal.delay_ns = p.delay_ns();
            cal.phases = phase_accumulation(p, pulses, atoms, units, opts.phase);
            cal.phi11 = cal.phases.phi11;
            cal.residual = wrap(cal.phi11 - opts.target_phase);
            return cal;
        }
        lo = hi;
        f_lo = f_hi;
    }
    std::ostringstream msg;
    msg << "phi11 does not reach " << opts.target_phase << " rad for dwell in [" << opts.min_dwell_us << ", "
        << opts.max_dwell_us << "] us; a step of about pi/(2 V_int) = " << required << " us is needed";
    throw CalibrationError(msg.str(), required);
}

Eigen::VectorXcd gate_input_state(const ProductBasis& basis) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (Level a : {Level::g_prime, Level::g}) {
        for (Level b : {Level::g_prime, Level::g}) {
            psi(static_cast<Eigen::Index>(basis.index(a, b))) = 0.5;
        }
    }
    return psi;
}

Eigen::VectorXcd gate_ideal_state(const ProductBasis& basis) {
    Eigen::VectorXcd psi = gate_input_state(basis);
    psi(static_cast<Eigen::Index>(basis.index(Level::g, Level::g))) = -0.5;
    return psi;
}

GateResult run_gate(const GateProtocol& protocol, const PulseSet& pulses, const AtomSystem& atoms,
                    const UnitConvention& units, const SimGrid& tmpl, const std::optional<MotionalParams>& motional,
                    const PhaseOptions& phase) {
    if (atoms.levels != LevelScheme::four_level) {
        throw ValidationError("the gate needs the four-level scheme (|g'> as qubit state |0>)");
    }
    const double dwell = protocol.dwell();
    const GateLaw law(pulses, protocol, units);
    SimGrid grid = tmpl;
    grid.t_start_us = protocol.window_start(pulses);
    grid.t_end_us = protocol.window_end(pulses);

    const ProductBasis basis(atoms.levels);
    const Eigen::VectorXcd psi0 = gate_input_state(basis);
    const Eigen::MatrixXcd rho0 = psi0 * psi0.adjoint();

    GateResult result;
    double prev_t = grid.t_start_us;
    double prev_i = 0.0, prev_r = 0.0;
    double int_i = 0.0, int_r = 0.0;
    bool first = true;
    result.invariants = lindblad_propagate(
        rho0, law, atoms, units, grid,
        [&](double t, const Eigen::MatrixXcd& rho) {
            const Populations p = populations(rho, basis);
            if (!first) {
                int_i += 0.5 * (t - prev_t) * (p.intermediate + prev_i);
                int_r += 0.5 * (t - prev_t) * (p.rydberg + prev_r);
            }
            first = false;
            prev_t = t;
            prev_i = p.intermediate;
            prev_r = p.rydberg;
            result.final_rho = rho;
        },
        {}, &result.stats);

    const Eigen::VectorXcd ideal = gate_ideal_state(basis);
    result.fidelity = (ideal.adjoint() * result.final_rho * ideal)(0).real();
    auto dyn = [&](Level a, Level b) {
        return wrap(-std::arg(coherence(result.final_rho, basis, a, b, Level::g_prime, Level::g_prime)));
    };
    result.dynamic_phi01 = dyn(Level::g_prime, Level::g);
    result.dynamic_phi10 = dyn(Level::g, Level::g_prime);
    result.dynamic_phi11 = dyn(Level::g, Level::g);
    result.phases = phase_accumulation(protocol, pulses, atoms, units, phase);
    result.dwell_us = dwell;
    result.delay_ns = protocol.delay_ns();

    result.budget.intermediate_loss = atoms.gamma_i(units) * int_i;
    result.budget.rydberg_loss = atoms.gamma_r(units) * int_r;
    result.budget.nonadiabatic_leakage =
        1.0 - result.fidelity - result.budget.intermediate_loss - result.budget.rydberg_loss;
    if (motional) {
        MotionalParams m = *motional;
        if (dwell > 0.0) {
            m.dwell_ns = us_to_ns(dwell);
        }
        result.budget.motional = motional_error(m, atoms.v_int_mhz, units);
    }
    return result;
}

}  // namespace rydarp
