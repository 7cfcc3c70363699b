#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

#include "rydarp/dressed.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/gate.hpp"
#include "rydarp/hamiltonian.hpp"
#include "rydarp/motional.hpp"
#include "rydarp/observables.hpp"
#include "rydarp/transfer.hpp"
#include "sink.hpp"

namespace rydarp::cli {

namespace {

using nlohmann::json;

void dump_hamiltonian(const FieldLaw& law, const RunConfig& c, double t_us, std::ostream& out) {
    const TwoAtomHamiltonian ham(c.atoms, c.units);
    const Eigen::MatrixXcd h = ham(law(t_us));
    out << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        for (Eigen::Index col = 0; col < h.cols(); ++col) {
            out << r << ',' << col << ',' << num(h(r, col).real()) << ',' << num(h(r, col).imag()) << '\n';
        }
    }
}

Eigen::MatrixXcd ground_state(const ProductBasis& basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    const auto gg = static_cast<Eigen::Index>(basis.index(Level::g, Level::g));
    rho(gg, gg) = 1.0;
    return rho;
}

json invariants_json(const InvariantReport& r) {
    return {{"max_trace_drift", r.max_trace_drift},
            {"max_antihermitian", r.max_antihermitian},
            {"min_eigenvalue", r.min_eigenvalue}};
}

}  // namespace

RunConfig resolve(const Overrides& o) {
    RunConfig c = o.config_path.empty() ? parse_config("{}") : load_config(o.config_path);
    if (o.convention) c.units = parse_convention(*o.convention);
    if (o.v_int_mhz) c.atoms.v_int_mhz = *o.v_int_mhz;
    if (o.gamma_i_mhz) c.atoms.gamma_i_mhz = *o.gamma_i_mhz;
    if (o.gamma_r_khz) c.atoms.gamma_r_khz = *o.gamma_r_khz;
    if (o.samples) c.grid.samples = *o.samples;
    if (o.dwell_us) c.gate.dwell_us = *o.dwell_us;
    if (o.dwell_ns) c.motional.dwell_ns = *o.dwell_ns;
    if (!o.output.empty()) {
        c.output.csv = o.output;
        c.output.report = o.output;
    }
    if (!o.checkpoint.empty()) c.output.checkpoint = o.checkpoint;
    c.validate();
    return c;
}

std::size_t resolve_workers(const Overrides& o, const RunConfig& c) {
    if (o.workers) {
        return *o.workers;
    }
    if (const char* env = std::getenv("RYDARP_WORKERS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v <= 0) {
            throw ValidationError("RYDARP_WORKERS must be a positive integer");
        }
        return static_cast<std::size_t>(v);
    }
    if (c.workers) {
        return *c.workers;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_dressed(const Overrides& o) {
    const RunConfig c = resolve(o);
    const PulseLaw law(c.pulses, c.units);
    if (o.dump_t_us) {
        Sink dump(o.output.empty() ? c.output.hamiltonian_dump : o.output);
        dump_hamiltonian(law, c, *o.dump_t_us, *dump);
        return 0;
    }
    Sink out(c.output.csv);
    const SimGrid grid = c.effective_grid();
    const SpectrumTrace trace = trace_spectrum(law, c.atoms, c.units, grid.t_start_us, grid.t_end_us);
    for (const auto& d : trace.diagnostics) {
        std::cerr << "note: " << d << "\n";
    }
    const double f = c.units.angular_factor();
    const std::size_t rows = std::max<std::size_t>(2, c.grid.samples);
    const std::size_t stride = std::max<std::size_t>(1, (trace.samples.size() - 1) / (rows - 1));

    std::vector<std::size_t> rows_out;
    for (std::size_t k = 0; k < trace.samples.size(); k += stride) {
        rows_out.push_back(k);
    }
    if (rows_out.back() + 1 != trace.samples.size()) {
        rows_out.push_back(trace.samples.size() - 1);
    }

    *out << "t_us,delta_mhz,eps1_mhz,eps2_mhz,eps3_mhz,c2_gg,c2_plus_rg,c2_rr,c3_gg,c3_plus_rg,c3_rr\n";
    for (std::size_t k : rows_out) {
        const auto& s = trace.samples[k];
        const auto& sp = s.spectrum;
        *out << num(s.t_us) << ',' << num(s.delta / f);
        for (double e : sp.energies) {
            *out << ',' << num(e / f);
        }
        for (DressedLabel label : {eps2, eps3}) {
            const Eigen::Vector3d v = sp.state(label);
            *out << ',' << num(v(0)) << ',' << num(v(1)) << ',' << num(v(2));
        }
        *out << '\n';
    }
    return 0;
}

int run_evolve(const Overrides& o) {
    const RunConfig c = resolve(o);
    const PulseLaw law(c.pulses, c.units);
    if (o.dump_t_us) {
        Sink dump(o.output.empty() ? c.output.hamiltonian_dump : o.output);
        dump_hamiltonian(law, c, *o.dump_t_us, *dump);
        return 0;
    }
    Sink out(c.output.csv);
    const ProductBasis basis(c.atoms.levels);
    *out << "t_us,rho_gg,rho_plus_rg,rho_rr,rho_ii,trace\n";
    Eigen::MatrixXcd last;
    lindblad_propagate(ground_state(basis), law, c.atoms, c.units, c.effective_grid(),
                       [&](double t, const Eigen::MatrixXcd& rho) {
                           const Populations p = populations(rho, basis);
                           *out << num(t) << ',' << num(p.gg) << ',' << num(p.plus_rg) << ',' << num(p.rr) << ','
                                << num(p.ii) << ',' << num(p.trace) << '\n';
                           last = rho;
                       });
    if (!c.output.checkpoint.empty()) {
        write_checkpoint(std::filesystem::path(c.output.checkpoint), last);
    }
    return 0;
}

int run_sweep(const Overrides& o) {
    const RunConfig c = resolve(o);
    SweepSpec spec = c.sweep;
    spec.base = c.pulses;
    const SweepResult result =
        rydarp::run_sweep(spec, c.atoms, c.units, c.grid, resolve_workers(o, c));
    Sink out(c.output.csv);
    *out << "omega,alpha,efficiency,diag_adiab1,diag_adiab2\n";
    for (const auto& p : result.points) {
        *out << num(p.omega_mhz) << ',' << num(p.alpha_mhz_per_us) << ',' << num(p.efficiency) << ','
             << num(p.diagnostics.rabi_sq_over_2alpha(c.units)) << ',' << num(p.diagnostics.two_alpha_tau_sq(c.units))
             << '\n';
        if (p.error) {
            std::cerr << "warning: point omega=" << p.omega_mhz << " alpha=" << p.alpha_mhz_per_us
                      << " failed: " << *p.error << "\n";
        }
    }
    return 0;
}

int run_gate(const Overrides& o) {
    const RunConfig c = resolve(o);
    GateProtocol protocol = c.gate;
    std::optional<Calibration> cal;
    if (!protocol.dwell_us && !o.no_calibrate) {
        cal = calibrate_delay(protocol, c.pulses, c.atoms, c.units, c.calibration);
        protocol.dwell_us = cal->dwell_us;
    }
    if (o.dump_t_us) {
        const GateLaw law(c.pulses, protocol, c.units);
        Sink dump(o.output.empty() ? c.output.hamiltonian_dump : o.output);
        dump_hamiltonian(law, c, *o.dump_t_us, *dump);
        return 0;
    }
    Sink out(c.output.report);
    const GateResult r =
        rydarp::run_gate(protocol, c.pulses, c.atoms, c.units, c.grid, c.motional, c.calibration.phase);
    if (!c.output.checkpoint.empty()) {
        write_checkpoint(std::filesystem::path(c.output.checkpoint), r.final_rho);
    }

    json report;
    report["fidelity"] = r.fidelity;
    report["angular_convention"] = std::string(to_string(c.units));
    report["v_int_mhz"] = c.atoms.v_int_mhz;
    report["variant"] = std::string(to_string(protocol.variant));
    report["delay_ns"] = r.delay_ns;
    report["dwell_us"] = r.dwell_us;
    report["calibrated"] = cal.has_value();
    if (cal) {
        report["calibration_residual"] = cal->residual;
    }
    report["phases"] = {{"phi00", r.phi00}, {"phi01", r.phases.phi01}, {"phi10", r.phases.phi10},
                        {"phi11", r.phases.phi11}};
    report["dynamic_phases"] = {{"phi01", r.dynamic_phi01}, {"phi10", r.dynamic_phi10}, {"phi11", r.dynamic_phi11}};
    json budget = {{"intermediate_loss", r.budget.intermediate_loss},
                   {"rydberg_loss", r.budget.rydberg_loss},
                   {"nonadiabatic_leakage", r.budget.nonadiabatic_leakage}};
    if (r.budget.motional) {
        budget["motional"] = *r.budget.motional;
    }
    report["error_budget"] = budget;
    report["invariants"] = invariants_json(r.invariants);
    *out << report.dump(2) << '\n';
    return 0;
}

int run_calibrate(const Overrides& o) {
    const RunConfig c = resolve(o);
    const Calibration cal = calibrate_delay(c.gate, c.pulses, c.atoms, c.units, c.calibration);
    json report = {{"dwell_us", cal.dwell_us},       {"delay_ns", cal.delay_ns},
                   {"phi11", cal.phi11},             {"residual", cal.residual},
                   {"phi01", cal.phases.phi01},      {"phi10", cal.phases.phi10},
                   {"evaluations", cal.evaluations}, {"min_overlap", cal.phases.min_overlap}};
    Sink out(c.output.report);
    *out << report.dump(2) << '\n';
    return 0;
}

int run_motional(const Overrides& o) {
    const RunConfig c = resolve(o);
    const double p = motional_error(c.motional, c.atoms.v_int_mhz, c.units);
    json report = {{"probability", p},
                   {"v_int_mhz", c.atoms.v_int_mhz},
                   {"r_um", c.motional.r_um},
                   {"omega0_khz", c.motional.omega0_khz},
                   {"delta_r_nm", c.motional.delta_r_nm},
                   {"dwell_ns", c.motional.dwell_ns},
                   {"angular_convention", std::string(to_string(c.units))}};
    Sink out(c.output.report);
    *out << report.dump(2) << '\n';
    return 0;
}

}  // namespace rydarp::cli
