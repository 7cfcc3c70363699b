#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rydarp/errors.hpp"

namespace {

enum Exit { ok = 0, invalid = 1, numerical = 2 };

void add_common(CLI::App* cmd, rydarp::cli::Overrides& o) {
    cmd->add_option("-c,--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--convention", o.convention, "angular convention: plain or two_pi");
    cmd->add_option("--vint-mhz", o.v_int_mhz, "interaction strength V_int (MHz)");
    cmd->add_option("--gamma-i-mhz", o.gamma_i_mhz, "intermediate-state decay rate (MHz)");
    cmd->add_option("--gamma-r-khz", o.gamma_r_khz, "Rydberg decay rate (kHz)");
    cmd->add_option("-o,--output", o.output, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chirped two-photon excitation of interacting Rydberg atom pairs"};
    app.require_subcommand(1);
    rydarp::cli::Overrides o;

    auto* dressed = app.add_subcommand("dressed", "adiabatically tracked dressed-state energies and components");
    add_common(dressed, o);
    dressed->add_option("--samples", o.samples, "approximate number of output rows");
    dressed->add_option("--dump-hamiltonian", o.dump_t_us, "write H(t) at this time (us) as CSV and exit");

    auto* evolve = app.add_subcommand("evolve", "density-matrix evolution from |gg>");
    add_common(evolve, o);
    evolve->add_option("--samples", o.samples, "output samples including both ends");
    evolve->add_option("--checkpoint", o.checkpoint, "write the final density matrix here");
    evolve->add_option("--dump-hamiltonian", o.dump_t_us, "write H(t) at this time (us) as CSV and exit");

    auto* sweep = app.add_subcommand("sweep", "transfer efficiency over two-photon Rabi frequency and chirp");
    add_common(sweep, o);
    sweep->add_option("-j,--workers", o.workers, "worker threads (env RYDARP_WORKERS)")->check(CLI::PositiveNumber);

    auto* gate = app.add_subcommand("gate", "two-step controlled-phase gate with fidelity report");
    add_common(gate, o);
    gate->add_option("--dwell-us", o.dwell_us, "explicit step duration t_c - T (us)");
    gate->add_flag("--no-calibrate", o.no_calibrate, "refuse to run without an explicit delay");
    gate->add_option("--samples", o.samples, "output samples used for the loss integrals");
    gate->add_option("--checkpoint", o.checkpoint, "write the final density matrix here");
    gate->add_option("--dump-hamiltonian", o.dump_t_us, "write H(t) at this time (us) as CSV and exit");

    auto* calibrate = app.add_subcommand("calibrate", "delay giving phi11 = pi on the dressed-energy integral");
    add_common(calibrate, o);

    auto* motional = app.add_subcommand("motional", "motional excitation probability during the dwell");
    add_common(motional, o);
    motional->add_option("--dwell-ns", o.dwell_ns, "dwell t_c - T (ns)");

    auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
    add_common(selftest, o);
    selftest->add_option("-j,--workers", o.workers, "worker threads for the determinism check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalid;
    }

    try {
        using namespace rydarp::cli;
        if (dressed->parsed()) return run_dressed(o);
        if (evolve->parsed()) return run_evolve(o);
        if (sweep->parsed()) return run_sweep(o);
        if (gate->parsed()) return run_gate(o);
        if (calibrate->parsed()) return run_calibrate(o);
        if (motional->parsed()) return run_motional(o);
        if (selftest->parsed()) return run_selftest(o);
    } catch (const rydarp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    } catch (const rydarp::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    } catch (const rydarp::CalibrationError& e) {
        std::cerr << "calibration failed: " << e.what() << "\n";
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical;
    }
    return invalid;
}
