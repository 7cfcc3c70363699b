#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "rydarp/dressed.hpp"
#include "rydarp/dynamics.hpp"
#include "rydarp/hamiltonian.hpp"
#include "rydarp/observables.hpp"
#include "rydarp/transfer.hpp"
#include "sink.hpp"

namespace rydarp::cli {

namespace {

struct Check {
    std::string name;
    std::function<std::pair<bool, std::string>()> run;
};

std::string fmt(const char* label, double v) {
    std::ostringstream s;
    s << label << '=' << num(v);
    return s.str();
}

}  // namespace

int run_selftest(const Overrides& o) {
    RunConfig c = resolve(o);
    const PulseSet pulses = c.pulses;
    AtomSystem three = c.atoms;
    three.levels = LevelScheme::three_level;

    std::vector<Check> checks;
    checks.push_back({"hamiltonian_hermitian", [&] {
        const Eigen::MatrixXcd h = build_product_hamiltonian(pulses, c.atoms, c.units, pulses.t_c_us);
        const double err = (h - h.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, h.cwiseAbs().maxCoeff());
        return std::pair{err < 1e-12, fmt("rel_err", err)};
    }});
    checks.push_back({"swap_symmetry", [&] {
        const Eigen::MatrixXcd h = build_product_hamiltonian(pulses, c.atoms, c.units, pulses.t_c_us);
        const Eigen::MatrixXcd s = swap_operator(ProductBasis(c.atoms.levels)).cast<std::complex<double>>();
        const double err = (h * s - s * h).cwiseAbs().maxCoeff() / std::max(1.0, h.cwiseAbs().maxCoeff());
        return std::pair{err < 1e-12, fmt("rel_err", err)};
    }});
    checks.push_back({"minus_block_decoupled", [&] {
        const Eigen::MatrixXcd m =
            product_to_molecular(build_product_hamiltonian(pulses, three, c.units, pulses.t_c_us));
        double worst = 0.0;
        for (auto p : molecular::plus_block) {
            for (auto q : molecular::minus_block) {
                worst = std::max(worst, std::abs(m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q))));
            }
        }
        return std::pair{worst < 1e-12, fmt("max_coupling", worst)};
    }});
    checks.push_back({"cubic_roots_match_eigenvalues", [&] {
        std::mt19937_64 rng(20240611);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            ReducedParams p;
            p.delta = 200.0 * u(rng);
            p.rabi_p = 800.0 * std::abs(u(rng));
            p.rabi_s = 800.0 * std::abs(u(rng));
            p.detuning_p = 5000.0 + 10000.0 * std::abs(u(rng));
            p.v_int = 100.0 * std::abs(u(rng));
            const auto h = adiabatic_eliminate(p);
            const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
            for (double e : solve_spectrum(h).energies) {
                worst = std::max(worst, std::abs(characteristic_cubic(e, p)) / (scale * scale * scale));
            }
        }
        return std::pair{worst < 1e-9, fmt("max_scaled_residual", worst)};
    }});
    checks.push_back({"density_invariants", [&] {
        const TransferResult r = transfer_efficiency(pulses, three, c.units, window_for(pulses, c.grid));
        const auto& inv = r.invariants;
        std::ostringstream s;
        s << fmt("trace_drift", inv.max_trace_drift) << ' ' << fmt("antihermitian", inv.max_antihermitian) << ' '
          << fmt("min_eig", inv.min_eigenvalue) << ' ' << fmt("rho_rr", r.efficiency);
        return std::pair{inv.within(InvariantTolerances{}), s.str()};
    }});
    checks.push_back({"closed_system_limit", [&] {
        AtomSystem closed = three;
        closed.gamma_i_mhz = 0.0;
        closed.gamma_r_khz = 0.0;
        const PulseLaw law(pulses, c.units);
        // Compares two integrations, so both run well below the default tolerance.
        SimGrid grid = window_for(pulses, c.grid);
        grid.samples = 2;
        grid.rel_tol = 1e-10;
        grid.abs_tol = 1e-12;
        const ProductBasis basis(closed.levels);
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
        psi(static_cast<Eigen::Index>(basis.index(Level::g, Level::g))) = 1.0;
        const auto pure = schrodinger_propagate(psi, law, closed, c.units, grid);
        const auto mixed = lindblad_propagate(Eigen::MatrixXcd(psi * psi.adjoint()), law, closed, c.units, grid);
        const Eigen::VectorXd a = pure.states.back().cwiseAbs2();
        const Eigen::VectorXd b = mixed.states.back().diagonal().real();
        const double err = (a - b).cwiseAbs().maxCoeff();
        return std::pair{err < 1e-6, fmt("max_population_diff", err)};
    }});
    checks.push_back({"checkpoint_roundtrip", [&] {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(9, 9);
        std::stringstream buf;
        write_checkpoint(buf, m);
        const bool same = read_checkpoint(buf) == m;
        return std::pair{same, std::string(same ? "bitwise" : "mismatch")};
    }});
    checks.push_back({"config_roundtrip", [&] {
        const bool same = parse_config(emit_config(c)) == c;
        return std::pair{same, std::string(same ? "identical" : "differs")};
    }});
    checks.push_back({"sweep_determinism", [&] {
        SweepSpec spec = c.sweep;
        spec.base = pulses;
        spec.omega_points = 2;
        spec.alpha_points = 2;
        const auto one = rydarp::run_sweep(spec, three, c.units, c.grid, 1);
        const auto many = rydarp::run_sweep(spec, three, c.units, c.grid, std::max<std::size_t>(2, resolve_workers(o, c)));
        bool same = true;
        for (std::size_t k = 0; k < one.points.size(); ++k) {
            same = same && one.points[k].efficiency == many.points[k].efficiency;
        }
        return std::pair{same, std::string(same ? "bit-identical across worker counts" : "differs")};
    }});

    Sink out(c.output.report);
    std::size_t failed = 0;
    for (const auto& check : checks) {
        bool pass = false;
        std::string detail;
        try {
            std::tie(pass, detail) = check.run();
        } catch (const std::exception& e) {
            detail = std::string("threw: ") + e.what();
        }
        failed += pass ? 0 : 1;
        *out << (pass ? "PASS " : "FAIL ") << check.name << ": " << detail << '\n';
    }
    *out << (failed == 0 ? "all properties hold" : std::to_string(failed) + " properties failed") << '\n';
    return failed == 0 ? 0 : 2;
}

}  // namespace rydarp::cli
