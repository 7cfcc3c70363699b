#include "rydarp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

// Runs one integrator per smooth segment of the law so that the right-hand side never
// straddles a breakpoint. `make_rhs(segment)` returns the derivative functor.
template <class State, class MakeRhs, class Project, class Emit>
IntegratorStats drive(const FieldLaw& law, const SimGrid& grid, State& y, MakeRhs make_rhs, Project project,
                      Emit emit) {
    grid.validate();
    const auto times = grid.sample_times();
    std::vector<double> cuts{grid.t_start_us};
    for (double bp : law.breakpoints()) {
        if (bp > grid.t_start_us && bp < grid.t_end_us) {
            cuts.push_back(bp);
        }
    }
    cuts.push_back(grid.t_end_us);

    emit(times.front(), y);
    std::size_t next = 1;
    IntegratorStats total;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s];
        const double b = cuts[s + 1];
        std::vector<double> stops;
        std::vector<std::ptrdiff_t> which;
        while (next < times.size() && times[next] < b) {
            stops.push_back(times[next]);
            which.push_back(static_cast<std::ptrdiff_t>(next++));
        }
        stops.push_back(b);
        if (next < times.size() && times[next] == b) {
            which.push_back(static_cast<std::ptrdiff_t>(next++));
        } else {
            which.push_back(-1);
        }
        auto rk = make_runge_kutta<State>(grid, make_rhs(law.segment_of(0.5 * (a + b))), project);
        rk.run(a, y, stops, [&](std::size_t k, const State& st) {
            if (which[k] >= 0) {
                emit(times[static_cast<std::size_t>(which[k])], st);
            }
        });
        total += rk.stats();
    }
    return total;
}

void require_state(bool ok, const char* message) {
    if (!ok) {
        throw ValidationError(message);
    }
}

}  // namespace

Eigen::MatrixXd Collapse::matrix(std::size_t dim) const {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& [to, from] : transitions) {
        l(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) = 1.0;
    }
    return l;
}

CollapseSet make_collapse_set(const ProductBasis& basis, const AtomSystem& atoms, const UnitConvention& units) {
    struct Channel {
        Level from, to;
        double rate;
        const char* name;
    };
    const Channel channels[] = {
        {Level::i, Level::g, atoms.gamma_i(units), "sigma_ig"},
        {Level::r, Level::i, atoms.gamma_r(units), "sigma_ri"},
    };
    CollapseSet set;
    for (int atom = 1; atom <= 2; ++atom) {
        for (const auto& ch : channels) {
            Collapse c;
            c.name = std::string(ch.name) + "^" + std::to_string(atom);
            c.rate = ch.rate;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                auto [a, b] = basis.state(k);
                Level& mine = atom == 1 ? a : b;
                if (mine == ch.from) {
                    mine = ch.to;
                    c.transitions.emplace_back(basis.index(a, b), k);
                }
            }
            set.push_back(std::move(c));
        }
    }
    return set;
}

bool InvariantReport::within(const InvariantTolerances& tol) const {
    return max_trace_drift < tol.trace && max_antihermitian < tol.hermiticity && min_eigenvalue >= -tol.positivity;
}

void InvariantReport::merge(const InvariantReport& other) {
    max_trace_drift = std::max(max_trace_drift, other.max_trace_drift);
    max_antihermitian = std::max(max_antihermitian, other.max_antihermitian);
    min_eigenvalue = std::min(min_eigenvalue, other.min_eigenvalue);
}

InvariantReport inspect_density(const Eigen::MatrixXcd& rho) {
    InvariantReport r;
    r.max_trace_drift = std::abs(rho.trace() - cd{1.0, 0.0});
    r.max_antihermitian = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    return r;
}

LindbladGenerator::LindbladGenerator(const AtomSystem& atoms, const UnitConvention& units)
    : hamiltonian_(atoms, units), collapses_(make_collapse_set(hamiltonian_.basis(), atoms, units)) {
    loss_ = Eigen::VectorXd::Zero(hamiltonian_.dim());
    for (const auto& c : collapses_) {
        for (const auto& tr : c.transitions) {
            loss_(static_cast<Eigen::Index>(tr.second)) += c.rate;
        }
    }
}

void LindbladGenerator::operator()(const FieldSample& fields, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& drho) {
    hamiltonian_.assemble(fields, h_eff_);
    h_eff_.diagonal() -= (0.5 * I) * loss_.cast<cd>();
    drho.noalias() = -I * (h_eff_ * rho);
    drho.noalias() += I * (rho * h_eff_.adjoint());
    for (const auto& c : collapses_) {
        if (c.rate == 0.0) {
            continue;
        }
        for (const auto& [m, src_m] : c.transitions) {
            for (const auto& [n, src_n] : c.transitions) {
                drho(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) +=
                    c.rate * rho(static_cast<Eigen::Index>(src_m), static_cast<Eigen::Index>(src_n));
            }
        }
    }
}

IntegratorStats schrodinger_propagate(const Eigen::VectorXcd& psi0, const FieldLaw& law, const AtomSystem& atoms,
                                      const UnitConvention& units, const SimGrid& grid, const StateObserver& observe,
                                      PropagationBasis basis) {
    atoms.validate();
    TwoAtomHamiltonian ham(atoms, units);
    require_state(psi0.size() == ham.dim(), "initial state dimension does not match the basis");
    require_state(std::abs(psi0.squaredNorm() - 1.0) < 1e-10, "initial state must be normalised");
    const bool molecular_basis = basis == PropagationBasis::molecular;
    if (molecular_basis) {
        require_state(atoms.levels == LevelScheme::three_level, "molecular basis needs the three-level scheme");
    }
    const Eigen::MatrixXcd u = molecular_basis ? Eigen::MatrixXcd(molecular::transform().cast<cd>())
                                               : Eigen::MatrixXcd();

    Eigen::VectorXcd psi = psi0;
    auto make_rhs = [&](std::size_t segment) {
        return [&, segment, h = Eigen::MatrixXcd()](double t, const Eigen::VectorXcd& y,
                                                   Eigen::VectorXcd& dy) mutable {
            ham.assemble(law.at(t, segment), h);
            if (molecular_basis) {
                h = (u * h * u.transpose()).eval();
            }
            dy.noalias() = -I * (h * y);
        };
    };
    return drive(law, grid, psi, make_rhs, [](Eigen::VectorXcd&) {},
                 [&](double t, const Eigen::VectorXcd& y) { observe(t, y); });
}

StateTrajectory schrodinger_propagate(const Eigen::VectorXcd& psi0, const FieldLaw& law, const AtomSystem& atoms,
                                      const UnitConvention& units, const SimGrid& grid, PropagationBasis basis) {
    StateTrajectory out;
    out.times.reserve(grid.samples);
    out.states.reserve(grid.samples);
    out.stats = schrodinger_propagate(
        psi0, law, atoms, units, grid,
        [&](double t, const Eigen::VectorXcd& psi) {
            out.times.push_back(t);
            out.states.push_back(psi);
        },
        basis);
    return out;
}

InvariantReport lindblad_propagate(const Eigen::MatrixXcd& rho0, const FieldLaw& law, const AtomSystem& atoms,
                                   const UnitConvention& units, const SimGrid& grid, const DensityObserver& observe,
                                   const LindbladOptions& opts, IntegratorStats* stats) {
    atoms.validate();
    LindbladGenerator generator(atoms, units);
    const auto dim = static_cast<Eigen::Index>(generator.basis().size());
    require_state(rho0.rows() == dim && rho0.cols() == dim, "initial density matrix dimension does not match the basis");
    const InvariantReport initial = inspect_density(rho0);
    require_state(initial.within(InvariantTolerances{1e-10, 1e-12, 1e-12}),
                  "initial density matrix must be Hermitian, unit trace and positive semidefinite");

    Eigen::MatrixXcd rho = rho0;
    InvariantReport report = initial;
    auto make_rhs = [&](std::size_t segment) {
        return [&, segment](double t, const Eigen::MatrixXcd& y, Eigen::MatrixXcd& dy) {
            generator(law.at(t, segment), y, dy);
        };
    };
    auto project = [&](Eigen::MatrixXcd& y) {
        if (opts.symmetrize) {
            y = (0.5 * (y + y.adjoint())).eval();
        }
    };
    auto emit = [&](double t, const Eigen::MatrixXcd& y) {
        if (opts.check_invariants) {
            const InvariantReport here = inspect_density(y);
            report.merge(here);
            if (!here.within(opts.tolerances)) {
                std::ostringstream msg;
                msg << "density-matrix invariant violated at t=" << t << " us: trace drift " << here.max_trace_drift
                    << ", anti-Hermitian part " << here.max_antihermitian << ", min eigenvalue "
                    << here.min_eigenvalue << "; tighten the integrator tolerances";
                throw NumericalError(msg.str());
            }
        }
        if (observe) {
            observe(t, y);
        }
    };
    const IntegratorStats s = drive(law, grid, rho, make_rhs, project, emit);
    if (stats != nullptr) {
        *stats = s;
    }
    return report;
}

DensityTrajectory lindblad_propagate(const Eigen::MatrixXcd& rho0, const FieldLaw& law, const AtomSystem& atoms,
                                     const UnitConvention& units, const SimGrid& grid, const LindbladOptions& opts) {
    DensityTrajectory out;
    out.times.reserve(grid.samples);
    out.states.reserve(grid.samples);
    out.invariants = lindblad_propagate(
        rho0, law, atoms, units, grid,
        [&](double t, const Eigen::MatrixXcd& rho) {
            out.times.push_back(t);
            out.states.push_back(rho);
        },
        opts, &out.stats);
    return out;
}

}  // namespace rydarp
