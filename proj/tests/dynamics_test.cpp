#include <cmath>
#include <cstring>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rydarp/dynamics.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/hamiltonian.hpp"
#include "rydarp/observables.hpp"

using namespace rydarp;

namespace {

const UnitConvention kTwoPi = UnitConvention::two_pi();

Eigen::Index idx(const ProductBasis& b, Level x, Level y) { return static_cast<Eigen::Index>(b.index(x, y)); }

Eigen::MatrixXcd projector(const ProductBasis& b, Level x, Level y) {
    const auto n = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
    rho(idx(b, x, y), idx(b, x, y)) = 1.0;
    return rho;
}

SimGrid window(const PulseSet& p, double rel, double abs, std::size_t samples = 2) {
    SimGrid g = SimGrid::around(p, 5.0);
    g.rel_tol = rel;
    g.abs_tol = abs;
    g.samples = samples;
    return g;
}

FieldSample peak_fields() {
    FieldSample f = fixtures::dressed_pulses().sample(0.0, kTwoPi);
    f.two_photon_detuning = kTwoPi.from_mhz(4.0);
    return f;
}

}  // namespace

TEST(Collapse, ChannelsAndTargets) {
    AtomSystem four = fixtures::three_level(0.0);
    four.levels = LevelScheme::four_level;
    const ProductBasis b(four.levels);
    const CollapseSet set = make_collapse_set(b, four, kTwoPi);
    ASSERT_EQ(set.size(), 4u);
    for (const auto& c : set) {
        for (const auto& [to, from] : c.transitions) {
            const auto [t1, t2] = b.state(to);
            const auto [f1, f2] = b.state(from);
            // exactly one atom changes level, and never into |g'>
            EXPECT_NE(t1 != f1, t2 != f2);
            EXPECT_NE(t1 != f1 ? t1 : t2, Level::g_prime);
        }
        EXPECT_EQ(c.transitions.size(), 4u);
    }
    const Eigen::MatrixXd m = set.front().matrix(b.size());
    EXPECT_EQ(m.sum(), 4.0);
}

TEST(Observables, PopulationsOfPureStates) {
    const ProductBasis b(LevelScheme::three_level);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(9);
    psi(idx(b, Level::r, Level::g)) = M_SQRT1_2;
    psi(idx(b, Level::g, Level::r)) = M_SQRT1_2;
    const Populations p = populations(psi, b);
    EXPECT_NEAR(p.plus_rg, 1.0, 1e-15);
    EXPECT_NEAR(p.minus_rg, 0.0, 1e-15);
    EXPECT_NEAR(p.rydberg, 1.0, 1e-15);
    EXPECT_NEAR(p.trace, 1.0, 1e-15);
    const Populations q = populations(projector(b, Level::i, Level::i), b);
    EXPECT_EQ(q.ii, 1.0);
    EXPECT_EQ(q.intermediate, 2.0);
    const Eigen::MatrixXcd mol = to_molecular(Eigen::MatrixXcd(psi * psi.adjoint()));
    EXPECT_NEAR(mol(molecular::plus_rg, molecular::plus_rg).real(), 1.0, 1e-15);
}

TEST(Checkpoint, LayoutAndRoundTrip) {
    Eigen::MatrixXcd m(2, 2);
    m << std::complex<double>(1.0, 2.0), std::complex<double>(3.0, 4.0), std::complex<double>(5.0, 6.0),
        std::complex<double>(7.0, 8.0);
    std::stringstream buf;
    write_checkpoint(buf, m);
    const std::string bytes = buf.str();
    ASSERT_EQ(bytes.size(), 8u + 4u * 16u);
    EXPECT_EQ(static_cast<unsigned char>(bytes[0]), 2u);
    for (int k = 1; k < 8; ++k) {
        EXPECT_EQ(bytes[static_cast<std::size_t>(k)], 0);
    }
    // row-major: second pair is (0,1) = 3 + 4i
    double re = 0.0;
    std::memcpy(&re, bytes.data() + 8 + 16, sizeof re);
    EXPECT_EQ(re, 3.0);
    EXPECT_EQ(read_checkpoint(buf), m);
}

TEST(Checkpoint, RejectsTruncatedInput) {
    std::stringstream buf;
    write_checkpoint(buf, Eigen::MatrixXcd::Identity(3, 3));
    std::string bytes = buf.str();
    bytes.resize(bytes.size() - 5);
    std::stringstream cut(bytes);
    EXPECT_THROW(read_checkpoint(cut), ValidationError);
}

TEST(Invariants, Inspect) {
    const ProductBasis b(LevelScheme::three_level);
    Eigen::MatrixXcd rho = projector(b, Level::g, Level::g);
    auto r = inspect_density(rho);
    EXPECT_EQ(r.max_trace_drift, 0.0);
    EXPECT_TRUE(r.within(InvariantTolerances{}));
    rho(0, 1) = 0.1;
    r = inspect_density(rho);
    EXPECT_NEAR(r.max_antihermitian, 0.1, 1e-15);
    EXPECT_LT(r.min_eigenvalue, 0.0);
    EXPECT_FALSE(r.within(InvariantTolerances{}));
}

TEST(Schrodinger, StationaryWithoutFields) {
    const AtomSystem atoms = fixtures::three_level(5.0);
    const ProductBasis b(atoms.levels);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(9);
    psi(idx(b, Level::r, Level::r)) = 1.0;
    SimGrid g;
    g.samples = 3;
    const auto traj = schrodinger_propagate(psi, FrozenLaw(FieldSample{}), atoms, kTwoPi, g);
    const std::complex<double> expected = std::exp(std::complex<double>(0.0, -atoms.v_int(kTwoPi) * 1.0));
    EXPECT_LT(std::abs(traj.states.back()(idx(b, Level::r, Level::r)) - expected), 1e-6);
}

TEST(Schrodinger, RejectsUnnormalisedState) {
    const AtomSystem atoms = fixtures::three_level(5.0);
    const Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(9, 1.0);
    EXPECT_THROW(schrodinger_propagate(psi, FrozenLaw(FieldSample{}), atoms, kTwoPi, SimGrid{}), ValidationError);
}

TEST(Schrodinger, MinusSubspaceStaysEmpty) {
    const PulseSet p = fixtures::dressed_pulses();
    const AtomSystem atoms = fixtures::three_level(5.0);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(9);
    psi(molecular::gg) = 1.0;
    const Eigen::MatrixXcd u = molecular::transform().cast<std::complex<double>>();
    for (auto basis : {PropagationBasis::molecular, PropagationBasis::product}) {
        double worst = 0.0;
        schrodinger_propagate(
            psi, PulseLaw(p, kTwoPi), atoms, kTwoPi, window(p, 1e-8, 1e-10, 401),
            [&](double, const Eigen::VectorXcd& c) {
                const Eigen::VectorXcd m = basis == PropagationBasis::product ? Eigen::VectorXcd(u * c) : c;
                for (auto k : molecular::minus_block) {
                    worst = std::max(worst, std::abs(m(k)));
                }
            },
            basis);
        EXPECT_LT(worst, 1e-12);
    }
}

TEST(Lindblad, ValidatesInitialDensity) {
    const AtomSystem atoms = fixtures::three_level(5.0);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(9, 9);
    EXPECT_THROW(lindblad_propagate(rho, FrozenLaw(FieldSample{}), atoms, kTwoPi, SimGrid{}), ValidationError);
    EXPECT_THROW(lindblad_propagate(Eigen::MatrixXcd::Identity(16, 16) / 16.0, FrozenLaw(FieldSample{}), atoms,
                                    kTwoPi, SimGrid{}),
                 ValidationError);
}

TEST(Lindblad, ClosedSystemMatchesSchrodinger) {
    const PulseSet p = fixtures::dressed_pulses();
    const AtomSystem atoms = fixtures::closed(fixtures::three_level(5.0));
    const ProductBasis b(atoms.levels);
    const SimGrid g = window(p, 1e-10, 1e-12);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(9);
    psi(idx(b, Level::g, Level::g)) = 1.0;
    const auto pure = schrodinger_propagate(psi, PulseLaw(p, kTwoPi), atoms, kTwoPi, g);
    const auto mixed =
        lindblad_propagate(Eigen::MatrixXcd(psi * psi.adjoint()), PulseLaw(p, kTwoPi), atoms, kTwoPi, g);
    const Eigen::VectorXcd& c = pure.states.back();
    EXPECT_LT((mixed.states.back() - c * c.adjoint()).cwiseAbs().maxCoeff(), 1e-6);
}

// Two independent atoms evolve as the tensor square of one atom.
TEST(Lindblad, TensorSquareOfSingleAtom) {
    const PulseSet p = fixtures::transfer_pulses();
    const AtomSystem atoms = fixtures::closed(fixtures::three_level(0.0));
    const ProductBasis b(atoms.levels);
    const SimGrid g = window(p, 1e-10, 1e-12);
    const auto two = lindblad_propagate(projector(b, Level::g, Level::g), PulseLaw(p, kTwoPi), atoms, kTwoPi, g);
    const Eigen::Vector3d one =
        oracle::single_atom_populations(PulseLaw(p, kTwoPi), g.t_start_us, g.t_end_us, 40000);
    const Eigen::MatrixXcd& rho = two.states.back();
    const Level lv[3] = {Level::g, Level::i, Level::r};
    for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(rho(idx(b, lv[a], lv[c]), idx(b, lv[a], lv[c])).real(), one(a) * one(c), 1e-6)
                << b.label(b.index(lv[a], lv[c]));
        }
    }
    EXPECT_GT(one(2), 0.9);
}

TEST(Lindblad, MatchesSuperoperatorExponential) {
    const AtomSystem atoms = fixtures::three_level(5.0);
    const ProductBasis b(atoms.levels);
    const FieldSample f = peak_fields();
    const Eigen::MatrixXcd h = TwoAtomHamiltonian(atoms, kTwoPi)(f);
    Eigen::VectorXcd psi(9);
    for (Eigen::Index k = 0; k < 9; ++k) {
        psi(k) = std::polar(1.0 + 0.1 * static_cast<double>(k), 0.37 * static_cast<double>(k));
    }
    psi.normalize();
    const Eigen::MatrixXcd rho0 = 0.7 * psi * psi.adjoint() + 0.3 * projector(b, Level::i, Level::r);
    SimGrid g;
    g.t_start_us = 0.0;
    g.t_end_us = 0.1;
    g.samples = 2;
    g.rel_tol = 1e-10;
    g.abs_tol = 1e-12;
    const auto traj = lindblad_propagate(rho0, FrozenLaw(f), atoms, kTwoPi, g);
    const Eigen::MatrixXcd expected = oracle::propagate_superoperator(
        oracle::superoperator(h, atoms.gamma_i(kTwoPi), atoms.gamma_r(kTwoPi), b), rho0, 0.1);
    EXPECT_LT((traj.states.back() - expected).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Lindblad, IntermediateDecay) {
    AtomSystem atoms = fixtures::three_level(0.0);
    const ProductBasis b(atoms.levels);
    SimGrid g;
    g.t_start_us = 0.0;
    g.t_end_us = 0.05;
    g.samples = 6;
    const auto traj = lindblad_propagate(projector(b, Level::i, Level::i), FrozenLaw(FieldSample{}), atoms, kTwoPi, g);
    const double gamma = atoms.gamma_i(kTwoPi);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double t = traj.times[k];
        const auto& rho = traj.states[k];
        EXPECT_NEAR(rho(idx(b, Level::i, Level::i), idx(b, Level::i, Level::i)).real(), std::exp(-2.0 * gamma * t), 1e-8);
        const double one = std::exp(-gamma * t) * (1.0 - std::exp(-gamma * t));
        EXPECT_NEAR(rho(idx(b, Level::g, Level::i), idx(b, Level::g, Level::i)).real(), one, 1e-8);
    }
}

TEST(Lindblad, CascadeEndsInGround) {
    AtomSystem atoms = fixtures::three_level(5.0);
    atoms.gamma_r_khz = 2000.0;
    const ProductBasis b(atoms.levels);
    SimGrid g;
    g.t_start_us = 0.0;
    g.t_end_us = 4.0;
    g.max_step_us = 0.05;
    const auto traj = lindblad_propagate(projector(b, Level::r, Level::r), FrozenLaw(FieldSample{}), atoms, kTwoPi, g);
    const Populations p = populations(traj.states.back(), b);
    EXPECT_GT(p.gg, 1.0 - 1e-6);
    EXPECT_NEAR(p.trace, 1.0, 1e-10);
    EXPECT_TRUE(traj.invariants.within(InvariantTolerances{}));
}

TEST(Lindblad, PreservesSwapSymmetry) {
    const PulseSet p = fixtures::dressed_pulses();
    const AtomSystem atoms = fixtures::three_level(5.0);
    const ProductBasis b(atoms.levels);
    const Eigen::MatrixXcd s = swap_operator(b).cast<std::complex<double>>();
    const auto traj = lindblad_propagate(projector(b, Level::g, Level::g), PulseLaw(p, kTwoPi), atoms, kTwoPi,
                                         window(p, 1e-8, 1e-10, 21));
    for (const auto& rho : traj.states) {
        EXPECT_LT((s * rho * s - rho).cwiseAbs().maxCoeff(), 1e-9);
    }
    EXPECT_LT(traj.invariants.max_trace_drift, 1e-8);
    EXPECT_GE(traj.invariants.min_eigenvalue, -1e-7);
}

TEST(Lindblad, SymmetrisationIsOptional) {
    const PulseSet p = fixtures::dressed_pulses();
    const AtomSystem atoms = fixtures::three_level(5.0);
    const ProductBasis b(atoms.levels);
    LindbladOptions opts;
    opts.symmetrize = false;
    const auto raw = lindblad_propagate(projector(b, Level::g, Level::g), PulseLaw(p, kTwoPi), atoms, kTwoPi,
                                        window(p, 1e-8, 1e-10), opts);
    const auto sym = lindblad_propagate(projector(b, Level::g, Level::g), PulseLaw(p, kTwoPi), atoms, kTwoPi,
                                        window(p, 1e-8, 1e-10));
    EXPECT_LT(raw.invariants.max_antihermitian, 1e-10);
    EXPECT_EQ(sym.invariants.max_antihermitian, 0.0);
    EXPECT_LT((raw.states.back() - sym.states.back()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Lindblad, InvariantViolationAborts) {
    const PulseSet p = fixtures::dressed_pulses();
    const AtomSystem atoms = fixtures::three_level(5.0);
    const ProductBasis b(atoms.levels);
    LindbladOptions opts;
    opts.tolerances.positivity = -0.5;  // demands min eigenvalue >= 0.5, impossible for a pure state
    EXPECT_THROW(lindblad_propagate(projector(b, Level::g, Level::g), PulseLaw(p, kTwoPi), atoms, kTwoPi,
                                    window(p, 1e-8, 1e-10, 3), opts),
                 NumericalError);
}

TEST(Lindblad, StepUnderflowIsNumericalError) {
    const PulseSet p = fixtures::transfer_pulses();
    const AtomSystem atoms = fixtures::three_level(50.0);
    const ProductBasis b(atoms.levels);
    EXPECT_THROW(lindblad_propagate(projector(b, Level::g, Level::g), PulseLaw(p, kTwoPi), atoms, kTwoPi,
                                    window(p, 1e-17, 1e-300)),
                 NumericalError);
}

// Fixed-step RK4: successive halvings shrink the change in rho_rr by about 2^4.
TEST(Lindblad, FixedStepConvergenceOrder) {
    const PulseSet p = fixtures::dressed_pulses();
    const AtomSystem atoms = fixtures::three_level(5.0);
    const ProductBasis b(atoms.levels);
    const UnitConvention plain = UnitConvention::plain();
    std::vector<double> rr;
    for (double h : {4e-4, 2e-4, 1e-4}) {
        SimGrid g = window(p, 1e-8, 1e-10);
        g.stepper = StepperKind::fixed_rk4;
        g.max_step_us = h;
        const auto traj = lindblad_propagate(projector(b, Level::g, Level::g), PulseLaw(p, plain), atoms, plain, g);
        rr.push_back(populations(traj.states.back(), b).rr);
    }
    const double ratio = std::abs(rr[0] - rr[1]) / std::abs(rr[1] - rr[2]);
    EXPECT_GT(ratio, 12.0);
    EXPECT_LT(ratio, 20.0);
}

TEST(Generator, MatchesSuperoperatorAction) {
    const AtomSystem atoms = fixtures::three_level(5.0);
    LindbladGenerator gen(atoms, kTwoPi);
    const FieldSample f = peak_fields();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Random(9, 9);
    rho = (rho + rho.adjoint()).eval();
    Eigen::MatrixXcd drho;
    gen(f, rho, drho);
    const Eigen::MatrixXcd sup = oracle::superoperator(TwoAtomHamiltonian(atoms, kTwoPi)(f), atoms.gamma_i(kTwoPi),
                                                       atoms.gamma_r(kTwoPi), gen.basis());
    const Eigen::VectorXcd v = sup * Eigen::Map<const Eigen::VectorXcd>(rho.data(), 81);
    EXPECT_LT((drho - Eigen::Map<const Eigen::MatrixXcd>(v.data(), 9, 9)).cwiseAbs().maxCoeff(), 1e-9);
}
