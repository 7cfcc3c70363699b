#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rydarp/dressed.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/gate.hpp"

using namespace rydarp;

namespace {

const UnitConvention kTwoPi = UnitConvention::two_pi();

ReducedParams peak_params(double delta_mhz, double v_mhz, CrossTerm cross) {
    const FieldSample f = fixtures::dressed_pulses().sample(0.0, kTwoPi);
    ReducedParams p = reduced_params(f, kTwoPi.from_mhz(v_mhz), cross);
    p.delta = kTwoPi.from_mhz(delta_mhz);
    return p;
}

ReducedParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ReducedParams p;
    p.delta = kTwoPi.from_mhz(-200.0 + 400.0 * u(rng));
    p.rabi_p = kTwoPi.from_mhz(300.0 * u(rng));
    p.rabi_s = kTwoPi.from_mhz(300.0 * u(rng));
    p.detuning_p = kTwoPi.from_mhz((u(rng) < 0.5 ? -1.0 : 1.0) * (1000.0 + 2000.0 * u(rng)));
    p.v_int = kTwoPi.from_mhz(60.0 * u(rng));
    return p;
}

}  // namespace

TEST(Reduced, BareLimit) {
    ReducedParams p;
    p.delta = 3.0;
    p.detuning_p = 1500.0;
    p.v_int = 5.0;
    const auto h = adiabatic_eliminate(p);
    EXPECT_EQ(h.matrix, Eigen::Vector3d(0.0, 3.0, 11.0).asDiagonal().toDenseMatrix());
}

TEST(Reduced, PeakCoupling) {
    const FieldSample f = fixtures::dressed_pulses().sample(0.0, UnitConvention::plain());
    const auto h = adiabatic_eliminate(f, fixtures::three_level(5.0), UnitConvention::plain());
    EXPECT_NEAR(h.matrix(0, 1), -std::sqrt(2.0) * 120.0 * 120.0 / 1500.0, 1e-12);
    EXPECT_NEAR(h.matrix(0, 2), -2.0 * 9.6 * 9.6 / 1500.0, 1e-12);
    EXPECT_EQ(h.matrix, h.matrix.transpose());
}

TEST(Reduced, PumpStokesExchange) {
    ReducedParams p{0.0, 30.0, 50.0, 1200.0, 0.0, CrossTerm::include};
    ReducedParams q = p;
    std::swap(q.rabi_p, q.rabi_s);
    EXPECT_DOUBLE_EQ(adiabatic_eliminate(p).matrix(0, 0), adiabatic_eliminate(q).matrix(2, 2));
    EXPECT_DOUBLE_EQ(adiabatic_eliminate(p).matrix(2, 2), adiabatic_eliminate(q).matrix(0, 0));
}

TEST(Reduced, ZeroDetuningIsDomainError) {
    EXPECT_THROW(adiabatic_eliminate(ReducedParams{1.0, 1.0, 1.0, 0.0, 0.0}), DomainError);
    EXPECT_THROW(single_atom_eps(1.0, 1.0, 1.0, 0.0), DomainError);
}

TEST(Cubic, BareRoots) {
    ReducedParams p{4.0, 0.0, 0.0, 1000.0, 7.0};
    for (double root : {0.0, 4.0, 15.0}) {
        EXPECT_NEAR(characteristic_cubic(root, p), 0.0, 1e-12);
    }
    EXPECT_GT(std::abs(characteristic_cubic(1.0, p)), 1.0);
}

// Polynomial roots from the companion-matrix solver against the symmetric eigensolver.
TEST(Cubic, RootsMatchEigenvaluesOnRandomDraws) {
    std::mt19937_64 rng(7);
    for (int draw = 0; draw < 100; ++draw) {
        const ReducedParams p = random_params(rng);
        const auto h = adiabatic_eliminate(p);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h.matrix);
        const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
        const auto roots = oracle::cubic_roots([&](double e) { return characteristic_cubic(e, p); }, 2.0 * scale);
        for (int k = 0; k < 3; ++k) {
            EXPECT_LT(std::abs(roots[static_cast<std::size_t>(k)] - es.eigenvalues()(k)), 1e-9 * scale) << "draw " << draw;
        }
    }
}

TEST(Cubic, PrintedFormMatchesWhenCrossTermDropped) {
    std::mt19937_64 rng(11);
    for (int draw = 0; draw < 20; ++draw) {
        ReducedParams p = random_params(rng);
        p.cross = CrossTerm::neglect;
        for (double e : solve_spectrum(adiabatic_eliminate(p)).energies) {
            EXPECT_EQ(characteristic_cubic(e, p, CubicForm::exact), characteristic_cubic(e, p, CubicForm::as_printed));
        }
    }
}

TEST(Spectrum, ClosedFormsWithoutInteraction) {
    std::mt19937_64 rng(3);
    for (int draw = 0; draw < 50; ++draw) {
        ReducedParams p = random_params(rng);
        p.detuning_p = std::abs(p.detuning_p);
        p.v_int = 0.0;
        p.cross = CrossTerm::neglect;
        const auto s = solve_spectrum(adiabatic_eliminate(p));
        const auto expected = oracle::closed_form_energies(p.delta, p.rabi_p, p.rabi_s, p.detuning_p);
        const double scale = std::max(1.0, std::abs(expected[2]) + std::abs(expected[1]));
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_LT(std::abs(s.energies[k] - expected[k]), 1e-10 * scale);
        }
        const auto library = noninteracting_energies(p.delta, p.rabi_p, p.rabi_s, p.detuning_p);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_NEAR(library[k], expected[k], 1e-10 * scale);
        }
    }
}

TEST(Spectrum, SymmetricPoint) {
    const double w = 100.0;
    const double dp = 1500.0;
    const auto s = solve_spectrum(adiabatic_eliminate(ReducedParams{0.0, w, w, dp, 0.0, CrossTerm::neglect}));
    EXPECT_NEAR(s.energy(eps2), 0.0, 1e-12);
    EXPECT_NEAR(s.energy(eps1), -2.0 * w * w / dp, 1e-12);
    EXPECT_NEAR(s.energy(eps3), -4.0 * w * w / dp, 1e-12);
}

TEST(Spectrum, OrthonormalWithSmallResiduals) {
    std::mt19937_64 rng(5);
    for (int draw = 0; draw < 50; ++draw) {
        const auto h = adiabatic_eliminate(random_params(rng));
        const auto s = solve_spectrum(h);
        EXPECT_LT((s.vectors.transpose() * s.vectors - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-10);
        const double norm = h.matrix.cwiseAbs().maxCoeff();
        for (auto label : {eps1, eps2, eps3}) {
            const Eigen::Vector3d v = s.state(label);
            EXPECT_LT((h.matrix * v - s.energy(label) * v).norm(), 1e-9 * norm);
        }
    }
}

TEST(Spectrum, DoubledSingleAtomEnergies) {
    for (double delta_mhz : {-40.0, -3.0, 0.0, 12.0, 90.0}) {
        const ReducedParams p = peak_params(delta_mhz, 0.0, CrossTerm::neglect);
        const auto s = solve_spectrum(adiabatic_eliminate(p));
        const auto single = single_atom_eps(p.delta, p.rabi_p, p.rabi_s, p.detuning_p);
        const double scale = std::abs(single.minus) + std::abs(single.plus);
        EXPECT_NEAR(s.energy(eps2), 2.0 * single.plus, 1e-10 * scale);
        EXPECT_NEAR(s.energy(eps3), 2.0 * single.minus, 1e-10 * scale);
    }
}

TEST(SingleAtom, Limits) {
    const double shift = (30.0 * 30.0 + 50.0 * 50.0) / (2.0 * 1000.0);
    const auto uncoupled = single_atom_eps(10.0, 0.0, 0.0, 1000.0);
    EXPECT_DOUBLE_EQ(uncoupled.plus - uncoupled.minus, 10.0);
    const auto centre = single_atom_eps(0.0, 30.0, 50.0, 1000.0);
    EXPECT_NEAR(centre.plus, -shift + 1.5, 1e-12);
    EXPECT_NEAR(centre.minus, -shift - 1.5, 1e-12);
}

TEST(Perturbative, ZeroInteraction) {
    const ReducedParams p = peak_params(25.0, 0.0, CrossTerm::neglect);
    const double omega = p.two_photon_rabi();
    const auto single = single_atom_eps(p.delta, p.rabi_p, p.rabi_s, p.detuning_p);
    for (auto form : {PerturbativeForm::first_order, PerturbativeForm::as_printed}) {
        const auto e = perturbative_eigs(p.delta, omega, p.rabi_p, p.detuning_p, 0.0, form);
        EXPECT_DOUBLE_EQ(e.eps2, 2.0 * single.plus);
        EXPECT_DOUBLE_EQ(e.eps3, 2.0 * single.minus);
    }
}

TEST(Perturbative, PrintedCorrectionVanishesAtCrossing) {
    const ReducedParams p = peak_params(0.0, 3.0, CrossTerm::neglect);
    const auto single = single_atom_eps(0.0, p.rabi_p, p.rabi_s, p.detuning_p);
    const auto e = perturbative_eigs(0.0, p.two_photon_rabi(), p.rabi_p, p.detuning_p, p.v_int, PerturbativeForm::as_printed);
    EXPECT_DOUBLE_EQ(e.eps2, 2.0 * single.plus);
    EXPECT_DOUBLE_EQ(e.eps3, 2.0 * single.minus);
}

// Error of the first-order estimate is quadratic in V.
TEST(Perturbative, ErrorIsSecondOrder) {
    const double omega_mhz = 120.0 * 120.0 / 1500.0;
    std::vector<double> errors;
    for (double v : {2.0, 1.0, 0.5}) {
        const ReducedParams p = peak_params(2.0 * omega_mhz, v, CrossTerm::neglect);
        const double exact = solve_spectrum(adiabatic_eliminate(p)).energy(eps2);
        const auto approx = perturbative_eigs(p.delta, p.two_photon_rabi(), p.rabi_p, p.detuning_p, p.v_int);
        errors.push_back(std::abs(exact - approx.eps2));
    }
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        const double ratio = errors[k] / errors[k + 1];
        EXPECT_GT(ratio, 3.5);
        EXPECT_LT(ratio, 4.5);
    }
}

TEST(Trace, AsymptoticComponents) {
    const PulseSet p = fixtures::gate_pulses();
    const double three_tau = 3.0 * p.tau_p_us();
    const PulseLaw law(p, kTwoPi);
    const auto trace = trace_spectrum(law, fixtures::three_level(5.0), kTwoPi, -three_tau, three_tau);
    const auto& first = trace.samples.front().spectrum;
    const auto& last = trace.samples.back().spectrum;
    EXPECT_GT(std::pow(first.state(eps3)(0), 2), 0.95);
    EXPECT_GT(std::pow(last.state(eps3)(2), 2), 0.95);
    EXPECT_EQ(trace.degenerate_points, 0u);
}

TEST(Trace, ContinuousOverlaps) {
    const PulseSet p = fixtures::dressed_pulses();
    const PulseLaw law(p, kTwoPi);
    const auto trace = trace_spectrum(law, fixtures::three_level(5.0), kTwoPi, -0.375, 0.375);
    ASSERT_GE(trace.samples.size(), 2001u);
    double worst = 1.0;
    for (std::size_t k = 1; k < trace.samples.size(); ++k) {
        const auto& a = trace.samples[k - 1].spectrum;
        const auto& b = trace.samples[k].spectrum;
        EXPECT_EQ(b.labeling, Labeling::adiabatic);
        for (auto label : {eps1, eps2, eps3}) {
            worst = std::min(worst, std::abs(a.state(label).dot(b.state(label))));
        }
    }
    EXPECT_GT(worst, 0.99);
}

TEST(Trace, FallsBackAtExactDegeneracy) {
    const ReducedParams zero{0.0, 0.0, 0.0, 1000.0, 0.0};
    const auto prev = solve_spectrum(adiabatic_eliminate(ReducedParams{1.0, 0.0, 0.0, 1000.0, 0.0}));
    const auto s = solve_spectrum(adiabatic_eliminate(zero), prev);
    EXPECT_TRUE(s.degenerate_fallback);
    EXPECT_EQ(s.labeling, Labeling::sorted);
}
