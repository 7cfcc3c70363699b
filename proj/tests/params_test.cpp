#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rydarp/errors.hpp"
#include "rydarp/params.hpp"

using namespace rydarp;

TEST(Gaussian, PeakAtCentre) {
    EXPECT_EQ(gaussian_rabi(0.53, 250.0, 0.53, 0.1), 250.0);
}

TEST(Gaussian, OneWidthOut) {
    EXPECT_NEAR(gaussian_rabi(0.075, 120.0, 0.0, 0.075), 120.0 * std::exp(-0.5), 1e-12);
    EXPECT_NEAR(gaussian_rabi(0.075, 120.0, 0.0, 0.075), 72.78, 5e-3);
}

TEST(Gaussian, SymmetricAndPositive) {
    for (double dt : {0.01, 0.1, 0.3, 0.9}) {
        const double right = gaussian_rabi(0.2 + dt, 5.0, 0.2, 0.1);
        EXPECT_NEAR(right, gaussian_rabi(0.2 - dt, 5.0, 0.2, 0.1), 1e-13 * right);
    }
    EXPECT_GT(gaussian_rabi(0.9, 5.0, 0.2, 0.1), 0.0);
    EXPECT_EQ(gaussian_rabi(1e3, 5.0, 0.0, 0.1), 0.0);
}

TEST(Detunings, TwoPhotonAtCentre) {
    const PulseSet p = fixtures::transfer_pulses();
    EXPECT_NEAR(p.two_photon_detuning(p.t_c_us), -78.0, 1e-9);
    EXPECT_DOUBLE_EQ(p.detuning_p(p.t_c_us + 0.1), 2190.0 + 47.5);
    EXPECT_DOUBLE_EQ(p.two_photon_detuning(p.t_c_us + 0.1),
                     p.detuning_p(p.t_c_us + 0.1) + p.detuning_s(p.t_c_us + 0.1));
}

TEST(Detunings, NoChirpIsConstant) {
    PulseSet p = fixtures::transfer_pulses();
    p.alpha_mhz_per_us = 0.0;
    EXPECT_EQ(p.two_photon_detuning(-3.0), p.two_photon_detuning(7.0));
}

TEST(Detunings, SymmetricCrossingAtCentre) {
    EXPECT_EQ(fixtures::dressed_pulses().two_photon_detuning(0.0), 0.0);
}

TEST(TwoPhotonRabi, Values) {
    EXPECT_NEAR(two_photon_rabi(120.0, 120.0, 1500.0), 9.6, 1e-12);
    EXPECT_NEAR(two_photon_rabi(250.0, 250.0, 2190.0), 28.538812785388128, 1e-12);
    EXPECT_THROW(two_photon_rabi(1.0, 1.0, 0.0), DomainError);
}

TEST(Units, Conventions) {
    EXPECT_EQ(UnitConvention::plain().from_mhz(120.0), 120.0);
    EXPECT_NEAR(UnitConvention::two_pi().from_mhz(120.0), 753.9822368615503, 1e-9);
    EXPECT_NEAR(UnitConvention::two_pi().from_khz(0.485), 2.0 * std::numbers::pi * 485e-6, 1e-15);
    EXPECT_EQ(UnitConvention{}, UnitConvention::two_pi());
    EXPECT_DOUBLE_EQ(UnitConvention::two_pi().to_mhz(UnitConvention::two_pi().from_mhz(3.7)), 3.7);
}

TEST(Sample, ConvertsEveryField) {
    const PulseSet p = fixtures::dressed_pulses();
    const FieldSample s = p.sample(0.0, UnitConvention::plain());
    EXPECT_EQ(s.rabi_p, 120.0);
    EXPECT_EQ(s.detuning_p, 1500.0);
    EXPECT_EQ(s.detuning_s, -1500.0);
    EXPECT_EQ(s.two_photon_detuning, 0.0);
    const FieldSample w = p.sample(0.0, UnitConvention::two_pi());
    EXPECT_NEAR(w.rabi_s, 2.0 * std::numbers::pi * 120.0, 1e-12);
}

TEST(PulseSet, Validation) {
    PulseSet p = fixtures::dressed_pulses();
    EXPECT_NO_THROW(p.validate());
    p.tau_p_ns = 0.0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = fixtures::dressed_pulses();
    p.omega0_s_mhz = -1.0;
    EXPECT_THROW(p.validate(), ValidationError);
    p = fixtures::dressed_pulses();
    p.alpha_mhz_per_us = std::nan("");
    EXPECT_THROW(p.validate(), ValidationError);
    EXPECT_THROW(PulseLaw(p, UnitConvention{}), ValidationError);
}

TEST(AtomSystem, Validation) {
    AtomSystem a;
    EXPECT_NO_THROW(a.validate());
    EXPECT_EQ(a.levels_per_atom(), 3u);
    a.gamma_r_khz = -1.0;
    EXPECT_THROW(a.validate(), ValidationError);
    a = AtomSystem{};
    a.levels = LevelScheme::four_level;
    EXPECT_EQ(a.levels_per_atom(), 4u);
}

TEST(SimGrid, ValidationAndSamples) {
    SimGrid g;
    g.t_start_us = 1.0;
    g.t_end_us = 1.0;
    EXPECT_THROW(g.validate(), ValidationError);
    g.t_end_us = 2.0;
    g.rel_tol = 0.0;
    EXPECT_THROW(g.validate(), ValidationError);
    g.rel_tol = 1e-8;
    g.samples = 5;
    EXPECT_NO_THROW(g.validate());
    const auto t = g.sample_times();
    ASSERT_EQ(t.size(), 5u);
    EXPECT_EQ(t.front(), 1.0);
    EXPECT_EQ(t.back(), 2.0);
    EXPECT_DOUBLE_EQ(t[2], 1.5);
}

TEST(SimGrid, AroundUsesWiderPulse) {
    PulseSet p = fixtures::dressed_pulses();
    p.tau_s_ns = 100.0;
    const SimGrid g = SimGrid::around(p, 5.0);
    EXPECT_DOUBLE_EQ(g.t_start_us, -0.5);
    EXPECT_DOUBLE_EQ(g.t_end_us, 0.5);
}

TEST(FieldLaw, FrozenAndSegments) {
    FieldSample s;
    s.rabi_p = 3.0;
    const FrozenLaw law(s);
    EXPECT_EQ(law(17.0).rabi_p, 3.0);
    EXPECT_EQ(law.segment_of(17.0), 0u);
}
