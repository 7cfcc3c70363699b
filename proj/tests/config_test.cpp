#include <filesystem>

#include <gtest/gtest.h>

#include "rydarp/config.hpp"
#include "rydarp/errors.hpp"

using namespace rydarp;

namespace {

std::filesystem::path config_file(const char* name) { return std::filesystem::path(RYDARP_CONFIG_DIR) / name; }

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
    const RunConfig c = parse_config("{}");
    EXPECT_EQ(c.units, UnitConvention::two_pi());
    EXPECT_EQ(c.atoms, AtomSystem{});
    EXPECT_FALSE(c.explicit_window);
    EXPECT_FALSE(c.workers.has_value());
}

TEST(Config, Convention) {
    EXPECT_EQ(parse_config(R"({"angular_convention": "plain"})").units, UnitConvention::plain());
    EXPECT_EQ(parse_convention("two_pi"), UnitConvention::two_pi());
    EXPECT_THROW(parse_convention("radians"), ValidationError);
    EXPECT_THROW(parse_config(R"({"angular_convention": "hz"})"), ValidationError);
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_THROW(parse_config(R"({"pulse": {}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"pulses": {"omega0_mhz": 1}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"gate": {"delay": 1}})"), ValidationError);
    try {
        parse_config(R"({"atoms": {"gamma_q": 1}})");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("atoms.gamma_q"), std::string::npos);
    }
}

TEST(Config, TypeAndRangeErrors) {
    EXPECT_THROW(parse_config(R"({"pulses": {"tau_p_ns": "wide"}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"pulses": {"tau_p_ns": -1}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"atoms": {"levels": "five"}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"grid": {"samples": 2.5}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"grid": {"t_start_us": 0}})"), ValidationError);
    EXPECT_THROW(parse_config(R"({"workers": 0})"), ValidationError);
    EXPECT_THROW(parse_config("{not json"), ValidationError);
    EXPECT_THROW(parse_config("[]"), ValidationError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ValidationError);
}

TEST(Config, WindowFollowsPulsesUnlessExplicit) {
    const RunConfig c = parse_config(R"({"pulses": {"t_c_us": 2.0, "tau_p_ns": 50, "tau_s_ns": 80},
                                         "grid": {"window_widths": 4}})");
    EXPECT_DOUBLE_EQ(c.effective_grid().t_start_us, 2.0 - 0.32);
    EXPECT_DOUBLE_EQ(c.effective_grid().t_end_us, 2.0 + 0.32);
    const RunConfig e = parse_config(R"({"grid": {"t_start_us": -1, "t_end_us": 3}})");
    EXPECT_TRUE(e.explicit_window);
    EXPECT_EQ(e.effective_grid().t_end_us, 3.0);
}

TEST(Config, RoundTrip) {
    RunConfig c = parse_config(R"({"angular_convention": "plain", "workers": 3,
                                   "gate": {"dwell_us": 0.07, "variant": "symmetric", "cross_term": "neglect"},
                                   "grid": {"stepper": "fixed_rk4", "t_start_us": 0, "t_end_us": 1},
                                   "output": {"csv": "a.csv"}})");
    EXPECT_EQ(parse_config(emit_config(c)), c);
    EXPECT_EQ(c.gate.dwell_us, 0.07);
    EXPECT_EQ(c.calibration.phase.cross, CrossTerm::neglect);
}

TEST(Config, ShippedConfigsLoadAndRoundTrip) {
    for (const char* name : {"fig2.json", "fig3.json", "fig4.json", "fig5.json"}) {
        const RunConfig c = load_config(config_file(name));
        EXPECT_EQ(parse_config(emit_config(c)), c) << name;
    }
    const RunConfig gate = load_config(config_file("fig5.json"));
    EXPECT_EQ(gate.atoms.levels, LevelScheme::four_level);
    EXPECT_EQ(gate.pulses.alpha_mhz_per_us, -190.0);
    const RunConfig sweep = load_config(config_file("fig3.json"));
    EXPECT_EQ(sweep.sweep.omega_points, 8u);
    EXPECT_EQ(sweep.sweep.base, sweep.pulses);
}
