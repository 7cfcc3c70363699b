#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "rydarp/config.hpp"

namespace rydarp::cli {

/// Per-command flags layered on top of the config file.
struct Overrides {
    std::string config_path;
    std::optional<std::string> convention;
    std::optional<double> v_int_mhz;
    std::optional<double> gamma_i_mhz;
    std::optional<double> gamma_r_khz;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> workers;
    std::optional<double> dwell_us;
    std::optional<double> dwell_ns;
    std::string output;
    std::string checkpoint;
    std::optional<double> dump_t_us;
    bool no_calibrate = false;
};

RunConfig resolve(const Overrides& o);

/// Flag, then RYDARP_WORKERS, then the config, then the hardware concurrency.
std::size_t resolve_workers(const Overrides& o, const RunConfig& c);

int run_dressed(const Overrides& o);
int run_evolve(const Overrides& o);
int run_sweep(const Overrides& o);
int run_gate(const Overrides& o);
int run_calibrate(const Overrides& o);
int run_motional(const Overrides& o);
int run_selftest(const Overrides& o);

}  // namespace rydarp::cli
