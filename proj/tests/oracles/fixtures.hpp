#pragma once

#include "rydarp/params.hpp"

namespace fixtures {

/// 120 MHz pulses of 75 ns, 190 MHz/us chirp, Delta_0p = -Delta_0S = 1.5 GHz.
inline rydarp::PulseSet dressed_pulses() {
    rydarp::PulseSet p;
    p.omega0_p_mhz = 120.0;
    p.omega0_s_mhz = 120.0;
    p.tau_p_ns = 75.0;
    p.tau_s_ns = 75.0;
    p.t_c_us = 0.0;
    p.alpha_mhz_per_us = 190.0;
    p.delta0_p_mhz = 1500.0;
    p.delta0_s_mhz = -1500.0;
    return p;
}

/// The gate pulses: same as dressed_pulses() with the chirp reversed.
inline rydarp::PulseSet gate_pulses() {
    rydarp::PulseSet p = dressed_pulses();
    p.alpha_mhz_per_us = -190.0;
    return p;
}

/// Peak transfer point: 250 MHz, 100 ns, 475 MHz/us, 2.19 / -2.268 GHz.
inline rydarp::PulseSet transfer_pulses() {
    rydarp::PulseSet p;
    p.omega0_p_mhz = 250.0;
    p.omega0_s_mhz = 250.0;
    p.tau_p_ns = 100.0;
    p.tau_s_ns = 100.0;
    p.t_c_us = 0.5305164769729845;
    p.alpha_mhz_per_us = 475.0;
    p.delta0_p_mhz = 2190.0;
    p.delta0_s_mhz = -2268.0;
    return p;
}

inline rydarp::AtomSystem three_level(double v_int_mhz) {
    rydarp::AtomSystem a;
    a.levels = rydarp::LevelScheme::three_level;
    a.v_int_mhz = v_int_mhz;
    return a;
}

inline rydarp::AtomSystem closed(rydarp::AtomSystem a) {
    a.gamma_i_mhz = 0.0;
    a.gamma_r_khz = 0.0;
    return a;
}

}  // namespace fixtures
