#include "rydarp/motional.hpp"

#include <cmath>
#include <complex>

#include "rydarp/errors.hpp"

namespace rydarp {

void MotionalParams::validate() const {
    if (!(r_um > 0.0 && omega0_khz > 0.0 && delta_r_nm > 0.0 && dwell_ns > 0.0) ||
        !std::isfinite(r_um + omega0_khz + delta_r_nm + dwell_ns)) {
        throw ValidationError("motional parameters must be positive and finite");
    }
}

double motional_error(const MotionalParams& m, double v_int_mhz, const UnitConvention& units) {
    m.validate();
    if (v_int_mhz < 0.0 || !std::isfinite(v_int_mhz)) {
        throw ValidationError("interaction strength must be non-negative");
    }
    const double v = units.from_mhz(v_int_mhz);
    const double w0 = units.from_khz(m.omega0_khz);
    const double ratio = m.delta_r_nm * 1e-3 / m.r_um;
    const double amplitude = 6.0 * v * ratio / w0;
    const double phase = 2.0 * w0 * ns_to_us(m.dwell_ns);
    // |1 - e^{-i x}|^2 = 4 sin^2(x/2)
    const double s = std::sin(0.5 * phase);
    return amplitude * amplitude * 4.0 * s * s;
}

}  // namespace rydarp
