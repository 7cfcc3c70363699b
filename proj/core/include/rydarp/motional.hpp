#pragma once

#include "rydarp/units.hpp"

namespace rydarp {

struct MotionalParams {
    double r_um = 9.3;          ///< interatomic distance
    double omega0_khz = 100.0;  ///< trap frequency
    double delta_r_nm = 35.0;   ///< ground-state motional width
    double dwell_ns = 150.0;    ///< t_c - T

    void validate() const;
    friend bool operator==(const MotionalParams&, const MotionalParams&) = default;
};

/// Probability of exciting the first motional state from the van der Waals force
/// F = 6 V_int / r acting during the dwell:
/// |c|^2 = (6 V_int delta_r / (r omega0))^2 |1 - exp(-2 i omega0 dwell)|^2.
double motional_error(const MotionalParams& m, double v_int_mhz, const UnitConvention& units);

}  // namespace rydarp
