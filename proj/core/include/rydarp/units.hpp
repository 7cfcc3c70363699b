#pragma once

#include <numbers>

namespace rydarp {

/// Maps laboratory frequencies (MHz, i.e. cycles per microsecond) onto the internal
/// unit system, which is rad/us for every frequency-like quantity and us for time.
///
/// The factor is either 1 ("plain": 120 MHz enters the equations as 120 rad/us)
/// or 2*pi ("two_pi": 120 MHz enters as 2*pi*120 rad/us).
class UnitConvention {
public:
    enum class Kind { plain, two_pi };

    constexpr UnitConvention() noexcept = default;
    constexpr explicit UnitConvention(Kind kind) noexcept : kind_(kind) {}

    static constexpr UnitConvention plain() noexcept { return UnitConvention(Kind::plain); }
    static constexpr UnitConvention two_pi() noexcept { return UnitConvention(Kind::two_pi); }

    constexpr Kind kind() const noexcept { return kind_; }

    constexpr double angular_factor() const noexcept {
        return kind_ == Kind::plain ? 1.0 : 2.0 * std::numbers::pi;
    }

    constexpr double from_mhz(double mhz) const noexcept { return mhz * angular_factor(); }
    constexpr double from_khz(double khz) const noexcept { return from_mhz(khz * 1e-3); }
    constexpr double from_ghz(double ghz) const noexcept { return from_mhz(ghz * 1e3); }
    constexpr double to_mhz(double internal) const noexcept { return internal / angular_factor(); }

    friend constexpr bool operator==(UnitConvention, UnitConvention) = default;

private:
    Kind kind_ = Kind::two_pi;
};

constexpr double ns_to_us(double ns) noexcept { return ns * 1e-3; }
constexpr double us_to_ns(double us) noexcept { return us * 1e3; }

}  // namespace rydarp
