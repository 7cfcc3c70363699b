#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rydarp/gate.hpp"
#include "rydarp/motional.hpp"
#include "rydarp/params.hpp"
#include "rydarp/transfer.hpp"

namespace rydarp {

struct OutputPaths {
    std::string csv;
    std::string checkpoint;
    std::string report;
    std::string hamiltonian_dump;

    friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

/// Everything a CLI run needs, loaded from one JSON document.
///
/// Every section and key is optional and falls back to the struct defaults; unknown keys
/// are rejected. Without an explicit grid window the window is centred on the pulses.
struct RunConfig {
    UnitConvention units;
    PulseSet pulses;
    AtomSystem atoms;
    SimGrid grid;
    bool explicit_window = false;
    double window_widths = 5.0;
    SweepSpec sweep;  ///< sweep.base mirrors `pulses`
    GateProtocol gate;
    CalibrationOptions calibration;
    MotionalParams motional;
    OutputPaths output;
    std::optional<std::size_t> workers;

    /// Validates every section; throws ValidationError.
    void validate() const;
    SimGrid effective_grid() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string emit_config(const RunConfig& config);

UnitConvention parse_convention(std::string_view name);
std::string_view to_string(const UnitConvention& units) noexcept;

}  // namespace rydarp
