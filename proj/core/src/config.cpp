#include "rydarp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

using nlohmann::json;

// Reads keys of one JSON object and rejects anything it did not ask for.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) {
            throw ValidationError("config section '" + name_ + "' must be an object");
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    void number(const std::string& key, double& out) {
        if (!has(key)) {
            return;
        }
        const json& v = j_.at(key);
        if (!v.is_number()) {
            fail(key, "a number");
        }
        out = v.get<double>();
    }

    void count(const std::string& key, std::size_t& out) {
        if (!has(key)) {
            return;
        }
        const json& v = j_.at(key);
        if (!v.is_number_unsigned()) {
            fail(key, "a non-negative integer");
        }
        out = v.get<std::size_t>();
    }

    void text(const std::string& key, std::string& out) {
        if (!has(key)) {
            return;
        }
        const json& v = j_.at(key);
        if (!v.is_string()) {
            fail(key, "a string");
        }
        out = v.get<std::string>();
    }

    void flag(const std::string& key, bool& out) {
        if (!has(key)) {
            return;
        }
        const json& v = j_.at(key);
        if (!v.is_boolean()) {
            fail(key, "a boolean");
        }
        out = v.get<bool>();
    }

    const json& child(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) {
                throw ValidationError("unknown config key '" + qualified(item.key()) + "'");
            }
        }
    }

private:
    [[noreturn]] void fail(const std::string& key, const char* what) const {
        throw ValidationError("config key '" + qualified(key) + "' must be " + what);
    }

    std::string qualified(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

template <class Enum, std::size_t N>
Enum pick(const std::string& key, const std::string& value, const std::pair<const char*, Enum> (&table)[N]) {
    for (const auto& [name, e] : table) {
        if (value == name) {
            return e;
        }
    }
    std::string allowed;
    for (const auto& entry : table) {
        allowed += allowed.empty() ? "" : ", ";
        allowed += entry.first;
    }
    throw ValidationError("config key '" + key + "' must be one of: " + allowed);
}

constexpr std::pair<const char*, LevelScheme> level_names[] = {{"three", LevelScheme::three_level},
                                                               {"four", LevelScheme::four_level}};
constexpr std::pair<const char*, StepperKind> stepper_names[] = {{"adaptive", StepperKind::adaptive},
                                                                 {"fixed_rk4", StepperKind::fixed_rk4}};
constexpr std::pair<const char*, GateVariant> variant_names[] = {{"antisymmetric", GateVariant::antisymmetric},
                                                                 {"symmetric", GateVariant::symmetric}};
constexpr std::pair<const char*, CrossTerm> cross_names[] = {{"include", CrossTerm::include},
                                                             {"neglect", CrossTerm::neglect}};

template <class Enum, std::size_t N>
const char* name_of(Enum e, const std::pair<const char*, Enum> (&table)[N]) {
    for (const auto& [name, v] : table) {
        if (v == e) {
            return name;
        }
    }
    return "";
}

void read_pulses(Section s, PulseSet& p) {
    s.number("omega0_p_mhz", p.omega0_p_mhz);
    s.number("omega0_s_mhz", p.omega0_s_mhz);
    s.number("tau_p_ns", p.tau_p_ns);
    s.number("tau_s_ns", p.tau_s_ns);
    s.number("t_c_us", p.t_c_us);
    s.number("alpha_mhz_per_us", p.alpha_mhz_per_us);
    s.number("delta0_p_mhz", p.delta0_p_mhz);
    s.number("delta0_s_mhz", p.delta0_s_mhz);
    s.finish();
}

void read_atoms(Section s, AtomSystem& a) {
    std::string levels;
    s.text("levels", levels);
    if (!levels.empty()) {
        a.levels = pick("atoms.levels", levels, level_names);
    }
    s.number("gamma_i_mhz", a.gamma_i_mhz);
    s.number("gamma_r_khz", a.gamma_r_khz);
    s.number("v_int_mhz", a.v_int_mhz);
    s.number("qubit_splitting_ghz", a.qubit_splitting_ghz);
    s.finish();
}

void read_grid(Section s, RunConfig& c) {
    const bool start = s.has("t_start_us");
    const bool end = s.has("t_end_us");
    if (start != end) {
        throw ValidationError("config grid needs both t_start_us and t_end_us, or neither");
    }
    c.explicit_window = start;
    s.number("t_start_us", c.grid.t_start_us);
    s.number("t_end_us", c.grid.t_end_us);
    s.number("window_widths", c.window_widths);
    s.number("rel_tol", c.grid.rel_tol);
    s.number("abs_tol", c.grid.abs_tol);
    s.number("max_step_us", c.grid.max_step_us);
    s.count("samples", c.grid.samples);
    std::string stepper;
    s.text("stepper", stepper);
    if (!stepper.empty()) {
        c.grid.stepper = pick("grid.stepper", stepper, stepper_names);
    }
    s.finish();
}

void read_sweep(Section s, SweepSpec& w) {
    s.number("omega_min_mhz", w.omega_min_mhz);
    s.number("omega_max_mhz", w.omega_max_mhz);
    s.count("omega_points", w.omega_points);
    s.number("alpha_min_mhz_per_us", w.alpha_min_mhz_per_us);
    s.number("alpha_max_mhz_per_us", w.alpha_max_mhz_per_us);
    s.count("alpha_points", w.alpha_points);
    s.finish();
}

void read_gate(Section s, RunConfig& c) {
    std::string variant;
    s.text("variant", variant);
    if (!variant.empty()) {
        c.gate.variant = pick("gate.variant", variant, variant_names);
    }
    s.number("boundary_us", c.gate.boundary_us);
    if (s.has("dwell_us")) {
        double dwell = 0.0;
        s.number("dwell_us", dwell);
        c.gate.dwell_us = dwell;
    }
    s.number("padding_widths", c.gate.padding_widths);
    s.number("target_phase", c.calibration.target_phase);
    s.number("min_dwell_us", c.calibration.min_dwell_us);
    s.number("max_dwell_us", c.calibration.max_dwell_us);
    s.count("scan_points", c.calibration.scan_points);
    s.count("intervals_per_step", c.calibration.phase.intervals_per_step);
    std::string cross;
    s.text("cross_term", cross);
    if (!cross.empty()) {
        c.calibration.phase.cross = pick("gate.cross_term", cross, cross_names);
    }
    s.finish();
}

void read_motional(Section s, MotionalParams& m) {
    s.number("r_um", m.r_um);
    s.number("omega0_khz", m.omega0_khz);
    s.number("delta_r_nm", m.delta_r_nm);
    s.number("dwell_ns", m.dwell_ns);
    s.finish();
}

void read_output(Section s, OutputPaths& o) {
    s.text("csv", o.csv);
    s.text("checkpoint", o.checkpoint);
    s.text("report", o.report);
    s.text("hamiltonian_dump", o.hamiltonian_dump);
    s.finish();
}

}  // namespace

UnitConvention parse_convention(std::string_view name) {
    if (name == "plain") {
        return UnitConvention::plain();
    }
    if (name == "two_pi") {
        return UnitConvention::two_pi();
    }
    throw ValidationError("angular_convention must be \"plain\" or \"two_pi\"");
}

std::string_view to_string(const UnitConvention& units) noexcept {
    return units.kind() == UnitConvention::Kind::plain ? "plain" : "two_pi";
}

void RunConfig::validate() const {
    pulses.validate();
    atoms.validate();
    if (!(window_widths > 0.0) || !std::isfinite(window_widths)) {
        throw ValidationError("grid.window_widths must be positive");
    }
    effective_grid().validate();
    sweep.validate_axes();
    gate.validate();
    if (calibration.scan_points < 2 || !(calibration.max_dwell_us > calibration.min_dwell_us) ||
        calibration.min_dwell_us < 0.0) {
        throw ValidationError("gate calibration scan range is invalid");
    }
    if (calibration.phase.intervals_per_step < 2) {
        throw ValidationError("gate.intervals_per_step must be at least 2");
    }
    motional.validate();
    if (workers && *workers == 0) {
        throw ValidationError("workers must be positive");
    }
}

SimGrid RunConfig::effective_grid() const {
    return explicit_window ? grid : window_for(pulses, grid, window_widths);
}

RunConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    Section top(root, "");
    std::string convention;
    top.text("angular_convention", convention);
    if (!convention.empty()) {
        c.units = parse_convention(convention);
    }
    if (top.has("pulses")) {
        read_pulses(Section(top.child("pulses"), "pulses"), c.pulses);
    }
    if (top.has("atoms")) {
        read_atoms(Section(top.child("atoms"), "atoms"), c.atoms);
    }
    if (top.has("grid")) {
        read_grid(Section(top.child("grid"), "grid"), c);
    }
    if (top.has("sweep")) {
        read_sweep(Section(top.child("sweep"), "sweep"), c.sweep);
    }
    if (top.has("gate")) {
        read_gate(Section(top.child("gate"), "gate"), c);
    }
    if (top.has("motional")) {
        read_motional(Section(top.child("motional"), "motional"), c.motional);
    }
    if (top.has("output")) {
        read_output(Section(top.child("output"), "output"), c.output);
    }
    if (top.has("workers")) {
        std::size_t w = 0;
        top.count("workers", w);
        c.workers = w;
    }
    top.finish();
    c.sweep.base = c.pulses;
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open config: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string emit_config(const RunConfig& c) {
    json j;
    j["angular_convention"] = std::string(to_string(c.units));
    j["pulses"] = {{"omega0_p_mhz", c.pulses.omega0_p_mhz},         {"omega0_s_mhz", c.pulses.omega0_s_mhz},
                   {"tau_p_ns", c.pulses.tau_p_ns},                 {"tau_s_ns", c.pulses.tau_s_ns},
                   {"t_c_us", c.pulses.t_c_us},                     {"alpha_mhz_per_us", c.pulses.alpha_mhz_per_us},
                   {"delta0_p_mhz", c.pulses.delta0_p_mhz},         {"delta0_s_mhz", c.pulses.delta0_s_mhz}};
    j["atoms"] = {{"levels", name_of(c.atoms.levels, level_names)},
                  {"gamma_i_mhz", c.atoms.gamma_i_mhz},
                  {"gamma_r_khz", c.atoms.gamma_r_khz},
                  {"v_int_mhz", c.atoms.v_int_mhz},
                  {"qubit_splitting_ghz", c.atoms.qubit_splitting_ghz}};
    json grid = {{"window_widths", c.window_widths}, {"rel_tol", c.grid.rel_tol},
                 {"abs_tol", c.grid.abs_tol},        {"max_step_us", c.grid.max_step_us},
                 {"samples", c.grid.samples},        {"stepper", name_of(c.grid.stepper, stepper_names)}};
    if (c.explicit_window) {
        grid["t_start_us"] = c.grid.t_start_us;
        grid["t_end_us"] = c.grid.t_end_us;
    }
    j["grid"] = grid;
    j["sweep"] = {{"omega_min_mhz", c.sweep.omega_min_mhz},
                  {"omega_max_mhz", c.sweep.omega_max_mhz},
                  {"omega_points", c.sweep.omega_points},
                  {"alpha_min_mhz_per_us", c.sweep.alpha_min_mhz_per_us},
                  {"alpha_max_mhz_per_us", c.sweep.alpha_max_mhz_per_us},
                  {"alpha_points", c.sweep.alpha_points}};
    json gate = {{"variant", name_of(c.gate.variant, variant_names)},
                 {"boundary_us", c.gate.boundary_us},
                 {"padding_widths", c.gate.padding_widths},
                 {"target_phase", c.calibration.target_phase},
                 {"min_dwell_us", c.calibration.min_dwell_us},
                 {"max_dwell_us", c.calibration.max_dwell_us},
                 {"scan_points", c.calibration.scan_points},
                 {"intervals_per_step", c.calibration.phase.intervals_per_step},
                 {"cross_term", name_of(c.calibration.phase.cross, cross_names)}};
    if (c.gate.dwell_us) {
        gate["dwell_us"] = *c.gate.dwell_us;
    }
    j["gate"] = gate;
    j["motional"] = {{"r_um", c.motional.r_um},
                     {"omega0_khz", c.motional.omega0_khz},
                     {"delta_r_nm", c.motional.delta_r_nm},
                     {"dwell_ns", c.motional.dwell_ns}};
    json out = json::object();
    const std::pair<const char*, const std::string*> paths[] = {{"csv", &c.output.csv},
                                                                {"checkpoint", &c.output.checkpoint},
                                                                {"report", &c.output.report},
                                                                {"hamiltonian_dump", &c.output.hamiltonian_dump}};
    for (const auto& [key, value] : paths) {
        if (!value->empty()) {
            out[key] = *value;
        }
    }
    if (!out.empty()) {
        j["output"] = out;
    }
    if (c.workers) {
        j["workers"] = *c.workers;
    }
    return j.dump(2) + "\n";
}

}  // namespace rydarp
