#include "rydarp/transfer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rydarp/errors.hpp"

namespace rydarp {

double Adiabaticity::rabi_sq_over_2alpha(const UnitConvention& u) const {
    return u.kind() == UnitConvention::Kind::plain ? rabi_sq_over_2alpha_plain : rabi_sq_over_2alpha_two_pi;
}

double Adiabaticity::two_alpha_tau_sq(const UnitConvention& u) const {
    return u.kind() == UnitConvention::Kind::plain ? two_alpha_tau_sq_plain : two_alpha_tau_sq_two_pi;
}

Adiabaticity adiabaticity(const PulseSet& pulses) {
    Adiabaticity a;
    const double alpha = std::abs(pulses.alpha_mhz_per_us);
    const double tau = pulses.max_tau_us();
    const double two_pi = UnitConvention::two_pi().angular_factor();
    if (pulses.delta0_p_mhz != 0.0 && alpha > 0.0) {
        const double omega = pulses.omega0_p_mhz * pulses.omega0_s_mhz / std::abs(pulses.delta0_p_mhz);
        a.rabi_sq_over_2alpha_plain = omega * omega / (2.0 * alpha);
        a.rabi_sq_over_2alpha_two_pi = two_pi * a.rabi_sq_over_2alpha_plain;
    }
    a.two_alpha_tau_sq_plain = 2.0 * alpha * tau * tau;
    a.two_alpha_tau_sq_two_pi = two_pi * a.two_alpha_tau_sq_plain;
    return a;
}

TransferResult transfer_efficiency(const PulseSet& pulses, const AtomSystem& atoms, const UnitConvention& units,
                                   const SimGrid& grid) {
    const PulseLaw law(pulses, units);
    const ProductBasis basis(atoms.levels);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
    const auto gg = static_cast<Eigen::Index>(basis.index(Level::g, Level::g));
    rho0(gg, gg) = 1.0;

    TransferResult result;
    Eigen::MatrixXcd last;
    result.invariants = lindblad_propagate(
        rho0, law, atoms, units, grid, [&](double, const Eigen::MatrixXcd& rho) { last = rho; }, {}, &result.stats);
    result.final_populations = populations(last, basis);
    result.efficiency = result.final_populations.rr;
    result.diagnostics = adiabaticity(pulses);
    return result;
}

void SweepSpec::validate() const {
    base.validate();
    validate_axes();
    if (base.delta0_p_mhz == 0.0) {
        throw ValidationError("sweep needs a nonzero one-photon detuning");
    }
}

void SweepSpec::validate_axes() const {
    auto axis = [](double lo, double hi, std::size_t n, const char* name) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || n == 0 || hi < lo || (n == 1 && hi != lo) ||
            (n > 1 && hi == lo)) {
            throw ValidationError(std::string("invalid sweep axis: ") + name);
        }
    };
    axis(omega_min_mhz, omega_max_mhz, omega_points, "omega");
    axis(alpha_min_mhz_per_us, alpha_max_mhz_per_us, alpha_points, "alpha");
    if (omega_min_mhz <= 0.0) {
        throw ValidationError("sweep two-photon Rabi frequencies must be positive");
    }
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n, lo);
    for (std::size_t k = 1; k < n; ++k) {
        v[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    if (n > 1) {
        v.back() = hi;
    }
    return v;
}

}  // namespace

std::vector<double> SweepSpec::omegas() const { return linspace(omega_min_mhz, omega_max_mhz, omega_points); }

std::vector<double> SweepSpec::alphas() const {
    return linspace(alpha_min_mhz_per_us, alpha_max_mhz_per_us, alpha_points);
}

PulseSet SweepSpec::point(double omega_mhz, double alpha_mhz_per_us) const {
    PulseSet p = base;
    const double peak = std::sqrt(omega_mhz * std::abs(base.delta0_p_mhz));
    p.omega0_p_mhz = peak;
    p.omega0_s_mhz = peak;
    p.alpha_mhz_per_us = alpha_mhz_per_us;
    return p;
}

std::size_t SweepResult::failures() const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(), [](const SweepPoint& p) { return p.error.has_value(); }));
}

SimGrid window_for(const PulseSet& pulses, const SimGrid& tmpl, double n_widths) {
    SimGrid g = tmpl;
    const SimGrid w = SimGrid::around(pulses, n_widths);
    g.t_start_us = w.t_start_us;
    g.t_end_us = w.t_end_us;
    return g;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& task) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) {
            task(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) {
                    try {
                        task(k);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

SweepResult run_sweep(const SweepSpec& spec, const AtomSystem& atoms, const UnitConvention& units,
                      const SimGrid& tmpl, std::size_t workers) {
    spec.validate();
    atoms.validate();
    const auto omegas = spec.omegas();
    const auto alphas = spec.alphas();
    SweepResult result;
    result.omega_points = omegas.size();
    result.alpha_points = alphas.size();
    result.points.resize(omegas.size() * alphas.size());

    SimGrid grid = tmpl;
    grid.samples = 2;
    parallel_for(result.points.size(), workers, [&](std::size_t k) {
        SweepPoint& out = result.points[k];
        out.omega_mhz = omegas[k / alphas.size()];
        out.alpha_mhz_per_us = alphas[k % alphas.size()];
        const PulseSet pulses = spec.point(out.omega_mhz, out.alpha_mhz_per_us);
        out.diagnostics = adiabaticity(pulses);
        try {
            out.efficiency = transfer_efficiency(pulses, atoms, units, window_for(pulses, grid)).efficiency;
        } catch (const std::exception& e) {
            out.efficiency = std::nan("");
            out.error = e.what();
        }
    });
    return result;
}

}  // namespace rydarp
