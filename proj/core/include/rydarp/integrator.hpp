#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "rydarp/errors.hpp"
#include "rydarp/params.hpp"

namespace rydarp {

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
    double min_step = std::numeric_limits<double>::infinity();

    IntegratorStats& operator+=(const IntegratorStats& o) {
        accepted += o.accepted;
        rejected += o.rejected;
        rhs_calls += o.rhs_calls;
        min_step = std::min(min_step, o.min_step);
        return *this;
    }
};

/// Explicit Runge-Kutta integration of dy/dt = f(t, y) over one smooth segment.
///
/// `State` is any Eigen dense type. `rhs(t, y, dydt)` writes the derivative.
/// `on_accept(y)` runs after every accepted step and may project the state
/// (e.g. re-Hermitise a density matrix). Output samples are taken at the
/// requested times by stepping onto them exactly.
template <class State, class Rhs, class OnAccept>
class RungeKutta {
public:
    RungeKutta(const SimGrid& grid, Rhs rhs, OnAccept on_accept)
        : grid_(grid), rhs_(std::move(rhs)), on_accept_(std::move(on_accept)) {}

    /// Advances y from t0 to each time in `stops` (ascending, all > t0); `emit(k, y)` per stop.
    template <class Emit>
    void run(double t0, State& y, const std::vector<double>& stops, Emit&& emit) {
        double t = t0;
        for (std::size_t k = 0; k < stops.size(); ++k) {
            advance(t, y, stops[k]);
            emit(k, y);
        }
    }

    const IntegratorStats& stats() const noexcept { return stats_; }

private:
    void advance(double& t, State& y, double t_stop) {
        if (t_stop <= t) {
            return;
        }
        if (grid_.stepper == StepperKind::fixed_rk4) {
            const double span = t_stop - t;
            const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / grid_.max_step_us - 1e-9)));
            const double h = span / static_cast<double>(n);
            const double start = t;
            for (std::size_t k = 0; k < n; ++k) {
                rk4_step(h, start + static_cast<double>(k) * h, y);
            }
            t = t_stop;
            return;
        }
        while (t < t_stop) {
            const double floor = 1e-13 * std::max(1.0, std::abs(t));
            if (t_stop - t <= floor) {
                t = t_stop;
                break;
            }
            double h = std::min({h_, grid_.max_step_us, t_stop - t});
            const bool last = h >= t_stop - t;
            if (h < floor) {
                std::ostringstream msg;
                msg << "step-size underflow at t=" << t << " us (h=" << h << "); stiff segment or tolerance too tight";
                throw NumericalError(msg.str());
            }
            double err = dopri_step(t, h, y);
            if (err <= 1.0) {
                t = last ? t_stop : t + h;
                y = y5_;
                on_accept_(y);
                ++stats_.accepted;
                stats_.min_step = std::min(stats_.min_step, h);
                have_k1_ = true;
                k1_ = k7_;
                const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
                if (!last || factor < 1.0) {
                    h_ = h * factor;
                }
            } else {
                ++stats_.rejected;
                h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.25));
            }
        }
    }

    void rk4_step(double h, double t, State& y) {
        rhs_(t, y, k1_);
        tmp_ = y + (0.5 * h) * k1_;
        rhs_(t + 0.5 * h, tmp_, k2_);
        tmp_ = y + (0.5 * h) * k2_;
        rhs_(t + 0.5 * h, tmp_, k3_);
        tmp_ = y + h * k3_;
        rhs_(t + h, tmp_, k4_);
        y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
        on_accept_(y);
        stats_.rhs_calls += 4;
        ++stats_.accepted;
        stats_.min_step = std::min(stats_.min_step, h);
    }

    // Dormand-Prince 5(4); returns the scaled error norm. Leaves y5_ and k7_ = f(t+h, y5_).
    double dopri_step(double t, double h, const State& y) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                         a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                         e6 = 22.0 / 525, e7 = -1.0 / 40;

        if (!have_k1_) {
            rhs_(t, y, k1_);
            ++stats_.rhs_calls;
            have_k1_ = true;
        }
        tmp_ = y + h * a21 * k1_;
        rhs_(t + c2 * h, tmp_, k2_);
        tmp_ = y + h * (a31 * k1_ + a32 * k2_);
        rhs_(t + c3 * h, tmp_, k3_);
        tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        rhs_(t + c4 * h, tmp_, k4_);
        tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        rhs_(t + c5 * h, tmp_, k5_);
        tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        rhs_(t + h, tmp_, k6_);
        y5_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        rhs_(t + h, y5_, k7_);
        stats_.rhs_calls += 6;

        err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
        const auto scale = (grid_.abs_tol + grid_.rel_tol * y.cwiseAbs().cwiseMax(y5_.cwiseAbs()).array());
        const double err = (err_.cwiseAbs().array() / scale).maxCoeff();
        if (!std::isfinite(err)) {
            throw NumericalError("non-finite state during integration");
        }
        return err;
    }

    SimGrid grid_;
    Rhs rhs_;
    OnAccept on_accept_;
    IntegratorStats stats_;
    double h_ = 1e-4;
    bool have_k1_ = false;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y5_, err_;
};

template <class State, class Rhs, class OnAccept>
RungeKutta<State, Rhs, OnAccept> make_runge_kutta(const SimGrid& grid, Rhs rhs, OnAccept on_accept) {
    return RungeKutta<State, Rhs, OnAccept>(grid, std::move(rhs), std::move(on_accept));
}

}  // namespace rydarp
