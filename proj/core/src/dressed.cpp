#include "rydarp/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

void require_detuning(double detuning_p) {
    if (detuning_p == 0.0) {
        throw DomainError("adiabatic elimination requires a nonzero one-photon detuning");
    }
}

// Sign fixed so that the largest-magnitude component is positive.
void canonical_sign(Eigen::Matrix3d& vectors) {
    for (Eigen::Index k = 0; k < 3; ++k) {
        Eigen::Index arg = 0;
        vectors.col(k).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, k) < 0.0) {
            vectors.col(k) = -vectors.col(k);
        }
    }
}

constexpr std::array<std::array<std::size_t, 3>, 6> kPermutations{{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

}  // namespace

double ReducedParams::two_photon_rabi() const { return rydarp::two_photon_rabi(rabi_p, rabi_s, detuning_p); }

ReducedParams reduced_params(const FieldSample& fields, double v_int, CrossTerm cross) {
    return ReducedParams{fields.two_photon_detuning, fields.rabi_p, fields.rabi_s, fields.detuning_p, v_int, cross};
}

ReducedHamiltonian adiabatic_eliminate(const ReducedParams& p) {
    require_detuning(p.detuning_p);
    const double omega = p.two_photon_rabi();
    const double coupling = -std::sqrt(2.0) * omega;
    const double cross = p.cross == CrossTerm::include ? -2.0 * omega * omega / p.detuning_p : 0.0;

    ReducedHamiltonian h;
    h.params = p;
    h.matrix(0, 0) = -2.0 * p.rabi_p * p.rabi_p / p.detuning_p;
    h.matrix(1, 1) = p.delta - (p.rabi_p * p.rabi_p + p.rabi_s * p.rabi_s) / p.detuning_p;
    h.matrix(2, 2) = 2.0 * p.delta + p.v_int - 2.0 * p.rabi_s * p.rabi_s / p.detuning_p;
    h.matrix(0, 1) = h.matrix(1, 0) = coupling;
    h.matrix(1, 2) = h.matrix(2, 1) = coupling;
    h.matrix(0, 2) = h.matrix(2, 0) = cross;
    return h;
}

ReducedHamiltonian adiabatic_eliminate(const FieldSample& fields, const AtomSystem& atoms,
                                       const UnitConvention& units, CrossTerm cross) {
    return adiabatic_eliminate(reduced_params(fields, atoms.v_int(units), cross));
}

double characteristic_cubic(double eps, const ReducedParams& p, CubicForm form) {
    require_detuning(p.detuning_p);
    const double omega = p.two_photon_rabi();
    const double omega2 = omega * omega;
    const double light_sum = (p.rabi_p * p.rabi_p + p.rabi_s * p.rabi_s) / p.detuning_p;
    const double cross = p.cross == CrossTerm::include ? 2.0 * omega2 / p.detuning_p : 0.0;

    const double middle = p.delta - light_sum;
    const double product = -(eps + 2.0 * p.rabi_p * p.rabi_p / p.detuning_p) * (middle - eps) *
                           (2.0 * p.delta - 2.0 * p.rabi_s * p.rabi_s / p.detuning_p - eps + p.v_int);
    const double coupling = 2.0 * omega2 * (2.0 * eps + 2.0 * light_sum - 2.0 * cross - 2.0 * p.delta - p.v_int);
    double value = product + coupling;
    if (form == CubicForm::exact) {
        value -= cross * cross * (middle - eps);
    }
    return value;
}

DressedSpectrum solve_spectrum(const ReducedHamiltonian& h, const std::optional<DressedSpectrum>& previous) {
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h.matrix);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("3x3 symmetric eigen-decomposition failed");
    }
    const Eigen::Vector3d& values = solver.eigenvalues();
    const Eigen::Matrix3d& vectors = solver.eigenvectors();

    DressedSpectrum sorted;
    sorted.labeling = Labeling::sorted;
    // ascending (v0, v1, v2) -> (eps3, eps1, eps2)
    constexpr std::array<Eigen::Index, 3> source{1, 2, 0};
    for (std::size_t label = 0; label < 3; ++label) {
        sorted.energies[label] = values(source[label]);
        sorted.vectors.col(static_cast<Eigen::Index>(label)) = vectors.col(source[label]);
    }
    canonical_sign(sorted.vectors);

    if (!previous) {
        return sorted;
    }

    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    const double min_gap = std::min(values(1) - values(0), values(2) - values(1));
    const Eigen::Matrix3d overlap = previous->vectors.transpose() * sorted.vectors;

    double best = -1.0;
    double runner_up = -1.0;
    std::size_t best_index = 0;
    for (std::size_t p = 0; p < kPermutations.size(); ++p) {
        double score = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            score += std::abs(overlap(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kPermutations[p][k])));
        }
        if (score > best) {
            runner_up = best;
            best = score;
            best_index = p;
        } else if (score > runner_up) {
            runner_up = score;
        }
    }

    const bool collided = min_gap <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
    const bool ambiguous = best - runner_up <= 1e-9;
    if (collided || ambiguous) {
        sorted.degenerate_fallback = true;
        return sorted;
    }

    DressedSpectrum tracked;
    tracked.labeling = Labeling::adiabatic;
    const auto& perm = kPermutations[best_index];
    for (std::size_t k = 0; k < 3; ++k) {
        const auto from = static_cast<Eigen::Index>(perm[k]);
        const auto to = static_cast<Eigen::Index>(k);
        tracked.energies[k] = sorted.energies[perm[k]];
        const double sign = overlap(to, from) < 0.0 ? -1.0 : 1.0;
        tracked.vectors.col(to) = sign * sorted.vectors.col(from);
    }
    return tracked;
}

std::array<double, 3> noninteracting_energies(double delta, double rabi_p, double rabi_s, double detuning_p) {
    require_detuning(detuning_p);
    const double light_sum = (rabi_p * rabi_p + rabi_s * rabi_s) / detuning_p;
    const double e1 = delta - light_sum;
    const double root = std::sqrt(delta * delta + 2.0 * delta * (rabi_p * rabi_p - rabi_s * rabi_s) / detuning_p +
                                  light_sum * light_sum);
    return {e1, e1 + root, e1 - root};
}

SingleAtomEnergies single_atom_eps(double delta, double rabi_p, double rabi_s, double detuning_p) {
    require_detuning(detuning_p);
    const double omega = rabi_p * rabi_s / detuning_p;
    const double centre = 0.5 * delta - 0.5 * (rabi_p * rabi_p + rabi_s * rabi_s) / detuning_p;
    const double root = std::sqrt(0.25 * delta * delta + omega * omega);
    return {centre + root, centre - root};
}

PerturbativeEnergies perturbative_eigs(double delta, double two_photon_rabi, double rabi_p, double detuning_p,
                                       double v_int, PerturbativeForm form) {
    require_detuning(detuning_p);
    const double root = std::sqrt(delta * delta + 4.0 * two_photon_rabi * two_photon_rabi);
    if (root == 0.0) {
        throw DomainError("perturbative energies undefined at an exact degeneracy (delta = Omega = 0)");
    }
    const double base = delta - 2.0 * rabi_p * rabi_p / detuning_p;
    PerturbativeEnergies e{base + root, base - root};
    if (form == PerturbativeForm::as_printed) {
        const double shift = delta * v_int / (2.0 * root);
        e.eps2 += shift;
        e.eps3 -= shift;
    } else {
        const double norm = 4.0 * root * root;
        e.eps2 += v_int * (delta + root) * (delta + root) / norm;
        e.eps3 += v_int * (delta - root) * (delta - root) / norm;
    }
    return e;
}

namespace {

double min_adjacent_gap(const FieldSample& f, double v_int) {
    if (f.detuning_p == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const auto h = adiabatic_eliminate(reduced_params(f, v_int));
    const Eigen::Vector3d v = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(h.matrix, Eigen::EigenvaluesOnly).eigenvalues();
    return std::min(v(1) - v(0), v(2) - v(1));
}

}  // namespace

double gap_resolving_step(const FieldLaw& law, double v_int, double t0, double t1, const TraceOptions& opts) {
    constexpr std::size_t coarse = 4001;
    const double h = (t1 - t0) / static_cast<double>(coarse - 1);
    std::vector<double> gaps(coarse);
    for (std::size_t k = 0; k < coarse; ++k) {
        gaps[k] = min_adjacent_gap(law(t0 + h * static_cast<double>(k)), v_int);
    }
    double slope = 0.0;
    for (std::size_t k = 1; k < coarse; ++k) {
        if (std::isfinite(gaps[k]) && std::isfinite(gaps[k - 1])) {
            slope = std::max(slope, std::abs(gaps[k] - gaps[k - 1]) / h);
        }
    }
    const auto it = std::min_element(gaps.begin(), gaps.end());
    double g_min = *it;
    // refine around the coarse minimum
    const auto k = static_cast<std::size_t>(it - gaps.begin());
    double lo = t0 + h * static_cast<double>(k == 0 ? 0 : k - 1);
    double hi = t0 + h * static_cast<double>(std::min(k + 1, coarse - 1));
    for (int pass = 0; pass < 3; ++pass) {
        constexpr int fine = 200;
        const double hf = (hi - lo) / fine;
        double t_best = lo;
        for (int j = 0; j <= fine; ++j) {
            const double t = lo + hf * j;
            const double g = min_adjacent_gap(law(t), v_int);
            if (g < g_min) {
                g_min = g;
                t_best = t;
            }
        }
        lo = t_best - hf;
        hi = t_best + hf;
    }
    if (slope <= 0.0 || !std::isfinite(g_min)) {
        return (t1 - t0) / static_cast<double>(opts.min_samples - 1);
    }
    const double width = g_min / slope;
    return width / static_cast<double>(opts.samples_per_gap);
}

SpectrumTrace trace_spectrum(const FieldLaw& law, const AtomSystem& atoms, const UnitConvention& units, double t0_us,
                             double t1_us, const TraceOptions& opts) {
    if (!(t1_us > t0_us)) {
        throw ValidationError("trace_spectrum needs t1 > t0");
    }
    const double v_int = atoms.v_int(units);
    SpectrumTrace trace;

    const double step = gap_resolving_step(law, v_int, t0_us, t1_us, opts);
    const double span = t1_us - t0_us;
    auto wanted = static_cast<double>(opts.min_samples);
    if (step > 0.0 && std::isfinite(step)) {
        wanted = std::max(wanted, std::ceil(span / step) + 1.0);
    }
    std::size_t n = opts.max_samples;
    if (wanted < static_cast<double>(opts.max_samples)) {
        n = static_cast<std::size_t>(wanted);
    } else {
        std::ostringstream msg;
        msg << "narrowest avoided crossing needs " << wanted << " samples; capped at " << opts.max_samples;
        trace.diagnostics.push_back(msg.str());
    }

    trace.samples.reserve(n);
    std::optional<DressedSpectrum> previous;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = k + 1 == n ? t1_us : t0_us + span * static_cast<double>(k) / static_cast<double>(n - 1);
        const FieldSample f = law(t);
        auto spectrum = solve_spectrum(adiabatic_eliminate(reduced_params(f, v_int, opts.cross)), previous);
        if (spectrum.degenerate_fallback) {
            ++trace.degenerate_points;
            std::ostringstream msg;
            msg << "degenerate crossing at t=" << t << " us; sorted labels used";
            trace.diagnostics.push_back(msg.str());
        }
        trace.samples.push_back({t, f.two_photon_detuning, spectrum});
        previous = std::move(spectrum);
    }
    return trace;
}

}  // namespace rydarp
