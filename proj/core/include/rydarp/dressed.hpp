#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydarp/params.hpp"

namespace rydarp {

/// Whether the -2 Omega^2 / Delta_p coupling between |gg> and |rr> is kept.
/// The closed-form noninteracting spectrum is derived with it dropped.
enum class CrossTerm { include, neglect };

/// Inputs of the reduced {|gg>, |+>_rg, |rr>} model, internal units.
struct ReducedParams {
    double delta = 0.0;       ///< two-photon detuning
    double rabi_p = 0.0;
    double rabi_s = 0.0;
    double detuning_p = 0.0;  ///< one-photon detuning, must be nonzero
    double v_int = 0.0;
    CrossTerm cross = CrossTerm::include;

    double two_photon_rabi() const;
};

ReducedParams reduced_params(const FieldSample& fields, double v_int, CrossTerm cross = CrossTerm::include);

/// Real symmetric 3x3 Hamiltonian over (|gg>, |+>_rg, |rr>) after eliminating |i>.
struct ReducedHamiltonian {
    Eigen::Matrix3d matrix;
    ReducedParams params;
};

ReducedHamiltonian adiabatic_eliminate(const ReducedParams& params);
ReducedHamiltonian adiabatic_eliminate(const FieldSample& fields, const AtomSystem& atoms,
                                       const UnitConvention& units, CrossTerm cross = CrossTerm::include);

enum class CubicForm {
    exact,       ///< det(H_red - eps), vanishes exactly on the eigenvalues
    as_printed,  ///< omits the (2 Omega^2/Delta_p)^2 (b - eps) term
};

/// Energy-equation polynomial in eps whose roots are the dressed energies.
double characteristic_cubic(double eps, const ReducedParams& params, CubicForm form = CubicForm::exact);

enum class Labeling { sorted, adiabatic };

/// Index into DressedSpectrum::energies / vectors columns.
enum DressedLabel : std::size_t { eps1 = 0, eps2 = 1, eps3 = 2 };

struct DressedSpectrum {
    std::array<double, 3> energies{};  ///< (eps1, eps2, eps3)
    Eigen::Matrix3d vectors;           ///< column k is Psi_{k+1} in (c_gg, c_+rg, c_rr)
    Labeling labeling = Labeling::sorted;
    bool degenerate_fallback = false;  ///< adiabatic continuation was ambiguous; sorted labels used

    double energy(DressedLabel label) const { return energies[label]; }
    Eigen::Vector3d state(DressedLabel label) const { return vectors.col(static_cast<Eigen::Index>(label)); }
};

/// Symmetric eigen-decomposition of H_red.
///
/// Without `previous`, ascending eigenvalues are labelled (eps3, eps1, eps2), the
/// ordering of the noninteracting closed form for Delta_p > 0. With `previous`,
/// labels and signs follow maximal overlap with the earlier eigenvectors.
DressedSpectrum solve_spectrum(const ReducedHamiltonian& h,
                               const std::optional<DressedSpectrum>& previous = std::nullopt);

/// Closed-form energies for V_int = 0 with the cross term neglected.
std::array<double, 3> noninteracting_energies(double delta, double rabi_p, double rabi_s, double detuning_p);

struct SingleAtomEnergies {
    double plus;
    double minus;
};

/// Single-atom two-photon dressed energies
/// eps_pm = delta/2 - (Omega_p^2 + Omega_S^2)/(2 Delta_p) +- sqrt(delta^2/4 + Omega^2).
SingleAtomEnergies single_atom_eps(double delta, double rabi_p, double rabi_s, double detuning_p);

enum class PerturbativeForm {
    first_order,  ///< 2 eps_pm + V |<rr|Psi>|^2, exact to first order in V
    as_printed,   ///< 2 eps_pm +- delta V / (2 sqrt(delta^2 + 4 Omega^2))
};

struct PerturbativeEnergies {
    double eps2;
    double eps3;
};

/// Small-V_int estimate of (eps2, eps3) for equal pump and Stokes Rabi frequencies.
PerturbativeEnergies perturbative_eigs(double delta, double two_photon_rabi, double rabi_p, double detuning_p,
                                       double v_int, PerturbativeForm form = PerturbativeForm::first_order);

struct SpectrumSample {
    double t_us;
    double delta;  ///< internal units
    DressedSpectrum spectrum;
};

struct TraceOptions {
    std::size_t min_samples = 2001;
    std::size_t samples_per_gap = 20;  ///< minimum samples across the narrowest avoided crossing
    std::size_t max_samples = 2'000'000;
    CrossTerm cross = CrossTerm::include;
};

struct SpectrumTrace {
    std::vector<SpectrumSample> samples;
    std::size_t degenerate_points = 0;
    std::vector<std::string> diagnostics;
};

/// Sample spacing (us) resolving the narrowest gap by opts.samples_per_gap points,
/// estimated on a coarse scan of [t0, t1].
double gap_resolving_step(const FieldLaw& law, double v_int, double t0, double t1, const TraceOptions& opts);

/// Adiabatically continued spectrum over [t0, t1] (same segment semantics as FieldLaw).
SpectrumTrace trace_spectrum(const FieldLaw& law, const AtomSystem& atoms, const UnitConvention& units,
                             double t0_us, double t1_us, const TraceOptions& opts = {});

}  // namespace rydarp
