#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydarp/basis.hpp"
#include "rydarp/hamiltonian.hpp"
#include "rydarp/integrator.hpp"
#include "rydarp/params.hpp"

namespace rydarp {

/// One lowering operator |to><from| on a single atom, expanded over the two-atom basis.
struct Collapse {
    std::string name;
    double rate = 0.0;  ///< internal units
    /// Basis pairs (target, source) with L|source> = |target>.
    std::vector<std::pair<std::size_t, std::size_t>> transitions;

    Eigen::MatrixXd matrix(std::size_t dim) const;
};

using CollapseSet = std::vector<Collapse>;

/// sigma_ig and sigma_ri on each atom: |r> -> |i> at Gamma_r, |i> -> |g> at Gamma_i.
/// |g'> is never a decay target.
CollapseSet make_collapse_set(const ProductBasis& basis, const AtomSystem& atoms, const UnitConvention& units);

enum class PropagationBasis { product, molecular };

struct StateTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
    IntegratorStats stats;
};

struct InvariantTolerances {
    double trace = 1e-8;
    double hermiticity = 1e-10;
    double positivity = 1e-7;
};

struct InvariantReport {
    double max_trace_drift = 0.0;
    double max_antihermitian = 0.0;
    double min_eigenvalue = 1.0;

    bool within(const InvariantTolerances& tol) const;
    void merge(const InvariantReport& other);
};

InvariantReport inspect_density(const Eigen::MatrixXcd& rho);

struct LindbladOptions {
    bool symmetrize = true;  ///< rho <- (rho + rho^dag)/2 after every accepted step
    bool check_invariants = true;
    InvariantTolerances tolerances;
};

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> states;
    IntegratorStats stats;
    InvariantReport invariants;
};

using StateObserver = std::function<void(double t_us, const Eigen::VectorXcd& psi)>;
using DensityObserver = std::function<void(double t_us, const Eigen::MatrixXcd& rho)>;

/// i dpsi/dt = H(t) psi over grid.sample_times(); the observer sees every sample
/// including the initial one. Returns integrator statistics.
///
/// With PropagationBasis::molecular the state is expressed in the molecular basis
/// (three-level scheme only).
IntegratorStats schrodinger_propagate(const Eigen::VectorXcd& psi0, const FieldLaw& law, const AtomSystem& atoms,
                                      const UnitConvention& units, const SimGrid& grid, const StateObserver& observe,
                                      PropagationBasis basis = PropagationBasis::product);

StateTrajectory schrodinger_propagate(const Eigen::VectorXcd& psi0, const FieldLaw& law, const AtomSystem& atoms,
                                      const UnitConvention& units, const SimGrid& grid,
                                      PropagationBasis basis = PropagationBasis::product);

/// drho/dt = -i[H, rho] + sum_k Gamma_k (L rho L^dag - {L^dag L, rho}/2) in the product basis.
/// Throws NumericalError if an output sample breaks the density-matrix invariants.
InvariantReport lindblad_propagate(const Eigen::MatrixXcd& rho0, const FieldLaw& law, const AtomSystem& atoms,
                                   const UnitConvention& units, const SimGrid& grid, const DensityObserver& observe,
                                   const LindbladOptions& opts = {}, IntegratorStats* stats = nullptr);

DensityTrajectory lindblad_propagate(const Eigen::MatrixXcd& rho0, const FieldLaw& law, const AtomSystem& atoms,
                                     const UnitConvention& units, const SimGrid& grid,
                                     const LindbladOptions& opts = {});

/// Right-hand side of the master equation for fixed fields (exposed for tests and benchmarks).
class LindbladGenerator {
public:
    LindbladGenerator(const AtomSystem& atoms, const UnitConvention& units);

    const ProductBasis& basis() const noexcept { return hamiltonian_.basis(); }
    const CollapseSet& collapses() const noexcept { return collapses_; }
    void operator()(const FieldSample& fields, const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& drho);

private:
    TwoAtomHamiltonian hamiltonian_;
    CollapseSet collapses_;
    Eigen::VectorXd loss_;  // sum_k Gamma_k diag(L_k^dag L_k)
    Eigen::MatrixXcd h_eff_;
};

}  // namespace rydarp
