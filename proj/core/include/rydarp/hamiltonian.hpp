#pragma once

#include <Eigen/Dense>

#include "rydarp/basis.hpp"
#include "rydarp/params.hpp"

namespace rydarp {

/// Assembles the rotating-frame two-atom Hamiltonian (rad/us) in the product basis.
///
/// Per atom: Delta_p on |i>, delta on |r>, -Omega_p on g<->i and -Omega_S on i<->r.
/// V_int shifts |rr> only. |g'> (four-level scheme) carries no energy and no coupling.
class TwoAtomHamiltonian {
public:
    TwoAtomHamiltonian(const AtomSystem& atoms, const UnitConvention& units);

    const ProductBasis& basis() const noexcept { return basis_; }
    Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(basis_.size()); }

    Eigen::MatrixXcd operator()(const FieldSample& fields) const;
    void assemble(const FieldSample& fields, Eigen::MatrixXcd& out) const;

    /// Single-atom block (levels_per_atom square) for the given fields.
    Eigen::MatrixXd single_atom(const FieldSample& fields) const;

private:
    ProductBasis basis_;
    double v_int_;
};

Eigen::MatrixXcd build_product_hamiltonian(const PulseSet& pulses, const AtomSystem& atoms,
                                           const UnitConvention& units, double t_us);

/// U H U^T with U the molecular transform. Requires the 9x9 three-level product Hamiltonian.
Eigen::MatrixXcd product_to_molecular(const Eigen::MatrixXcd& h);

/// Inverse of product_to_molecular.
Eigen::MatrixXcd molecular_to_product(const Eigen::MatrixXcd& h);

}  // namespace rydarp
