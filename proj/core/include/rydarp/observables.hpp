#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>

#include <Eigen/Dense>

#include "rydarp/basis.hpp"

namespace rydarp {

struct Populations {
    double gg = 0.0;
    double plus_rg = 0.0;   ///< (|rg> + |gr>)/sqrt(2)
    double minus_rg = 0.0;  ///< (|rg> - |gr>)/sqrt(2)
    double rr = 0.0;
    double ii = 0.0;
    double trace = 0.0;
    double intermediate = 0.0;  ///< expected number of atoms in |i>
    double rydberg = 0.0;       ///< expected number of atoms in |r>
};

Populations populations(const Eigen::MatrixXcd& rho, const ProductBasis& basis);
Populations populations(const Eigen::VectorXcd& psi, const ProductBasis& basis);

/// <a|rho|b> for product states.
std::complex<double> coherence(const Eigen::MatrixXcd& rho, const ProductBasis& basis, Level a1, Level a2, Level b1,
                               Level b2);

/// Density matrix in the molecular basis (three-level scheme only).
Eigen::MatrixXcd to_molecular(const Eigen::MatrixXcd& rho);

/// Binary checkpoint: uint64 dimension, then row-major (re, im) doubles, all little endian.
void write_checkpoint(std::ostream& out, const Eigen::MatrixXcd& rho);
void write_checkpoint(const std::filesystem::path& path, const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd read_checkpoint(std::istream& in);
Eigen::MatrixXcd read_checkpoint(const std::filesystem::path& path);

}  // namespace rydarp
