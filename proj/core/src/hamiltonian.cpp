#include "rydarp/hamiltonian.hpp"

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

Eigen::Index local(const ProductBasis& basis, Level level) {
    const auto& levels = basis.levels();
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k] == level) {
            return static_cast<Eigen::Index>(k);
        }
    }
    return -1;
}

}  // namespace

TwoAtomHamiltonian::TwoAtomHamiltonian(const AtomSystem& atoms, const UnitConvention& units)
    : basis_(atoms.levels), v_int_(atoms.v_int(units)) {}

Eigen::MatrixXd TwoAtomHamiltonian::single_atom(const FieldSample& f) const {
    const auto n = static_cast<Eigen::Index>(basis_.levels_per_atom());
    const Eigen::Index g = local(basis_, Level::g);
    const Eigen::Index i = local(basis_, Level::i);
    const Eigen::Index r = local(basis_, Level::r);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    h(i, i) = f.detuning_p;
    h(r, r) = f.two_photon_detuning;
    h(g, i) = h(i, g) = -f.rabi_p;
    h(i, r) = h(r, i) = -f.rabi_s;
    return h;
}

void TwoAtomHamiltonian::assemble(const FieldSample& fields, Eigen::MatrixXcd& out) const {
    const Eigen::Index n = dim();
    out.setZero(n, n);
    const Eigen::MatrixXd h1 = single_atom(fields);
    const auto& levels = basis_.levels();
    const auto m = static_cast<Eigen::Index>(levels.size());
    // (h1 x 1 + 1 x h1) written entry-wise in the chosen (possibly non-lexicographic) ordering
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            const auto col = static_cast<Eigen::Index>(basis_.index(levels[a], levels[b]));
            for (Eigen::Index c = 0; c < m; ++c) {
                if (h1(c, a) != 0.0) {
                    out(static_cast<Eigen::Index>(basis_.index(levels[c], levels[b])), col) += h1(c, a);
                }
                if (h1(c, b) != 0.0) {
                    out(static_cast<Eigen::Index>(basis_.index(levels[a], levels[c])), col) += h1(c, b);
                }
            }
        }
    }
    const auto rr = static_cast<Eigen::Index>(basis_.index(Level::r, Level::r));
    out(rr, rr) += v_int_;
}

Eigen::MatrixXcd TwoAtomHamiltonian::operator()(const FieldSample& fields) const {
    Eigen::MatrixXcd h;
    assemble(fields, h);
    return h;
}

Eigen::MatrixXcd build_product_hamiltonian(const PulseSet& pulses, const AtomSystem& atoms,
                                           const UnitConvention& units, double t_us) {
    return TwoAtomHamiltonian(atoms, units)(pulses.sample(t_us, units));
}

Eigen::MatrixXcd product_to_molecular(const Eigen::MatrixXcd& h) {
    if (h.rows() != molecular::dim || h.cols() != molecular::dim) {
        throw ValidationError("molecular transform needs the 9x9 three-level Hamiltonian");
    }
    const Eigen::MatrixXcd u = molecular::transform().cast<std::complex<double>>();
    return u * h * u.transpose();
}

Eigen::MatrixXcd molecular_to_product(const Eigen::MatrixXcd& h) {
    if (h.rows() != molecular::dim || h.cols() != molecular::dim) {
        throw ValidationError("molecular transform needs a 9x9 matrix");
    }
    const Eigen::MatrixXcd u = molecular::transform().cast<std::complex<double>>();
    return u.transpose() * h * u;
}

}  // namespace rydarp
