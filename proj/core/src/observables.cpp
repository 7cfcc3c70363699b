#include "rydarp/observables.hpp"

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

int count(const std::pair<Level, Level>& s, Level level) {
    return static_cast<int>(s.first == level) + static_cast<int>(s.second == level);
}

}  // namespace

Populations populations(const Eigen::MatrixXcd& rho, const ProductBasis& basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    if (rho.rows() != n || rho.cols() != n) {
        throw ValidationError("density matrix dimension does not match the basis");
    }
    auto at = [&](std::size_t a, std::size_t b) {
        return rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    };
    Populations p;
    const std::size_t gg = basis.index(Level::g, Level::g);
    const std::size_t rg = basis.index(Level::r, Level::g);
    const std::size_t gr = basis.index(Level::g, Level::r);
    p.gg = at(gg, gg).real();
    p.rr = at(basis.index(Level::r, Level::r), basis.index(Level::r, Level::r)).real();
    p.ii = at(basis.index(Level::i, Level::i), basis.index(Level::i, Level::i)).real();
    const double diag = 0.5 * (at(rg, rg).real() + at(gr, gr).real());
    const double cross = at(rg, gr).real();
    p.plus_rg = diag + cross;
    p.minus_rg = diag - cross;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const double pk = at(k, k).real();
        p.trace += pk;
        p.intermediate += count(basis.state(k), Level::i) * pk;
        p.rydberg += count(basis.state(k), Level::r) * pk;
    }
    return p;
}

Populations populations(const Eigen::VectorXcd& psi, const ProductBasis& basis) {
    return populations(Eigen::MatrixXcd(psi * psi.adjoint()), basis);
}

std::complex<double> coherence(const Eigen::MatrixXcd& rho, const ProductBasis& basis, Level a1, Level a2, Level b1,
                               Level b2) {
    return rho(static_cast<Eigen::Index>(basis.index(a1, a2)), static_cast<Eigen::Index>(basis.index(b1, b2)));
}

Eigen::MatrixXcd to_molecular(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != static_cast<Eigen::Index>(molecular::dim) || rho.cols() != rho.rows()) {
        throw ValidationError("molecular basis needs the 9x9 three-level density matrix");
    }
    const Eigen::MatrixXcd u = molecular::transform().cast<std::complex<double>>();
    return u * rho * u.transpose();
}

}  // namespace rydarp
