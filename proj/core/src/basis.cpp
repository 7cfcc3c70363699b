#include "rydarp/basis.hpp"

#include <cmath>

#include "rydarp/errors.hpp"

namespace rydarp {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t slot(Level level) { return static_cast<std::size_t>(level); }

}  // namespace

std::string level_label(Level level) {
    switch (level) {
        case Level::g_prime: return "0";
        case Level::g: return "g";
        case Level::i: return "i";
        case Level::r: return "r";
    }
    return "?";
}

ProductBasis::ProductBasis(LevelScheme scheme) : scheme_(scheme) {
    for (auto& row : lookup_) {
        row.fill(npos);
    }
    using L = Level;
    if (scheme == LevelScheme::three_level) {
        levels_ = {L::g, L::i, L::r};
        states_ = {{L::g, L::g}, {L::g, L::i}, {L::i, L::g}, {L::i, L::i}, {L::g, L::r},
                   {L::r, L::g}, {L::i, L::r}, {L::r, L::i}, {L::r, L::r}};
    } else {
        levels_ = {L::g_prime, L::g, L::i, L::r};
        for (Level a : levels_) {
            for (Level b : levels_) {
                states_.emplace_back(a, b);
            }
        }
    }
    for (std::size_t k = 0; k < states_.size(); ++k) {
        lookup_[slot(states_[k].first)][slot(states_[k].second)] = k;
    }
    swap_.resize(states_.size());
    for (std::size_t k = 0; k < states_.size(); ++k) {
        swap_[k] = lookup_[slot(states_[k].second)][slot(states_[k].first)];
    }
}

std::size_t ProductBasis::index(Level atom1, Level atom2) const {
    const std::size_t k = lookup_[slot(atom1)][slot(atom2)];
    if (k == npos) {
        throw ValidationError("level not present in this basis");
    }
    return k;
}

bool ProductBasis::contains(Level level) const noexcept {
    for (Level l : levels_) {
        if (l == level) {
            return true;
        }
    }
    return false;
}

std::string ProductBasis::label(std::size_t k) const {
    const auto& [a, b] = state(k);
    return level_label(a) + level_label(b);
}

Eigen::MatrixXd swap_operator(const ProductBasis& basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        p(static_cast<Eigen::Index>(basis.swapped(static_cast<std::size_t>(k))), k) = 1.0;
    }
    return p;
}

namespace molecular {

const std::array<const char*, dim>& labels() {
    static const std::array<const char*, dim> names{"gg", "+ig", "-ig", "ii", "+rg", "-rg", "+ri", "-ri", "rr"};
    return names;
}

const Eigen::MatrixXd& transform() {
    static const Eigen::MatrixXd u = [] {
        const ProductBasis basis(LevelScheme::three_level);
        const double h = 1.0 / std::sqrt(2.0);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
        auto pair = [&](State plus, State minus, Level x, Level y) {
            const auto xy = static_cast<Eigen::Index>(basis.index(x, y));
            const auto yx = static_cast<Eigen::Index>(basis.index(y, x));
            m(plus, xy) = h;
            m(plus, yx) = h;
            m(minus, xy) = h;
            m(minus, yx) = -h;
        };
        m(gg, static_cast<Eigen::Index>(basis.index(Level::g, Level::g))) = 1.0;
        m(ii, static_cast<Eigen::Index>(basis.index(Level::i, Level::i))) = 1.0;
        m(rr, static_cast<Eigen::Index>(basis.index(Level::r, Level::r))) = 1.0;
        pair(plus_ig, minus_ig, Level::i, Level::g);
        pair(plus_rg, minus_rg, Level::r, Level::g);
        pair(plus_ri, minus_ri, Level::r, Level::i);
        return m;
    }();
    return u;
}

}  // namespace molecular

}  // namespace rydarp
