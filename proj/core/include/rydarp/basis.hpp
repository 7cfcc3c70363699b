#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rydarp/params.hpp"

namespace rydarp {

enum class Level { g_prime, g, i, r };

std::string level_label(Level level);

/// Ordered two-atom product states |a1 a2>, atom 1 written first.
///
/// Three-level ordering: gg, gi, ig, ii, gr, rg, ir, ri, rr.
/// Four-level ordering: lexicographic over (g', g, i, r) with atom 1 as the major index.
class ProductBasis {
public:
    explicit ProductBasis(LevelScheme scheme);

    LevelScheme scheme() const noexcept { return scheme_; }
    std::size_t size() const noexcept { return states_.size(); }
    std::size_t levels_per_atom() const noexcept { return levels_.size(); }
    const std::vector<Level>& levels() const noexcept { return levels_; }

    const std::pair<Level, Level>& state(std::size_t k) const { return states_.at(k); }
    std::size_t index(Level atom1, Level atom2) const;
    bool contains(Level level) const noexcept;
    std::string label(std::size_t k) const;

    /// Index of the state with the two atoms exchanged.
    std::size_t swapped(std::size_t k) const { return swap_.at(k); }

private:
    LevelScheme scheme_;
    std::vector<Level> levels_;
    std::vector<std::pair<Level, Level>> states_;
    std::vector<std::size_t> swap_;
    std::array<std::array<std::size_t, 4>, 4> lookup_{};
};

/// Permutation matrix exchanging the two atoms.
Eigen::MatrixXd swap_operator(const ProductBasis& basis);

/// Symmetric/antisymmetric combinations |+-(xy)> = (|xy> +- |yx>)/sqrt(2) of the
/// three-level product basis, ordered gg, +ig, -ig, ii, +rg, -rg, +ri, -ri, rr.
namespace molecular {

constexpr std::size_t dim = 9;

enum State : std::size_t { gg, plus_ig, minus_ig, ii, plus_rg, minus_rg, plus_ri, minus_ri, rr };

inline constexpr std::array<State, 6> plus_block{gg, plus_ig, ii, plus_rg, plus_ri, rr};
inline constexpr std::array<State, 3> minus_block{minus_ig, minus_rg, minus_ri};

const std::array<const char*, dim>& labels();

/// Real orthogonal U with c_molecular = U * c_product.
const Eigen::MatrixXd& transform();

}  // namespace molecular

}  // namespace rydarp
