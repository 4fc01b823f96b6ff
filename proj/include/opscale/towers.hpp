#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "opscale/operators.hpp"
#include "opscale/order_estimation.hpp"

namespace opscale {

/// Iterated commutators Y^(0) = Y, Y^(k) = [Delta, Y^(k-1)], each level an
/// exact truncation-indexed family.
struct CommutatorTower {
    OperatorFamily base;
    std::vector<OperatorFamily> levels;

    const OperatorFamily& level(int k) const { return levels.at(static_cast<std::size_t>(k)); }
    int max_level() const { return static_cast<int>(levels.size()) - 1; }
};

inline CommutatorTower build_commutator_tower(const OperatorFamily& y, int max_k) {
    CommutatorTower tower;
    tower.base = y;
    tower.levels.push_back(y);
    for (int k = 1; k <= max_k; ++k) {
        OperatorFamily level = family_delta_commutator(tower.levels.back());
        // Tower elements live in the differential filtration: one degree
        // per level, not the generic +2 of an arbitrary commutator.
        level.claimed_order = y.claimed_order + static_cast<double>(k);
        tower.levels.push_back(std::move(level));
    }
    return tower;
}

/// Iterated delta = [Delta^{1/2}, -] applied to a base operator family.
struct DeltaTower {
    OperatorFamily base;
    std::vector<OperatorFamily> levels;

    const OperatorFamily& level(int k) const { return levels.at(static_cast<std::size_t>(k)); }
    int max_level() const { return static_cast<int>(levels.size()) - 1; }
};

inline DeltaTower delta_tower(const OperatorFamily& b, int max_k) {
    DeltaTower tower;
    tower.base = b;
    tower.levels.push_back(b);
    for (int k = 1; k <= max_k; ++k)
        tower.levels.push_back(family_sqrt_delta_commutator(tower.levels.back()));
    return tower;
}

/// Norm table: norms[k][i] = || level k at truncation i ||.
template <class Tower>
std::vector<std::vector<double>> tower_norms(const Tower& tower, const std::vector<int>& truncations,
                                             const NormOptions& norm = {}) {
    std::vector<std::vector<double>> norms;
    for (const auto& level : tower.levels) {
        std::vector<double> row;
        row.reserve(truncations.size());
        for (int n : truncations) row.push_back(operator_norm(level.at(n), norm));
        norms.push_back(std::move(row));
    }
    return norms;
}

}  // namespace opscale
