#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace zvortex {

/// Scale between a level's eigenvalue and the step potential it induces: U = (5/12) E_j.
inline constexpr double kPotentialPerEnergy = 5.0 / 12.0;

/// Strictly increasing, non-empty list of energy eigenvalues E_0 < E_1 < ...
class EnergyLadder
{
public:
    explicit EnergyLadder(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues))
    {
        detail::require<PreconditionError>(!eigenvalues_.empty(), "energy ladder must not be empty");
        for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
            detail::require<PreconditionError>(std::isfinite(eigenvalues_[i]), "energy ladder values must be finite");
            if (i > 0) {
                detail::require<PreconditionError>(eigenvalues_[i - 1] < eigenvalues_[i],
                                                   "energy ladder must be strictly increasing");
            }
        }
    }

    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    std::size_t size() const noexcept { return eigenvalues_.size(); }
    double ground() const noexcept { return eigenvalues_.front(); }
    double operator[](std::size_t j) const { return eigenvalues_.at(j); }

private:
    std::vector<double> eigenvalues_;
};

/// j such that j + 1 counts the eigenvalues with E - E_i >= 0 (unit step with step(0) = 1).
inline std::size_t level_index(const EnergyLadder &ladder, double energy)
{
    if (!(energy >= ladder.ground())) {
        throw BelowLadderError("energy " + std::to_string(energy) + " lies below the ground level " +
                               std::to_string(ladder.ground()));
    }
    const auto levels = ladder.eigenvalues();
    const auto attained = std::upper_bound(levels.begin(), levels.end(), energy) - levels.begin();
    return static_cast<std::size_t>(attained) - 1;
}

/// Step potential U(E) = (5/12) E_j.
inline double potential_of_energy(const EnergyLadder &ladder, double energy)
{
    return kPotentialPerEnergy * ladder[level_index(ladder, energy)];
}

/// U(E) by the unreduced step-function sums: (5/12) E_0 on the ground level, otherwise
/// (5/12) [sum_i step(E - E_i) E_i - sum_{i<j} E_i].
inline double potential_of_energy_literal(const EnergyLadder &ladder, double energy)
{
    const std::size_t j = level_index(ladder, energy);
    if (j == 0) {
        return kPotentialPerEnergy * ladder.ground();
    }
    double attained_sum = 0.0;
    for (double level : ladder.eigenvalues()) {
        if (energy - level >= 0.0) {
            attained_sum += level;
        }
    }
    double below_sum = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
        below_sum += ladder[i];
    }
    return kPotentialPerEnergy * (attained_sum - below_sum);
}

} // namespace zvortex
