#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "ladder.hpp"
#include "vortex.hpp"

namespace zvortex {

/// Total energy of the (1, 2) vortex for a fixed potential: E = (12/5) U_f.
inline double energy_of_potential(double potential)
{
    detail::require<DomainError>(std::isfinite(potential) && potential >= 0.0, "potential must be non-negative");
    return potential / kPotentialPerEnergy;
}

/// Same energy read off the time exponent: E / hbar = 6 k^2 hbar / m.
inline double energy_from_k(double k, const PhysicalParams &params = {})
{
    return 6.0 * k * k * params.hbar() * params.hbar() / params.mass();
}

/// sqrt(m E_j / (6 hbar^2)), the wavenumber of a level reached directly from its eigenvalue.
inline double k_of_level(double level_energy, const PhysicalParams &params = {})
{
    detail::require<DomainError>(level_energy >= 0.0, "level energy must be non-negative for a real wavenumber");
    return std::sqrt(params.mass() * level_energy / (6.0 * params.hbar() * params.hbar()));
}

struct LevelSelection
{
    std::size_t j = 0;
    double level_energy = 0.0; // E_j
    double potential = 0.0;    // U(E) = (5/12) E_j
    double omega = 0.0;        // E_j / hbar
};

inline LevelSelection select_level(const EnergyLadder &ladder, double energy, const PhysicalParams &params = {})
{
    const std::size_t j = level_index(ladder, energy);
    const double level = ladder[j];
    return {j, level, kPotentialPerEnergy * level, level / params.hbar()};
}

/// Vortex at the level selected by E, with k obtained from the step potential U(E).
inline VortexSolution quantized_solution(const EnergyLadder &ladder, double energy, Branch branch,
                                         const PhysicalParams &params = {}, double spatial_sum = 1.0)
{
    const double k = k_from_potential(potential_of_energy(ladder, energy), params);
    return VortexSolution::make(branch, k, spatial_sum, params.beta());
}

/// Change in k on the transition E_{j-1} -> E_j: sqrt(m / (6 hbar^2)) (sqrt E_j - sqrt E_{j-1}).
inline double delta_k(const EnergyLadder &ladder, std::size_t j, const PhysicalParams &params = {})
{
    detail::require<PreconditionError>(j >= 1 && j < ladder.size(), "transition index must satisfy 1 <= j < size");
    const double upper = ladder[j];
    const double lower = ladder[j - 1];
    detail::require<DomainError>(lower >= 0.0, "level energies must be non-negative for a real wavenumber");
    return std::sqrt(params.mass() / (6.0 * params.hbar() * params.hbar())) * (std::sqrt(upper) - std::sqrt(lower));
}

struct KTracePoint
{
    std::size_t step = 0;
    double energy = 0.0;
    std::size_t j = 0;
    double k = 0.0;
};

/// Piecewise-constant k along an energy schedule. k only moves when the selected level does.
inline std::vector<KTracePoint> k_jump_trace(const EnergyLadder &ladder, std::span<const double> schedule,
                                             const PhysicalParams &params = {})
{
    std::vector<KTracePoint> trace;
    trace.reserve(schedule.size());
    for (std::size_t step = 0; step < schedule.size(); ++step) {
        const std::size_t j = level_index(ladder, schedule[step]);
        trace.push_back({step, schedule[step], j, k_of_level(ladder[j], params)});
    }
    return trace;
}

} // namespace zvortex
