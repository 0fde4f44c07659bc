#pragma once

// Closed-form vortex family z = exp(+-k s - 3 k^2 beta t), s = r_x + r_y, beta = hbar/m.
// The +k branch collapses to psi = 1 in finite time (1-vortex); the -k branch shrinks
// to the origin as t -> infinity (0-vortex).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "wavecore.hpp"

namespace zvortex {

enum class Branch { one_vortex, zero_vortex };

constexpr int sign_of(Branch b) noexcept { return b == Branch::one_vortex ? 1 : -1; }
constexpr Branch other(Branch b) noexcept { return b == Branch::one_vortex ? Branch::zero_vortex : Branch::one_vortex; }

inline const char *to_string(Branch b) noexcept { return b == Branch::one_vortex ? "one_vortex" : "zero_vortex"; }

inline Branch parse_branch(std::string_view name)
{
    if (name == "one_vortex" || name == "one" || name == "1") {
        return Branch::one_vortex;
    }
    if (name == "zero_vortex" || name == "zero" || name == "0") {
        return Branch::zero_vortex;
    }
    throw PreconditionError("unknown vortex branch '" + std::string(name) + "'");
}

/// Wavenumber sqrt(2 m U_f / (5 hbar^2)).
inline double k_from_potential(double potential, const PhysicalParams &params = {})
{
    detail::require<DomainError>(std::isfinite(potential) && potential >= 0.0, "potential must be non-negative");
    return std::sqrt(2.0 * params.mass() * potential / (5.0 * params.hbar() * params.hbar()));
}

/// Time-independent solution of the real equation, z = exp(sign (r_x + r_y) k / sqrt 2).
inline ZField real_solution(double potential, const PhysicalParams &params = {}, int sign = 1)
{
    detail::require<PreconditionError>(sign == 1 || sign == -1, "sign must be +1 or -1");
    const double rate = sign * k_from_potential(potential, params) / std::numbers::sqrt2;
    return ZField([rate](const Point &p) { return std::exp(rate * (p.rx + p.ry)); },
                  ZField::DerivativeFn([rate](const Point &p) {
                      const double z = std::exp(rate * (p.rx + p.ry));
                      return ZDerivatives{z, 0.0, rate * z, rate * z, rate * rate * z, rate * rate * z};
                  }));
}

/// One member of the vortex solution pair at a fixed spatial sum s > 0.
struct VortexSolution
{
    Branch branch = Branch::one_vortex;
    double k = 1.0;
    double s = 1.0;
    double beta = 1.0;

    /// Validates and canonicalizes: s < 0 is mapped to -s with the branch swapped,
    /// which leaves z unchanged.
    static VortexSolution make(Branch branch, double k, double s, double beta)
    {
        detail::require<PreconditionError>(std::isfinite(k) && k > 0.0, "vortex wavenumber k must be positive");
        detail::require<PreconditionError>(std::isfinite(beta) && beta > 0.0, "beta = hbar/m must be positive");
        detail::require<PreconditionError>(std::isfinite(s) && s != 0.0, "spatial sum s must be non-zero");
        if (s < 0.0) {
            return {other(branch), k, -s, beta};
        }
        return {branch, k, s, beta};
    }

    VortexSolution at_sum(double spatial_sum) const { return make(branch, k, spatial_sum, beta); }

    /// Decay rate of ln z in time, 3 k^2 beta.
    double decay_rate() const noexcept { return 3.0 * k * k * beta; }
    double log_z(double t) const noexcept { return sign_of(branch) * k * s - decay_rate() * t; }
    double z(double t) const noexcept { return std::exp(log_z(t)); }

    /// The solution over the whole (r_x, r_y) plane with analytic partials.
    ZField field() const
    {
        const double rate = sign_of(branch) * k;
        const double decay = decay_rate();
        return ZField([rate, decay](const Point &p) { return std::exp(rate * (p.rx + p.ry) - decay * p.t); },
                      ZField::DerivativeFn([rate, decay](const Point &p) {
                          const double z = std::exp(rate * (p.rx + p.ry) - decay * p.t);
                          return ZDerivatives{z, -decay * z, rate * z, rate * z, rate * rate * z, rate * rate * z};
                      }));
    }
};

/// Vortex solution of the imaginary equation for a fixed potential U_f > 0.
inline VortexSolution imag_solution(Branch branch, double potential, const PhysicalParams &params = {},
                                    double spatial_sum = 1.0)
{
    detail::require<DomainError>(potential > 0.0, "vortex solution needs U_f > 0 (U_f = 0 gives a static field)");
    return VortexSolution::make(branch, k_from_potential(potential, params), spatial_sum, params.beta());
}

struct TrajectoryPoint
{
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double radius = 0.0;
    double gradient_radius = 0.0;
};

/// Samples psi = z^(1+2i) along the solution. radius = |psi| = z, gradient_radius = k z sqrt 2.
inline std::vector<TrajectoryPoint> trajectory(const VortexSolution &sol, std::span<const double> times)
{
    std::vector<TrajectoryPoint> points;
    points.reserve(times.size());
    for (double t : times) {
        detail::require<PreconditionError>(t >= 0.0, "trajectory times must be non-negative");
        const double log_z = sol.log_z(t);
        const WaveValue psi = psi_from_log(log_z, kVortexExponent);
        const double radius = std::exp(kVortexExponent.x * log_z);
        points.push_back({t, psi.u, psi.v, radius, sol.k * std::exp(log_z) * std::numbers::sqrt2});
    }
    return points;
}

/// s / (3 k beta) for a 1-vortex; +infinity for a 0-vortex.
inline double collapse_time(const VortexSolution &sol) noexcept
{
    if (sol.branch == Branch::zero_vortex) {
        return std::numeric_limits<double>::infinity();
    }
    return sol.s / (3.0 * sol.k * sol.beta);
}

inline int collapse_bit(const VortexSolution &sol) noexcept { return sol.branch == Branch::one_vortex ? 1 : 0; }
inline int collapse_bit(Branch branch) noexcept { return branch == Branch::one_vortex ? 1 : 0; }

/// Branch from the sign of the spatial coefficient of ln z.
inline Branch branch_of_exponent(double spatial_coefficient)
{
    detail::require<PreconditionError>(spatial_coefficient != 0.0, "zero spatial coefficient has no branch");
    return spatial_coefficient > 0.0 ? Branch::one_vortex : Branch::zero_vortex;
}

/// Time for a 0-vortex at sum s to decay to z = epsilon, (ln(1/epsilon) - k s) / (3 k^2 beta).
/// Not positive when epsilon >= exp(-k s).
inline double threshold_lifetime(double k, double s, double beta, double epsilon)
{
    detail::require<PreconditionError>(epsilon > 0.0 && epsilon < 1.0, "collapse threshold must lie in (0, 1)");
    return (-std::log(epsilon) - k * s) / (3.0 * k * k * beta);
}

/// Normalizing constant over the branch lifetime: A0 over [0, inf), A1 over [0, t*].
inline double normalization_constant(const VortexSolution &sol)
{
    const double ks = sol.k * sol.s;
    const double prefactor = sol.k * std::sqrt(6.0 * sol.beta);
    if (sol.branch == Branch::zero_vortex) {
        return std::exp(ks) * prefactor;
    }
    const double growth = std::expm1(2.0 * ks);
    if (!(growth > 0.0) || !std::isnormal(growth) || !std::isfinite(growth)) {
        throw NumericGuardError("e^{2ks} - 1 is not representable for ks = " + std::to_string(ks));
    }
    return prefactor / std::sqrt(growth);
}

/// Predicted population ratio of 0-vortices to 1-vortices, e^{4ks} - e^{2ks}.
inline double vortex_ratio(double k, double s)
{
    const double ks = k * s;
    detail::require<PreconditionError>(ks > 0.0, "vortex ratio needs k s > 0");
    return std::exp(2.0 * ks) * std::expm1(2.0 * ks);
}

// ---------------------------------------------------------------------------
// Gradient-map geometry: (dz/dr_x, dz/dr_y, z) along each branch.

struct GradientPoint
{
    double grad_x = 0.0;
    double grad_y = 0.0;
    double z = 0.0;

    friend constexpr bool operator==(const GradientPoint &, const GradientPoint &) = default;
};

inline bool in_branch_domain(Branch branch, double z) noexcept
{
    if (!std::isfinite(z)) {
        return false;
    }
    return branch == Branch::one_vortex ? z >= 1.0 : (z > 0.0 && z <= 1.0);
}

namespace detail {

inline void require_branch_domain(Branch branch, double k, double z)
{
    require<PreconditionError>(std::isfinite(k) && k > 0.0, "gradient map needs k > 0");
    require<PreconditionError>(in_branch_domain(branch, z), std::string("z = ") + std::to_string(z) +
                                                                " outside the " + to_string(branch) +
                                                                " domain");
}

inline bool on_line(const GradientPoint &p, double slope)
{
    const double expected = slope * p.z;
    const double scale = std::max(1.0, std::abs(expected));
    return std::abs(p.grad_x - expected) <= 1e-9 * scale && std::abs(p.grad_y - expected) <= 1e-9 * scale;
}

} // namespace detail

/// (k z, k z, z) for z >= 1 on the 1-vortex branch, (-k z, -k z, z) for 0 < z <= 1 on the 0-vortex branch.
inline GradientPoint gradient_map_point(Branch branch, double k, double z)
{
    detail::require_branch_domain(branch, k, z);
    const double slope = sign_of(branch) * k;
    return {slope * z, slope * z, z};
}

/// n evenly spaced points of the branch segment between z_from and z_to inclusive.
inline std::vector<GradientPoint> gradient_map_segment(Branch branch, double k, double z_from, double z_to,
                                                       std::size_t n)
{
    detail::require_branch_domain(branch, k, z_from);
    detail::require_branch_domain(branch, k, z_to);
    detail::require<PreconditionError>(n >= 1, "segment needs at least one sample");
    std::vector<GradientPoint> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = n == 1 ? z_from : z_from + (z_to - z_from) * static_cast<double>(i) / (n - 1);
        points.push_back(gradient_map_point(branch, k, z));
    }
    return points;
}

/// One-to-one map from the 1-vortex line to the 0-vortex line: (kz, kz, z) -> (-k/z, -k/z, 1/z).
inline GradientPoint segment_involution(const GradientPoint &p, double k)
{
    detail::require<PreconditionError>(std::isfinite(p.z) && p.z > 1.0, "involution needs z > 1");
    detail::require<PreconditionError>(k > 0.0 && detail::on_line(p, k), "point is not on the 1-vortex line");
    const double w = 1.0 / p.z;
    return {-k * w, -k * w, w};
}

/// Inverse of segment_involution, mapping (-kz, -kz, z) with 0 < z < 1 back to the 1-vortex line.
inline GradientPoint inverse_segment_involution(const GradientPoint &p, double k)
{
    detail::require<PreconditionError>(p.z > 0.0 && p.z < 1.0, "inverse involution needs 0 < z < 1");
    detail::require<PreconditionError>(k > 0.0 && detail::on_line(p, -k), "point is not on the 0-vortex line");
    const double w = 1.0 / p.z;
    return {k * w, k * w, w};
}

/// Squared coordinates (k^2 z^2, k^2 z^2, z^2); the same expression on both branches.
inline GradientPoint squared_map(Branch branch, double k, double z)
{
    detail::require_branch_domain(branch, k, z);
    const double kz = k * z;
    return {kz * kz, kz * kz, z * z};
}

} // namespace zvortex
