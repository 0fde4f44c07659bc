#pragma once

// Complex-power calculus for psi = z^c with z > 0 real and c = x + iy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include "errors.hpp"

namespace zvortex {

using Complex = std::complex<double>;

/// Complex exponent c = x + iy.
struct CParam
{
    double x = 0.0;
    double y = 0.0;

    constexpr CParam conjugate() const noexcept { return {x, -y}; }
    constexpr double modulus_sq() const noexcept { return x * x + y * y; }
    Complex as_complex() const noexcept { return {x, y}; }

    static CParam from_complex(Complex c) noexcept { return {c.real(), c.imag()}; }

    friend constexpr bool operator==(const CParam &, const CParam &) = default;
};

/// The exponent (1, 2) used throughout the vortex construction.
inline constexpr CParam kVortexExponent{1.0, 2.0};

/// A point value psi = u + iv.
struct WaveValue
{
    double u = 0.0;
    double v = 0.0;

    double magnitude() const noexcept { return std::hypot(u, v); }
    double phase() const noexcept { return std::atan2(v, u); }
    Complex as_complex() const noexcept { return {u, v}; }

    static WaveValue from_complex(Complex w) noexcept { return {w.real(), w.imag()}; }

    friend constexpr bool operator==(const WaveValue &, const WaveValue &) = default;
};

/// Strictly positive, finite real. Construction from a double throws DomainError
/// so that ln z is always the real logarithm.
class PositiveReal
{
public:
    PositiveReal(double value) : value_(value) // NOLINT(google-explicit-constructor)
    {
        detail::require<DomainError>(std::isfinite(value) && value > 0.0,
                                     "z must be a finite positive real, got " + std::to_string(value));
    }

    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; } // NOLINT(google-explicit-constructor)
    double log() const noexcept { return std::log(value_); }

private:
    double value_;
};

/// psi evaluated from ln z directly. Used where ln z is known in closed form
/// (vortex trajectories) so that z = 1 gives ln z = 0 exactly.
inline WaveValue psi_from_log(double log_z, CParam c) noexcept
{
    const double modulus = std::exp(c.x * log_z);
    const double angle = c.y * log_z;
    return {modulus * std::cos(angle), modulus * std::sin(angle)};
}

/// u = z^x cos(y ln z), v = z^x sin(y ln z).
inline WaveValue eval_psi(PositiveReal z, CParam c) noexcept
{
    return psi_from_log(z.log(), c);
}

/// Analytic partials of u, v with respect to the exponent components.
struct ExponentPartials
{
    double du_dx = 0.0;
    double dv_dy = 0.0;
    double du_dy = 0.0;
    double dv_dx = 0.0;
};

inline ExponentPartials partials_uv(PositiveReal z, CParam c) noexcept
{
    const double log_z = z.log();
    const double scale = std::exp(c.x * log_z) * log_z;
    const double cosine = scale * std::cos(c.y * log_z);
    const double sine = scale * std::sin(c.y * log_z);
    return {cosine, cosine, -sine, sine};
}

struct ResidualPair
{
    double first = 0.0;
    double second = 0.0;

    double max() const noexcept { return std::max(first, second); }
};

/// Default central-difference steps: first derivatives and second derivatives.
inline constexpr double kFirstDerivativeStep = 1e-5;
inline constexpr double kSecondDerivativeStep = 1e-4;

/// Cauchy-Riemann residuals |du/dx - dv/dy| and |du/dy + dv/dx| with every partial
/// taken by central differences of eval_psi over the exponent.
inline ResidualPair check_cauchy_riemann(PositiveReal z, CParam c, double h = kFirstDerivativeStep)
{
    detail::require<PreconditionError>(h > 0.0 && h < 0.1, "finite-difference step must lie in (0, 0.1)");
    const WaveValue xp = eval_psi(z, {c.x + h, c.y});
    const WaveValue xm = eval_psi(z, {c.x - h, c.y});
    const WaveValue yp = eval_psi(z, {c.x, c.y + h});
    const WaveValue ym = eval_psi(z, {c.x, c.y - h});
    const double inv = 1.0 / (2.0 * h);
    const double du_dx = (xp.u - xm.u) * inv;
    const double dv_dx = (xp.v - xm.v) * inv;
    const double du_dy = (yp.u - ym.u) * inv;
    const double dv_dy = (yp.v - ym.v) * inv;
    return {std::abs(du_dx - dv_dy), std::abs(du_dy + dv_dx)};
}

inline WaveValue dpsi_dc(PositiveReal z, CParam c) noexcept
{
    const double log_z = z.log();
    const WaveValue psi = psi_from_log(log_z, c);
    return {log_z * psi.u, log_z * psi.v};
}

inline WaveValue d2psi_dc2(PositiveReal z, CParam c) noexcept
{
    const double log_z = z.log();
    const double factor = log_z * log_z;
    const WaveValue psi = psi_from_log(log_z, c);
    return {factor * psi.u, factor * psi.v};
}

/// Five-point Laplacian of u and of v over (x, y) at fixed z. Returns (|lap u|, |lap v|).
inline ResidualPair laplace_residual(PositiveReal z, CParam c, double h = kSecondDerivativeStep)
{
    detail::require<PreconditionError>(h > 0.0 && h < 0.1, "finite-difference step must lie in (0, 0.1)");
    const WaveValue centre = eval_psi(z, c);
    const WaveValue xp = eval_psi(z, {c.x + h, c.y});
    const WaveValue xm = eval_psi(z, {c.x - h, c.y});
    const WaveValue yp = eval_psi(z, {c.x, c.y + h});
    const WaveValue ym = eval_psi(z, {c.x, c.y - h});
    const double inv_h2 = 1.0 / (h * h);
    const double lap_u = (xp.u + xm.u + yp.u + ym.u - 4.0 * centre.u) * inv_h2;
    const double lap_v = (xp.v + xm.v + yp.v + ym.v - 4.0 * centre.v) * inv_h2;
    return {std::abs(lap_u), std::abs(lap_v)};
}

/// Below this many nodes the trapezoidal contour rule is flagged as unreliable.
inline constexpr int kMinContourPoints = 64;
inline constexpr int kDefaultContourPoints = 1024;

struct ContourResult
{
    WaveValue value;
    double max_magnitude = 0.0; // max |psi| over the quadrature nodes
    int n_points = 0;
    bool accuracy_warning = false;
};

/// Trapezoidal rule for the closed integral of psi(c) dc around the circle
/// |c - center| = radius. Spectrally accurate since the integrand is periodic and entire.
inline ContourResult contour_integral(PositiveReal z, CParam center, double radius,
                                      int n_points = kDefaultContourPoints)
{
    detail::require<PreconditionError>(radius > 0.0 && std::isfinite(radius), "contour radius must be positive");
    detail::require<PreconditionError>(n_points > 0, "contour needs at least one node");

    const double log_z = z.log();
    const double d_theta = 2.0 * std::numbers::pi / n_points;
    Complex sum{0.0, 0.0};
    double max_magnitude = 0.0;
    for (int j = 0; j < n_points; ++j) {
        const Complex offset = std::polar(radius, j * d_theta);
        const WaveValue psi = psi_from_log(log_z, CParam::from_complex(center.as_complex() + offset));
        max_magnitude = std::max(max_magnitude, psi.magnitude());
        // dc = i * offset * dtheta
        sum += psi.as_complex() * Complex{0.0, 1.0} * offset;
    }
    return {WaveValue::from_complex(sum * d_theta), max_magnitude, n_points, n_points < kMinContourPoints};
}

/// Reconstructs psi(a) from (1 / 2 pi i) times the closed integral of psi(c) / (c - a) dc.
inline WaveValue cauchy_formula(PositiveReal z, CParam a, CParam center, double radius,
                                int n_points = 2 * kDefaultContourPoints)
{
    detail::require<PreconditionError>(radius > 0.0 && std::isfinite(radius), "contour radius must be positive");
    detail::require<PreconditionError>(n_points > 0, "contour needs at least one node");
    detail::require<PreconditionError>(std::abs(a.as_complex() - center.as_complex()) < radius,
                                       "evaluation point must lie strictly inside the contour");

    const double log_z = z.log();
    const double d_theta = 2.0 * std::numbers::pi / n_points;
    Complex sum{0.0, 0.0};
    for (int j = 0; j < n_points; ++j) {
        const Complex offset = std::polar(radius, j * d_theta);
        const Complex node = center.as_complex() + offset;
        const Complex psi = psi_from_log(log_z, CParam::from_complex(node)).as_complex();
        // (1 / 2 pi i) * i * offset * dtheta = offset / n
        sum += psi * offset / (node - a.as_complex());
    }
    return WaveValue::from_complex(sum / static_cast<double>(n_points));
}

enum class NormalizabilityKind { half_line_convergent, restricted };

struct NormalizabilityDomain
{
    NormalizabilityKind kind = NormalizabilityKind::restricted;
    std::optional<std::pair<double, double>> domain_bounds;

    NormalizabilityDomain restricted_to(double lower, double upper) const
    {
        detail::require<PreconditionError>(lower < upper, "domain bounds must satisfy lower < upper");
        return {NormalizabilityKind::restricted, std::make_pair(lower, upper)};
    }
};

/// Classifies the integral of z^{2x} over the exponent. z = 1 makes the integrand
/// constant and is reported as restricted.
inline NormalizabilityDomain normalizability(PositiveReal z, double x)
{
    const bool convergent = (z < 1.0 && x > 0.0) || (z > 1.0 && x < 0.0);
    if (convergent) {
        return {NormalizabilityKind::half_line_convergent, std::nullopt};
    }
    return {NormalizabilityKind::restricted, std::nullopt};
}

inline const char *to_string(NormalizabilityKind kind) noexcept
{
    return kind == NormalizabilityKind::half_line_convergent ? "half_line_convergent" : "restricted";
}

} // namespace zvortex
