#pragma once

// Substitution of z = z(r_x, r_y, t) into the two-dimensional Schrodinger equation
// for psi = z^c, and the real/imaginary residuals that any candidate field leaves.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ladder.hpp"
#include "wavecore.hpp"

namespace zvortex {

/// hbar and mass, both strictly positive. Natural units (1, 1) by default.
class PhysicalParams
{
public:
    PhysicalParams() = default;
    PhysicalParams(double hbar, double mass) : hbar_(hbar), mass_(mass)
    {
        detail::require<DomainError>(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
        detail::require<DomainError>(std::isfinite(mass) && mass > 0.0, "mass must be positive");
    }

    double hbar() const noexcept { return hbar_; }
    double mass() const noexcept { return mass_; }
    double beta() const noexcept { return hbar_ / mass_; }
    /// hbar^2 / 2m
    double kinetic_coefficient() const noexcept { return 0.5 * hbar_ * hbar_ / mass_; }

    static PhysicalParams natural() noexcept { return {}; }

private:
    double hbar_ = 1.0;
    double mass_ = 1.0;
};

struct Point
{
    double rx = 0.0;
    double ry = 0.0;
    double t = 0.0;
};

/// z and its first/second partials at one point.
struct ZDerivatives
{
    double z = 0.0;
    double z_t = 0.0;
    double z_x = 0.0;
    double z_y = 0.0;
    double z_xx = 0.0;
    double z_yy = 0.0;

    double gradient_sq() const noexcept { return z_x * z_x + z_y * z_y; }
    double laplacian() const noexcept { return z_xx + z_yy; }
};

enum class Differentiation {
    automatic,        // analytic partials when the field has them, else finite differences
    analytic,
    finite_difference
};

struct FiniteDifferenceSteps
{
    double first = kFirstDerivativeStep;
    double second = kSecondDerivativeStep;
};

/// Positive scalar field z(r_x, r_y, t), optionally carrying closed-form partials.
class ZField
{
public:
    using ValueFn = std::function<double(const Point &)>;
    using DerivativeFn = std::function<ZDerivatives(const Point &)>;

    explicit ZField(ValueFn value, std::optional<DerivativeFn> analytic = std::nullopt)
        : value_(std::move(value)), analytic_(std::move(analytic))
    {
        detail::require<PreconditionError>(static_cast<bool>(value_), "field needs a value function");
    }

    double value(const Point &p) const { return value_(p); }
    bool has_analytic() const noexcept { return analytic_.has_value(); }

    ZDerivatives derivatives(const Point &p, Differentiation mode = Differentiation::automatic,
                             FiniteDifferenceSteps steps = {}) const
    {
        switch (mode) {
        case Differentiation::analytic:
            detail::require<PreconditionError>(has_analytic(), "field has no analytic partials");
            return (*analytic_)(p);
        case Differentiation::finite_difference:
            return finite_differences(p, steps);
        case Differentiation::automatic:
            break;
        }
        return has_analytic() ? (*analytic_)(p) : finite_differences(p, steps);
    }

    /// Central second-order stencils over each coordinate.
    ZDerivatives finite_differences(const Point &p, FiniteDifferenceSteps steps = {}) const
    {
        const double h1 = steps.first;
        const double h2 = steps.second;
        detail::require<PreconditionError>(h1 > 0.0 && h2 > 0.0, "finite-difference steps must be positive");
        const auto at = [&](double drx, double dry, double dt) { return value_({p.rx + drx, p.ry + dry, p.t + dt}); };

        ZDerivatives d;
        d.z = value_(p);
        d.z_t = (at(0, 0, h1) - at(0, 0, -h1)) / (2.0 * h1);
        d.z_x = (at(h1, 0, 0) - at(-h1, 0, 0)) / (2.0 * h1);
        d.z_y = (at(0, h1, 0) - at(0, -h1, 0)) / (2.0 * h1);
        d.z_xx = (at(h2, 0, 0) - 2.0 * d.z + at(-h2, 0, 0)) / (h2 * h2);
        d.z_yy = (at(0, h2, 0) - 2.0 * d.z + at(0, -h2, 0)) / (h2 * h2);
        return d;
    }

    /// Pointwise sum z1 + z2; analytic partials add when both operands have them.
    friend ZField operator+(const ZField &a, const ZField &b)
    {
        ValueFn value = [a, b](const Point &p) { return a.value(p) + b.value(p); };
        if (!a.has_analytic() || !b.has_analytic()) {
            return ZField(std::move(value));
        }
        DerivativeFn partials = [a, b](const Point &p) {
            const ZDerivatives da = a.derivatives(p, Differentiation::analytic);
            const ZDerivatives db = b.derivatives(p, Differentiation::analytic);
            return ZDerivatives{da.z + db.z,     da.z_t + db.z_t,   da.z_x + db.z_x,
                                da.z_y + db.z_y, da.z_xx + db.z_xx, da.z_yy + db.z_yy};
        };
        return ZField(std::move(value), std::move(partials));
    }

    static ZField constant(double z)
    {
        return ZField([z](const Point &) { return z; }, DerivativeFn([z](const Point &) { return ZDerivatives{z}; }));
    }

private:
    ValueFn value_;
    std::optional<DerivativeFn> analytic_;
};

enum class PotentialKind { fixed, energy_ladder };

/// Potential that is constant in (r_x, r_y): either a fixed U_f or the step potential
/// U(E) of an energy ladder at a given energy.
class Potential
{
public:
    static Potential fixed(double value)
    {
        detail::require<DomainError>(std::isfinite(value), "potential must be finite");
        return Potential(PotentialKind::fixed, value, nullptr, 0.0);
    }

    static Potential from_ladder(std::shared_ptr<const EnergyLadder> ladder, double energy)
    {
        detail::require<PreconditionError>(ladder != nullptr, "ladder potential needs a ladder");
        const double value = potential_of_energy(*ladder, energy);
        return Potential(PotentialKind::energy_ladder, value, std::move(ladder), energy);
    }

    PotentialKind kind() const noexcept { return kind_; }
    double value() const noexcept { return value_; }
    double value_at(double /*rx*/, double /*ry*/) const noexcept { return value_; }
    const EnergyLadder *ladder() const noexcept { return ladder_.get(); }
    double energy() const noexcept { return energy_; }

private:
    Potential(PotentialKind kind, double value, std::shared_ptr<const EnergyLadder> ladder, double energy)
        : kind_(kind), value_(value), ladder_(std::move(ladder)), energy_(energy)
    {
    }

    PotentialKind kind_;
    double value_;
    std::shared_ptr<const EnergyLadder> ladder_;
    double energy_;
};

/// The five chain-rule derivatives of psi = z^c.
struct PsiPartials
{
    Complex d_t;
    Complex d_rx;
    Complex d_ry;
    Complex d_rx2;
    Complex d_ry2;

    friend PsiPartials operator+(const PsiPartials &a, const PsiPartials &b)
    {
        return {a.d_t + b.d_t, a.d_rx + b.d_rx, a.d_ry + b.d_ry, a.d_rx2 + b.d_rx2, a.d_ry2 + b.d_ry2};
    }
};

/// i hbar psi_t + (hbar^2/2m)(psi_xx + psi_yy) - U psi; linear in psi.
inline Complex psi_equation_residual(const PsiPartials &d, Complex psi, const PhysicalParams &params, double potential)
{
    return Complex{0.0, params.hbar()} * d.d_t + params.kinetic_coefficient() * (d.d_rx2 + d.d_ry2) - potential * psi;
}

namespace detail {

inline ZDerivatives positive_derivatives(const ZField &field, const Point &p, Differentiation mode,
                                         FiniteDifferenceSteps steps)
{
    const ZDerivatives d = field.derivatives(p, mode, steps);
    require<DomainError>(std::isfinite(d.z) && d.z > 0.0, "field value must be positive, got " + std::to_string(d.z));
    return d;
}

} // namespace detail

inline PsiPartials psi_partials(const ZField &field, CParam c, const Point &p,
                                Differentiation mode = Differentiation::automatic, FiniteDifferenceSteps steps = {})
{
    const ZDerivatives d = detail::positive_derivatives(field, p, mode, steps);
    const Complex cc = c.as_complex();
    const Complex psi = psi_from_log(std::log(d.z), c).as_complex();
    const Complex first = cc / d.z * psi;
    // (c^2 - c) / z^2 * psi multiplies the squared first derivative
    const Complex curvature = (cc * cc - cc) / (d.z * d.z) * psi;
    return {first * d.z_t, first * d.z_x, first * d.z_y, first * d.z_xx + curvature * d.z_x * d.z_x,
            first * d.z_yy + curvature * d.z_y * d.z_y};
}

enum class ResidualForm {
    unscaled, // i hbar z_t + (hbar^2/2m)[...] - (z/c) U
    reduced   // real part times 2m/hbar^2, imaginary part times m/hbar^2
};

struct ResidualOptions
{
    Differentiation mode = Differentiation::automatic;
    FiniteDifferenceSteps steps{};
    ResidualForm form = ResidualForm::unscaled;
};

/// Residual of i hbar z_t + (hbar^2/2m)[lap z + ((c-1)/z)|grad z|^2] - (z/c) U, with
/// z/c evaluated as z c* / |c|^2. Real and imaginary parts share one arithmetic path.
inline Complex complex_residual(const ZField &field, CParam c, const PhysicalParams &params,
                                const Potential &potential, const Point &p, const ResidualOptions &options = {})
{
    detail::require<DomainError>(c.modulus_sq() > 0.0, "exponent c must be non-zero");
    const ZDerivatives d = detail::positive_derivatives(field, p, options.mode, options.steps);
    const double kinetic = params.kinetic_coefficient();
    const double u = potential.value_at(p.rx, p.ry);
    const double grad_sq = d.gradient_sq();
    const double modulus_sq = c.modulus_sq();

    double real = kinetic * (d.laplacian() + (c.x - 1.0) / d.z * grad_sq) - d.z * c.x * u / modulus_sq;
    double imag = params.hbar() * d.z_t + kinetic * (c.y / d.z) * grad_sq + d.z * c.y * u / modulus_sq;
    if (options.form == ResidualForm::reduced) {
        const double hbar_sq = params.hbar() * params.hbar();
        real *= 2.0 * params.mass() / hbar_sq;
        imag *= params.mass() / hbar_sq;
    }
    return {real, imag};
}

inline double real_residual(const ZField &field, CParam c, const PhysicalParams &params, const Potential &potential,
                            const Point &p, const ResidualOptions &options = {})
{
    return complex_residual(field, c, params, potential, p, options).real();
}

inline double imag_residual(const ZField &field, CParam c, const PhysicalParams &params, const Potential &potential,
                            const Point &p, const ResidualOptions &options = {})
{
    return complex_residual(field, c, params, potential, p, options).imag();
}

// ---------------------------------------------------------------------------
// Rectangular grid sweeps

struct GridAxis
{
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 1;

    double at(std::size_t i) const noexcept
    {
        if (count <= 1) {
            return lower;
        }
        return lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct GridSpec
{
    GridAxis rx;
    GridAxis ry;
    GridAxis t;

    std::size_t size() const noexcept { return rx.count * ry.count * t.count; }
};

struct ResidualSample
{
    Point point;
    double residual_real = 0.0;
    double residual_imag = 0.0;
};

struct GridSummary
{
    std::size_t count = 0;
    double max_abs_real = 0.0;
    double max_abs_imag = 0.0;
    double mean_abs_real = 0.0;
    double mean_abs_imag = 0.0;
};

struct ResidualGrid
{
    GridSpec spec;
    std::vector<ResidualSample> samples;

    GridSummary summary() const noexcept
    {
        GridSummary s;
        s.count = samples.size();
        for (const ResidualSample &sample : samples) {
            const double re = std::abs(sample.residual_real);
            const double im = std::abs(sample.residual_imag);
            s.max_abs_real = std::max(s.max_abs_real, re);
            s.max_abs_imag = std::max(s.max_abs_imag, im);
            s.mean_abs_real += re;
            s.mean_abs_imag += im;
        }
        if (s.count > 0) {
            s.mean_abs_real /= static_cast<double>(s.count);
            s.mean_abs_imag /= static_cast<double>(s.count);
        }
        return s;
    }
};

/// Samples the residual on a lattice, ordered rx-major then ry then t.
inline ResidualGrid evaluate_grid(const ZField &field, CParam c, const PhysicalParams &params,
                                  const Potential &potential, const GridSpec &spec, const ResidualOptions &options = {})
{
    ResidualGrid grid{spec, {}};
    grid.samples.reserve(spec.size());
    for (std::size_t i = 0; i < spec.rx.count; ++i) {
        for (std::size_t j = 0; j < spec.ry.count; ++j) {
            for (std::size_t n = 0; n < spec.t.count; ++n) {
                const Point p{spec.rx.at(i), spec.ry.at(j), spec.t.at(n)};
                const Complex r = complex_residual(field, c, params, potential, p, options);
                grid.samples.push_back({p, r.real(), r.imag()});
            }
        }
    }
    return grid;
}

} // namespace zvortex
