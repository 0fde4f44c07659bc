#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "zvortex/vortex.hpp"

using namespace zvortex;

namespace {

const double kE = std::numbers::e;
const double kInf = std::numeric_limits<double>::infinity();

VortexSolution natural(Branch branch, double k = 1.0, double s = 1.0)
{
    return VortexSolution::make(branch, k, s, 1.0);
}

} // namespace

TEST(KFromPotential, Examples)
{
    EXPECT_EQ(k_from_potential(0.0), 0.0);
    EXPECT_DOUBLE_EQ(k_from_potential(2.5), 1.0);
    EXPECT_DOUBLE_EQ(k_from_potential(10.0), 2.0);
    EXPECT_DOUBLE_EQ(k_from_potential(2.5, {2.0, 4.0}), std::sqrt(2.0 * 4.0 * 2.5 / (5.0 * 4.0)));
    EXPECT_THROW(k_from_potential(-0.1), DomainError);
}

TEST(RealSolution, FlatWithoutPotential)
{
    const ZField field = real_solution(0.0);
    for (const Point p : {Point{0, 0, 0}, Point{3, -1, 2}}) {
        EXPECT_EQ(field.value(p), 1.0);
    }
}

TEST(RealSolution, SolvesRealEquationOnly)
{
    for (int sign : {1, -1}) {
        const ZField field = real_solution(2.5, {}, sign);
        const GridSpec grid{{-1, 1, 6}, {-1, 1, 6}, {0, 2, 3}};
        const GridSummary s = evaluate_grid(field, kVortexExponent, {}, Potential::fixed(2.5), grid,
                                            {Differentiation::analytic})
                                  .summary();
        EXPECT_LT(s.max_abs_real, 1e-12);
        EXPECT_GT(s.max_abs_imag, 0.1);
    }
    EXPECT_THROW(real_solution(1.0, {}, 0), PreconditionError);
}

TEST(ImagSolution, Examples)
{
    const VortexSolution one = imag_solution(Branch::one_vortex, 2.5);
    EXPECT_DOUBLE_EQ(one.k, 1.0);
    EXPECT_EQ(one.branch, Branch::one_vortex);
    const VortexSolution zero = imag_solution(Branch::zero_vortex, 2.5);
    EXPECT_DOUBLE_EQ(zero.k, 1.0);
    EXPECT_EQ(sign_of(zero.branch), -1);
    EXPECT_THROW(imag_solution(Branch::one_vortex, 0.0), DomainError);
}

TEST(ImagSolution, ResidualVanishesOnRandomGrids)
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> pot(0.1, 5.0), unit(0.3, 3.0), coord(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const PhysicalParams params{unit(rng), unit(rng)};
        const Branch branch = trial % 2 == 0 ? Branch::one_vortex : Branch::zero_vortex;
        const double u_f = pot(rng);
        const ZField field = imag_solution(branch, u_f, params).field();
        for (int i = 0; i < 10; ++i) {
            const Point p{coord(rng), coord(rng), std::abs(coord(rng))};
            const double scale = params.hbar() * params.hbar() / params.mass() * field.value(p);
            EXPECT_LT(std::abs(imag_residual(field, kVortexExponent, params, Potential::fixed(u_f), p)),
                      1e-10 * std::max(1.0, scale));
        }
    }
}

TEST(VortexSolution, NegativeSumSwapsBranch)
{
    const VortexSolution flipped = VortexSolution::make(Branch::zero_vortex, 1.2, -0.5, 0.8);
    EXPECT_EQ(flipped.branch, Branch::one_vortex);
    EXPECT_EQ(flipped.s, 0.5);
    // Same z as the literal -k solution at s = -0.5.
    for (double t : {0.0, 0.3, 1.0}) {
        EXPECT_NEAR(flipped.z(t), std::exp(-1.2 * -0.5 - 3 * 1.44 * 0.8 * t), 1e-15);
    }
    EXPECT_THROW(VortexSolution::make(Branch::one_vortex, 1.0, 0.0, 1.0), PreconditionError);
    EXPECT_THROW(VortexSolution::make(Branch::one_vortex, 0.0, 1.0, 1.0), PreconditionError);
    EXPECT_THROW(VortexSolution::make(Branch::one_vortex, 1.0, 1.0, -1.0), PreconditionError);
}

TEST(Trajectory, InitialRadiusAndCollapse)
{
    const VortexSolution sol = natural(Branch::one_vortex);
    const std::vector<double> times{0.0, 1.0 / 3.0};
    const auto points = trajectory(sol, times);
    ASSERT_EQ(points.size(), 2u);
    EXPECT_NEAR(points[0].radius, 2.7182818284590452, 1e-15);
    EXPECT_NEAR(points[0].gradient_radius, kE * std::numbers::sqrt2, 1e-14);
    EXPECT_NEAR(points[1].radius, 1.0, 1e-15);
    EXPECT_NEAR(points[1].u, 1.0, 1e-15);
    EXPECT_NEAR(points[1].v, 0.0, 1e-15);
}

TEST(Trajectory, ComponentsMatchDirectSubstitution)
{
    const VortexSolution sol = VortexSolution::make(Branch::one_vortex, 0.7, 1.3, 0.9);
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) {
        times.push_back(0.1 * i);
    }
    for (const TrajectoryPoint &p : trajectory(sol, times)) {
        const double amplitude = 0.7 * 1.3 - 3 * 0.49 * 0.9 * p.t;
        const double phase = 2 * 0.7 * 1.3 - 6 * 0.49 * 0.9 * p.t;
        EXPECT_NEAR(p.u, std::exp(amplitude) * std::cos(phase), 1e-13);
        EXPECT_NEAR(p.v, std::exp(amplitude) * std::sin(phase), 1e-13);
        EXPECT_NEAR(p.radius, std::hypot(p.u, p.v), 1e-13);
        EXPECT_NEAR(p.radius, sol.z(p.t), 1e-14);
        EXPECT_NEAR(p.gradient_radius, 0.7 * sol.z(p.t) * std::numbers::sqrt2, 1e-14);
    }
}

TEST(Trajectory, ZeroVortexShrinksToOrigin)
{
    const VortexSolution sol = natural(Branch::zero_vortex);
    std::vector<double> times;
    for (int i = 0; i <= 100; ++i) {
        times.push_back(0.2 * i);
    }
    const auto points = trajectory(sol, times);
    for (std::size_t i = 1; i < points.size(); ++i) {
        EXPECT_LT(points[i].radius, points[i - 1].radius);
    }
    EXPECT_LT(points.back().radius, 1e-20);
    EXPECT_THROW(trajectory(sol, std::vector<double>{-1.0}), PreconditionError);
    EXPECT_TRUE(trajectory(sol, std::vector<double>{}).empty());
}

TEST(Trajectory, OneVortexCrossesUnitOnce)
{
    const VortexSolution sol = VortexSolution::make(Branch::one_vortex, 1.4, 0.6, 0.5);
    const double t_star = collapse_time(sol);
    std::vector<double> times;
    for (int i = 0; i <= 400; ++i) {
        times.push_back(3.0 * t_star * i / 400.0);
    }
    const auto points = trajectory(sol, times);
    int crossings = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        EXPECT_LT(points[i].radius, points[i - 1].radius);
        if ((points[i - 1].radius - 1.0) * (points[i].radius - 1.0) <= 0.0) {
            ++crossings;
        }
    }
    EXPECT_EQ(crossings, 1);
}

TEST(CollapseTime, Examples)
{
    EXPECT_DOUBLE_EQ(collapse_time(natural(Branch::one_vortex)), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(collapse_time(natural(Branch::one_vortex, 2.0, 3.0)), 0.5);
    EXPECT_EQ(collapse_time(natural(Branch::zero_vortex, 2.0, 3.0)), kInf);
}

TEST(CollapseTime, PsiIsOneAtCollapse)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.1, 3.0);
    for (int i = 0; i < 200; ++i) {
        const VortexSolution sol = VortexSolution::make(Branch::one_vortex, d(rng), d(rng), d(rng));
        const TrajectoryPoint p = trajectory(sol, std::vector<double>{collapse_time(sol)}).front();
        EXPECT_LT(std::hypot(p.u - 1.0, p.v), 1e-12);
    }
}

TEST(CollapseBit, BranchRoundTrip)
{
    EXPECT_EQ(collapse_bit(natural(Branch::one_vortex)), 1);
    EXPECT_EQ(collapse_bit(natural(Branch::zero_vortex)), 0);
    for (Branch b : {Branch::one_vortex, Branch::zero_vortex}) {
        EXPECT_EQ(branch_of_exponent(sign_of(b) * 0.7), b);
        EXPECT_EQ(parse_branch(to_string(b)), b);
    }
    EXPECT_THROW(branch_of_exponent(0.0), PreconditionError);
    EXPECT_THROW(parse_branch("two_vortex"), PreconditionError);
}

TEST(Normalization, FrozenValues)
{
    EXPECT_NEAR(normalization_constant(natural(Branch::zero_vortex)), 6.6584034568043338, 1e-13);
    EXPECT_NEAR(normalization_constant(natural(Branch::one_vortex)), 0.96907474247242349, 1e-14);
    EXPECT_NEAR(normalization_constant(natural(Branch::zero_vortex, 1.0, 1e-12)), 2.4494897427831781, 1e-11);
}

TEST(Normalization, UnderflowIsGuarded)
{
    EXPECT_THROW(normalization_constant(natural(Branch::one_vortex, 1.0, 1e-320)), NumericGuardError);
    EXPECT_NO_THROW(normalization_constant(natural(Branch::one_vortex, 1.0, 1e-300)));
}

TEST(Normalization, QuadratureOfSquaredModulusIsUnity)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> kd(0.2, 2.0), sd(0.1, 2.0), bd(0.5, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double k = kd(rng), s = sd(rng), beta = bd(rng);
        const VortexSolution zero = VortexSolution::make(Branch::zero_vortex, k, s, beta);
        const VortexSolution one = VortexSolution::make(Branch::one_vortex, k, s, beta);
        // |psi|^2 = z^2 for x = 1
        const double zero_integral = oracle::integrate_half_line([&](double t) {
            return std::exp(-2 * k * s - 6 * k * k * beta * t);
        });
        const double one_integral = oracle::integrate(
            [&](double t) { return std::exp(2 * k * s - 6 * k * k * beta * t); }, 0.0, s / (3 * k * beta));
        const double a0 = normalization_constant(zero);
        const double a1 = normalization_constant(one);
        EXPECT_NEAR(a0 * a0 * zero_integral, 1.0, 1e-6);
        EXPECT_NEAR(a1 * a1 * one_integral, 1.0, 1e-6);
    }
}

TEST(VortexRatio, Examples)
{
    EXPECT_NEAR(vortex_ratio(1.0, 1.0), 47.209093934213589, 1e-12);
    EXPECT_NEAR(vortex_ratio(0.5, 1.0), 4.670774270471605, 1e-13);
    EXPECT_LT(vortex_ratio(1e-9, 1.0), 1e-8);
    EXPECT_THROW(vortex_ratio(0.0, 1.0), PreconditionError);
}

TEST(VortexRatio, EqualsSquaredNormalizationRatio)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(0.05, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double k = d(rng), s = d(rng);
        const double a0 = normalization_constant(VortexSolution::make(Branch::zero_vortex, k, s, 1.3));
        const double a1 = normalization_constant(VortexSolution::make(Branch::one_vortex, k, s, 1.3));
        const double ratio = vortex_ratio(k, s);
        EXPECT_NEAR((a0 / a1) * (a0 / a1), ratio, 1e-9 * ratio);
    }
}

TEST(ThresholdLifetime, Example)
{
    EXPECT_NEAR(threshold_lifetime(1.0, 1.0, 1.0, 1e-6), 4.271836852654758, 1e-13);
    EXPECT_LE(threshold_lifetime(1.0, 1.0, 1.0, std::exp(-1.0)), 1e-15);
    EXPECT_THROW(threshold_lifetime(1.0, 1.0, 1.0, 1.0), PreconditionError);
}

TEST(GradientMap, BoundaryPoints)
{
    EXPECT_EQ(gradient_map_point(Branch::one_vortex, 1.0, 1.0), (GradientPoint{1, 1, 1}));
    EXPECT_EQ(gradient_map_point(Branch::zero_vortex, 1.0, 1.0), (GradientPoint{-1, -1, 1}));
    const GradientPoint near_origin = gradient_map_point(Branch::zero_vortex, 1.0, 1e-9);
    EXPECT_LT(std::hypot(near_origin.grad_x, near_origin.grad_y, near_origin.z), 1e-8);
}

TEST(GradientMap, SegmentsAreStraightLinesOnBranchDomains)
{
    const auto one = gradient_map_segment(Branch::one_vortex, 0.5, 1.0, 4.0, 7);
    ASSERT_EQ(one.size(), 7u);
    EXPECT_EQ(one.front(), (GradientPoint{0.5, 0.5, 1.0}));
    EXPECT_EQ(one.back().z, 4.0);
    for (const GradientPoint &p : one) {
        EXPECT_DOUBLE_EQ(p.grad_x, 0.5 * p.z);
        EXPECT_EQ(p.grad_x, p.grad_y);
    }
    EXPECT_THROW(gradient_map_segment(Branch::one_vortex, 0.5, 0.5, 4.0, 7), PreconditionError);
    EXPECT_THROW(gradient_map_segment(Branch::zero_vortex, 0.5, 0.5, 1.5, 7), PreconditionError);
    EXPECT_THROW(gradient_map_segment(Branch::zero_vortex, 0.5, 0.0, 1.0, 7), PreconditionError);
}

TEST(GradientMap, GradientMatchesSolutionPartials)
{
    // Along a solution the map point is exactly (z_x, z_y, z).
    const VortexSolution sol = VortexSolution::make(Branch::zero_vortex, 0.9, 0.4, 1.0);
    const ZField field = sol.field();
    const Point p{0.1, 0.3, 0.2};
    const ZDerivatives d = field.derivatives(p);
    const GradientPoint g = gradient_map_point(Branch::zero_vortex, 0.9, d.z);
    EXPECT_NEAR(g.grad_x, d.z_x, 1e-15);
    EXPECT_NEAR(g.grad_y, d.z_y, 1e-15);
}

TEST(Involution, Examples)
{
    const GradientPoint image = segment_involution({2, 2, 2}, 1.0);
    EXPECT_EQ(image, (GradientPoint{-0.5, -0.5, 0.5}));
    const GradientPoint far = segment_involution(gradient_map_point(Branch::one_vortex, 1.0, 1e12), 1.0);
    EXPECT_LT(std::hypot(far.grad_x, far.grad_y, far.z), 1e-11);
    EXPECT_THROW(segment_involution({1, 1, 1}, 1.0), PreconditionError);
    EXPECT_THROW(segment_involution({1, 2, 2}, 1.0), PreconditionError);
}

TEST(Involution, ImagesLieOnZeroLineAndInvert)
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> kd(0.1, 5.0), zd(1.0001, 50.0);
    for (int i = 0; i < 200; ++i) {
        const double k = kd(rng);
        const GradientPoint source = gradient_map_point(Branch::one_vortex, k, zd(rng));
        const GradientPoint image = segment_involution(source, k);
        EXPECT_TRUE(in_branch_domain(Branch::zero_vortex, image.z));
        EXPECT_NEAR(image.grad_x, -k * image.z, 1e-12 * k);
        EXPECT_NEAR(image.grad_y, -k * image.z, 1e-12 * k);
        const GradientPoint back = inverse_segment_involution(image, k);
        EXPECT_NEAR(back.z, source.z, 1e-12 * source.z);
        EXPECT_NEAR(back.grad_x, source.grad_x, 1e-12 * std::abs(source.grad_x));
    }
}

TEST(SquaredMap, ReunitesSegmentsOnOneRay)
{
    EXPECT_EQ(squared_map(Branch::one_vortex, 1.0, 1.0), (GradientPoint{1, 1, 1}));
    EXPECT_EQ(squared_map(Branch::zero_vortex, 1.0, 1.0), (GradientPoint{1, 1, 1}));
    const GradientPoint p = squared_map(Branch::one_vortex, 2.0, 1.5);
    EXPECT_DOUBLE_EQ(p.grad_x, 9.0);
    EXPECT_DOUBLE_EQ(p.grad_y, 9.0);
    EXPECT_DOUBLE_EQ(p.z, 2.25);

    // Points from both branches satisfy grad = k^2 z_sq: one ray through the origin.
    for (double z : {0.1, 0.5, 0.99}) {
        const GradientPoint q = squared_map(Branch::zero_vortex, 1.0, z);
        EXPECT_DOUBLE_EQ(q.grad_x, q.z);
    }
    for (double z : {1.01, 2.0, 7.0}) {
        const GradientPoint q = squared_map(Branch::one_vortex, 1.0, z);
        EXPECT_DOUBLE_EQ(q.grad_x, q.z);
    }
    EXPECT_THROW(squared_map(Branch::one_vortex, 1.0, 0.5), PreconditionError);
}
