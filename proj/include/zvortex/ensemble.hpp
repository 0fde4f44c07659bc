#pragma once

// Discrete-event simulation of a vortex population. Vortices arrive as a Poisson
// stream, each independently a 0-vortex with probability r / (1 + r). A 1-vortex
// emits bit 1 at its collapse time s / (3 k beta); a 0-vortex emits bit 0 once z
// has decayed to the threshold epsilon.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "vortex.hpp"

namespace zvortex {

struct EnsembleConfig
{
    double pair_production_rate = 1000.0; // vortices produced per unit time
    double ratio_zero_to_one = 1.0;       // production ratio r of 0-vortices to 1-vortices
    double k = 1.0;
    double s = 1.0;
    double beta = 1.0;
    double epsilon = 1e-6; // 0-vortex collapse threshold on z
    double horizon = 50.0;
    std::uint64_t seed = 1;
    std::size_t digest_length = 64;
    bool record_bits = false;
    double sample_interval = 0.0; // time-series spacing; 0 disables the series

    double zero_probability() const noexcept { return ratio_zero_to_one / (1.0 + ratio_zero_to_one); }
    double one_lifetime() const noexcept { return s / (3.0 * k * beta); }
    double zero_lifetime() const { return threshold_lifetime(k, s, beta, epsilon); }
    double max_lifetime() const { return std::max(one_lifetime(), zero_lifetime()); }

    void validate() const
    {
        const auto positive = [](double value) { return std::isfinite(value) && value > 0.0; };
        detail::require<ConfigError>(positive(pair_production_rate), "production rate must be positive");
        detail::require<ConfigError>(std::isfinite(ratio_zero_to_one) && ratio_zero_to_one >= 0.0,
                                     "production ratio must be finite and non-negative");
        detail::require<ConfigError>(positive(k) && positive(s) && positive(beta), "k, s and beta must be positive");
        detail::require<ConfigError>(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
        detail::require<ConfigError>(positive(horizon), "horizon must be positive");
        detail::require<ConfigError>(std::isfinite(sample_interval) && sample_interval >= 0.0,
                                     "sample interval must be non-negative");
        detail::require<ConfigError>(zero_lifetime() > 0.0,
                                     "0-vortex lifetime is not positive: epsilon must be below exp(-k s)");
    }
};

struct EnsembleSample
{
    double t = 0.0;
    std::uint64_t live_zero = 0;
    std::uint64_t live_one = 0;
    std::uint64_t emitted_zero = 0;
    std::uint64_t emitted_one = 0;
    std::uint64_t produced_zero = 0;
    std::uint64_t produced_one = 0;
};

struct EnsembleReport
{
    std::uint64_t produced_zero = 0;
    std::uint64_t produced_one = 0;
    std::uint64_t emitted_zero = 0;
    std::uint64_t emitted_one = 0;
    std::uint64_t live_zero = 0;
    std::uint64_t live_one = 0;
    std::string bit_digest; // first digest_length emitted bits
    std::string bits;       // full stream, only when record_bits is set

    double zero_lifetime = 0.0;
    double one_lifetime = 0.0;
    // Stationary window [window_start, horizon], window_start = longest lifetime.
    double window_start = 0.0;
    std::uint64_t window_emitted_zero = 0;
    std::uint64_t window_emitted_one = 0;
    double mean_live_zero = 0.0; // time-averaged over the window
    double mean_live_one = 0.0;
    double empirical_ratio = 0.0; // mean_live_zero / mean_live_one
    bool stationary = false;      // horizon >= 10 x longest lifetime

    std::vector<EnsembleSample> series;

    std::uint64_t produced() const noexcept { return produced_zero + produced_one; }
    std::uint64_t emitted() const noexcept { return emitted_zero + emitted_one; }
    std::uint64_t live() const noexcept { return live_zero + live_one; }
};

namespace detail {

/// 53-bit uniform in [0, 1) from a raw 64-bit draw; identical on every platform.
inline double uniform01(std::mt19937_64 &rng) noexcept { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double exponential(std::mt19937_64 &rng, double rate) noexcept { return -std::log1p(-uniform01(rng)) / rate; }

} // namespace detail

inline EnsembleReport simulate(const EnsembleConfig &config)
{
    config.validate();

    EnsembleReport report;
    report.zero_lifetime = config.zero_lifetime();
    report.one_lifetime = config.one_lifetime();
    report.window_start = std::min(config.max_lifetime(), config.horizon);
    report.stationary = config.horizon >= 10.0 * config.max_lifetime();

    std::mt19937_64 rng(config.seed);
    const double p_zero = config.zero_probability();
    const double horizon = config.horizon;
    const double window_start = report.window_start;
    constexpr double never = std::numeric_limits<double>::infinity();

    // Lifetimes are constant per branch, so collapses leave each queue in arrival order.
    std::deque<double> collapse_zero;
    std::deque<double> collapse_one;
    double occupancy_zero = 0.0;
    double occupancy_one = 0.0;
    double clock = 0.0;
    double next_sample = config.sample_interval > 0.0 ? 0.0 : never;
    std::size_t sample_index = 0;

    const auto snapshot = [&](double t) {
        report.series.push_back({t, report.produced_zero - report.emitted_zero,
                                 report.produced_one - report.emitted_one, report.emitted_zero, report.emitted_one,
                                 report.produced_zero, report.produced_one});
    };
    const auto flush_samples = [&](double until) {
        while (next_sample < until && next_sample <= horizon) {
            snapshot(next_sample);
            ++sample_index;
            next_sample = static_cast<double>(sample_index) * config.sample_interval;
        }
    };
    const auto advance = [&](double t) {
        const double from = std::max(clock, window_start);
        if (t > from) {
            occupancy_zero += static_cast<double>(collapse_zero.size()) * (t - from);
            occupancy_one += static_cast<double>(collapse_one.size()) * (t - from);
        }
        clock = t;
    };
    const auto emit = [&](char bit, double t) {
        if (report.bit_digest.size() < config.digest_length) {
            report.bit_digest.push_back(bit);
        }
        if (config.record_bits) {
            report.bits.push_back(bit);
        }
        const bool in_window = t >= window_start;
        if (bit == '0') {
            ++report.emitted_zero;
            report.window_emitted_zero += in_window ? 1 : 0;
        } else {
            ++report.emitted_one;
            report.window_emitted_one += in_window ? 1 : 0;
        }
    };

    double next_birth = detail::exponential(rng, config.pair_production_rate);
    while (true) {
        const double due_zero = collapse_zero.empty() ? never : collapse_zero.front();
        const double due_one = collapse_one.empty() ? never : collapse_one.front();
        const double t = std::min({next_birth, due_zero, due_one});
        if (t > horizon) {
            break;
        }
        flush_samples(t);
        advance(t);
        // Collapses before births at equal times; 1-vortices first on a tie.
        if (due_one <= t) {
            collapse_one.pop_front();
            emit('1', t);
        } else if (due_zero <= t) {
            collapse_zero.pop_front();
            emit('0', t);
        } else {
            if (detail::uniform01(rng) < p_zero) {
                ++report.produced_zero;
                collapse_zero.push_back(t + report.zero_lifetime);
            } else {
                ++report.produced_one;
                collapse_one.push_back(t + report.one_lifetime);
            }
            next_birth = t + detail::exponential(rng, config.pair_production_rate);
        }
    }
    flush_samples(never);
    advance(horizon);

    report.live_zero = collapse_zero.size();
    report.live_one = collapse_one.size();
    const double window = horizon - window_start;
    if (window > 0.0) {
        report.mean_live_zero = occupancy_zero / window;
        report.mean_live_one = occupancy_one / window;
    }
    report.empirical_ratio = report.mean_live_one > 0.0 ? report.mean_live_zero / report.mean_live_one
                                                        : std::numeric_limits<double>::infinity();
    return report;
}

struct SteadyStateCounts
{
    double live_zero = 0.0;
    double live_one = 0.0;
};

/// Stationary occupancy: production rate of each branch times its lifetime.
inline SteadyStateCounts steady_state_counts(const EnsembleConfig &config)
{
    config.validate();
    const double p_zero = config.zero_probability();
    return {config.pair_production_rate * p_zero * config.zero_lifetime(),
            config.pair_production_rate * (1.0 - p_zero) * config.one_lifetime()};
}

struct EqualizationReport
{
    double production_ratio = 0.0;
    std::uint64_t emitted_zero = 0; // within the stationary window
    std::uint64_t emitted_one = 0;
    double emitted_ratio = 0.0;
    double z_score = 0.0; // zeros among window emissions against Binomial(n, r / (1 + r))
    bool within_3sigma = false;
    double live_ratio = 0.0;          // time-averaged live_zero / live_one
    double expected_live_ratio = 0.0; // from steady_state_counts
    bool horizon_warning = false;     // horizon shorter than 10 x longest lifetime
    EnsembleReport ensemble;
};

/// Compares the bit-emission ratio against the production ratio, and reports the
/// live-population ratio separately.
inline EqualizationReport equalization_check(const EnsembleConfig &config)
{
    EqualizationReport out;
    out.ensemble = simulate(config);
    const EnsembleReport &r = out.ensemble;

    out.production_ratio = config.ratio_zero_to_one;
    out.emitted_zero = r.window_emitted_zero;
    out.emitted_one = r.window_emitted_one;
    constexpr double inf = std::numeric_limits<double>::infinity();
    out.emitted_ratio = out.emitted_one > 0 ? static_cast<double>(out.emitted_zero) / out.emitted_one : inf;

    const double n = static_cast<double>(out.emitted_zero + out.emitted_one);
    const double p = config.zero_probability();
    const double sigma = std::sqrt(n * p * (1.0 - p));
    const double deviation = static_cast<double>(out.emitted_zero) - n * p;
    if (sigma > 0.0) {
        out.z_score = deviation / sigma;
        out.within_3sigma = std::abs(out.z_score) <= 3.0;
    } else {
        out.z_score = deviation == 0.0 ? 0.0 : inf;
        out.within_3sigma = deviation == 0.0;
    }

    const SteadyStateCounts expected = steady_state_counts(config);
    out.live_ratio = r.empirical_ratio;
    out.expected_live_ratio = expected.live_one > 0.0 ? expected.live_zero / expected.live_one : inf;
    out.horizon_warning = !r.stationary;
    return out;
}

} // namespace zvortex
