#pragma once

// CSV and JSON encodings for residual grids, trajectories, geometry, ladders,
// k traces and ensemble runs. CSV numbers are printed with 17 significant digits.

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "energy.hpp"
#include "ensemble.hpp"
#include "field.hpp"
#include "ladder.hpp"
#include "vortex.hpp"

namespace zvortex::io {

using Json = nlohmann::ordered_json;

inline std::string format_double(double value)
{
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

/// JSON has no infinities; non-finite values are written as null.
inline Json number_or_null(double value) { return std::isfinite(value) ? Json(value) : Json(nullptr); }

class CsvWriter
{
public:
    explicit CsvWriter(std::ostream &out) : out_(out) {}

    CsvWriter &header(std::initializer_list<const char *> columns)
    {
        bool first = true;
        for (const char *column : columns) {
            out_ << (first ? "" : ",") << column;
            first = false;
        }
        out_ << '\n';
        return *this;
    }

    template <class... Fields> CsvWriter &row(const Fields &...fields)
    {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(fields), first = false), ...);
        out_ << '\n';
        return *this;
    }

private:
    static std::string cell(double value) { return format_double(value); }
    static std::string cell(const std::string &value) { return value; }
    static std::string cell(const char *value) { return value; }
    template <class Int> static std::string cell(Int value) requires std::is_integral_v<Int>
    {
        return std::to_string(value);
    }

    std::ostream &out_;
};

// ---------------------------------------------------------------------------
// Residual grids

inline void write_residual_csv(std::ostream &out, const ResidualGrid &grid)
{
    CsvWriter csv(out);
    csv.header({"r_x", "r_y", "t", "residual_real", "residual_imag"});
    for (const ResidualSample &s : grid.samples) {
        csv.row(s.point.rx, s.point.ry, s.point.t, s.residual_real, s.residual_imag);
    }
}

inline Json to_json(const GridAxis &axis) { return {{"lower", axis.lower}, {"upper", axis.upper}, {"count", axis.count}}; }

inline GridAxis axis_from_json(const Json &j)
{
    return {j.at("lower").get<double>(), j.at("upper").get<double>(), j.at("count").get<std::size_t>()};
}

inline Json to_json(const GridSpec &spec)
{
    return {{"r_x", to_json(spec.rx)}, {"r_y", to_json(spec.ry)}, {"t", to_json(spec.t)}};
}

inline GridSpec grid_from_json(const Json &j)
{
    return {axis_from_json(j.at("r_x")), axis_from_json(j.at("r_y")), axis_from_json(j.at("t"))};
}

inline Json residual_summary_json(const ResidualGrid &grid)
{
    const GridSummary s = grid.summary();
    return {{"max_abs_real", s.max_abs_real},   {"max_abs_imag", s.max_abs_imag},
            {"mean_abs_real", s.mean_abs_real}, {"mean_abs_imag", s.mean_abs_imag},
            {"count", s.count},                 {"grid", to_json(grid.spec)}};
}

// ---------------------------------------------------------------------------
// Vortex trajectories and geometry

inline void write_trajectory_csv(std::ostream &out, std::span<const TrajectoryPoint> points)
{
    CsvWriter csv(out);
    csv.header({"t", "u", "v", "radius", "gradient_radius"});
    for (const TrajectoryPoint &p : points) {
        csv.row(p.t, p.u, p.v, p.radius, p.gradient_radius);
    }
}

inline Json to_json(const TrajectoryPoint &p)
{
    return {{"t", p.t}, {"u", p.u}, {"v", p.v}, {"radius", p.radius}, {"gradient_radius", p.gradient_radius}};
}

/// {branch, k, s, beta, collapse_time}; collapse_time is null for a 0-vortex.
inline Json solution_json(const VortexSolution &sol)
{
    return {{"branch", to_string(sol.branch)},
            {"k", sol.k},
            {"s", sol.s},
            {"beta", sol.beta},
            {"collapse_time", number_or_null(collapse_time(sol))}};
}

inline VortexSolution solution_from_json(const Json &j)
{
    return VortexSolution::make(parse_branch(j.at("branch").get<std::string>()), j.at("k").get<double>(),
                                j.at("s").get<double>(), j.at("beta").get<double>());
}

struct GeometryRow
{
    std::string kind; // segment | involution | squared
    Branch branch = Branch::one_vortex;
    double source_z = 0.0;
    GradientPoint point;
};

inline void write_geometry_csv(std::ostream &out, std::span<const GeometryRow> rows)
{
    CsvWriter csv(out);
    csv.header({"kind", "branch", "source_z", "grad_x", "grad_y", "z"});
    for (const GeometryRow &r : rows) {
        csv.row(r.kind, to_string(r.branch), r.source_z, r.point.grad_x, r.point.grad_y, r.point.z);
    }
}

// ---------------------------------------------------------------------------
// Energy ladders

inline EnergyLadder ladder_from_json(const Json &j) { return EnergyLadder(j.at("eigenvalues").get<std::vector<double>>()); }

inline Json to_json(const EnergyLadder &ladder)
{
    return {{"eigenvalues", std::vector<double>(ladder.eigenvalues().begin(), ladder.eigenvalues().end())}};
}

inline void write_trace_csv(std::ostream &out, std::span<const KTracePoint> trace)
{
    CsvWriter csv(out);
    csv.header({"step", "E", "j", "k"});
    for (const KTracePoint &p : trace) {
        csv.row(p.step, p.energy, p.j, p.k);
    }
}

inline Json to_json(const KTracePoint &p) { return {{"step", p.step}, {"E", p.energy}, {"j", p.j}, {"k", p.k}}; }

// ---------------------------------------------------------------------------
// Ensembles

/// Reads the keys present in j on top of base.
inline EnsembleConfig ensemble_config_from_json(const Json &j, EnsembleConfig base = {})
{
    const auto read = [&j](const char *key, auto &field) {
        if (j.contains(key)) {
            field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
        }
    };
    read("pair_production_rate", base.pair_production_rate);
    read("ratio_zero_to_one", base.ratio_zero_to_one);
    read("k", base.k);
    read("s", base.s);
    read("beta", base.beta);
    read("epsilon", base.epsilon);
    read("horizon", base.horizon);
    read("seed", base.seed);
    read("digest_length", base.digest_length);
    read("record_bits", base.record_bits);
    read("sample_interval", base.sample_interval);
    return base;
}

inline Json to_json(const EnsembleConfig &c)
{
    return {{"pair_production_rate", c.pair_production_rate},
            {"ratio_zero_to_one", c.ratio_zero_to_one},
            {"k", c.k},
            {"s", c.s},
            {"beta", c.beta},
            {"epsilon", c.epsilon},
            {"horizon", c.horizon},
            {"seed", c.seed},
            {"digest_length", c.digest_length},
            {"record_bits", c.record_bits},
            {"sample_interval", c.sample_interval}};
}

inline Json to_json(const EnsembleReport &r)
{
    return {{"bits_emitted", {{"zero", r.emitted_zero}, {"one", r.emitted_one}}},
            {"produced", {{"zero", r.produced_zero}, {"one", r.produced_one}}},
            {"live_zero", r.live_zero},
            {"live_one", r.live_one},
            {"bit_sequence_digest", r.bit_digest},
            {"empirical_ratio", number_or_null(r.empirical_ratio)},
            {"mean_live_zero", r.mean_live_zero},
            {"mean_live_one", r.mean_live_one},
            {"lifetimes", {{"zero", r.zero_lifetime}, {"one", r.one_lifetime}}},
            {"window",
             {{"start", r.window_start}, {"emitted_zero", r.window_emitted_zero}, {"emitted_one", r.window_emitted_one}}},
            {"stationary", r.stationary}};
}

inline Json to_json(const EqualizationReport &e)
{
    return {{"production_ratio", e.production_ratio},
            {"emitted_zero", e.emitted_zero},
            {"emitted_one", e.emitted_one},
            {"emitted_ratio", number_or_null(e.emitted_ratio)},
            {"z_score", number_or_null(e.z_score)},
            {"within_3sigma", e.within_3sigma},
            {"live_ratio", number_or_null(e.live_ratio)},
            {"expected_live_ratio", number_or_null(e.expected_live_ratio)},
            {"horizon_warning", e.horizon_warning}};
}

inline void write_series_csv(std::ostream &out, std::span<const EnsembleSample> series)
{
    CsvWriter csv(out);
    csv.header({"t", "live0", "live1", "emitted0", "emitted1"});
    for (const EnsembleSample &s : series) {
        csv.row(s.t, s.live_zero, s.live_one, s.emitted_zero, s.emitted_one);
    }
}

} // namespace zvortex::io
