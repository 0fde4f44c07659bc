#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zvortex/zvortex.hpp"

namespace zvortex::cli {

namespace {

using Json = nlohmann::ordered_json;

template <class T> T param_or(const Json &params, const char *key, T fallback)
{
    if (!params.contains(key) || params.at(key).is_null()) {
        return fallback;
    }
    try {
        return params.at(key).get<T>();
    } catch (const Json::exception &e) {
        throw UsageError(std::string("parameter '") + key + "': " + e.what());
    }
}

/// flag > params file > natural units
PhysicalParams physical_params(const RunConfig &config, const Json &params)
{
    const double hbar = config.hbar.value_or(param_or(params, "hbar", 1.0));
    const double mass = config.mass.value_or(param_or(params, "mass", 1.0));
    return {hbar, mass};
}

OutputFormat format_or(const RunConfig &config, OutputFormat fallback) { return config.format.value_or(fallback); }

// ---------------------------------------------------------------------------
// verify

struct Check
{
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool passed() const { return std::isfinite(max_residual) && max_residual < tolerance; }
};

double solution_tolerance(const Json &params)
{
    double fallback = 1e-10;
    if (const char *env = std::getenv(kToleranceEnv); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const double parsed = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(parsed > 0.0)) {
            throw UsageError(std::string(kToleranceEnv) + " must be a positive number");
        }
        fallback = parsed;
    }
    return param_or(params, "tolerance", fallback);
}

/// Adds noise * t to a field, shifting the analytic z_t accordingly.
ZField perturbed(const ZField &field, double noise)
{
    if (noise == 0.0) {
        return field;
    }
    return ZField([field, noise](const Point &p) { return field.value(p) + noise * p.t; },
                  ZField::DerivativeFn([field, noise](const Point &p) {
                      ZDerivatives d = field.derivatives(p, Differentiation::analytic);
                      d.z += noise * p.t;
                      d.z_t += noise;
                      return d;
                  }));
}

CParam exponent_param(const Json &params, const char *key, CParam fallback)
{
    const auto pair = param_or(params, key, std::vector<double>{fallback.x, fallback.y});
    if (pair.size() != 2) {
        throw UsageError(std::string("parameter '") + key + "' must be a pair [x, y]");
    }
    return {pair[0], pair[1]};
}

} // namespace

int cmd_verify(const RunConfig &config, const Json &params, std::ostream &out, std::ostream &err)
{
    const auto zs = param_or(params, "z", std::vector<double>{0.5, 0.8, 1.0, 1.5, 2.0});
    const auto xs = param_or(params, "x", std::vector<double>{-2, -1, 0, 1, 2});
    const auto ys = param_or(params, "y", std::vector<double>{-2, -1, 0, 1, 2});
    for (double z : zs) {
        if (!(z > 0.0) || !std::isfinite(z)) {
            throw UsageError("verify grid requires z > 0, got " + io::format_double(z));
        }
    }
    if (zs.empty() || xs.empty() || ys.empty()) {
        throw UsageError("verify grid axes must be non-empty");
    }
    const double h_cr = param_or(params, "h_cauchy_riemann", kFirstDerivativeStep);
    const double h_laplace = param_or(params, "h_laplace", kSecondDerivativeStep);
    const CParam contour_center = exponent_param(params, "contour_center", {1.0, 2.0});
    const double contour_radius = param_or(params, "contour_radius", 1.0);
    const int contour_points = param_or(params, "contour_points", kDefaultContourPoints);
    const int cauchy_points = param_or(params, "cauchy_points", 2 * kDefaultContourPoints);
    const CParam c = exponent_param(params, "c", kVortexExponent);
    const double potential = param_or(params, "U_f", 2.5);
    const double noise = param_or(params, "perturbation", 0.0);
    const double solution_tol = solution_tolerance(params);
    const PhysicalParams physical = physical_params(config, params);

    GridSpec grid{{-1.0, 1.0, 10}, {-1.0, 1.0, 10}, {0.0, 1.0, 10}};
    if (params.contains("field_grid")) {
        try {
            grid = io::grid_from_json(params.at("field_grid"));
        } catch (const Json::exception &e) {
            throw UsageError(std::string("parameter 'field_grid': ") + e.what());
        }
    }

    std::vector<Check> checks;

    Check cr{"cauchy_riemann", 0.0, param_or(params, "cauchy_riemann_tolerance", 1e-8)};
    Check laplace{"laplace_relative", 0.0, param_or(params, "laplace_tolerance", 1e-6)};
    for (double z : zs) {
        for (double x : xs) {
            for (double y : ys) {
                cr.max_residual = std::max(cr.max_residual, check_cauchy_riemann(z, {x, y}, h_cr).max());
                const double scale = std::pow(z, x);
                laplace.max_residual = std::max(laplace.max_residual, laplace_residual(z, {x, y}, h_laplace).max() / scale);
            }
        }
    }
    checks.push_back(cr);
    checks.push_back(laplace);

    Check contour{"contour_integral_relative", 0.0, param_or(params, "contour_tolerance", 1e-10)};
    Check formula{"cauchy_formula_relative", 0.0, param_or(params, "cauchy_tolerance", 1e-8)};
    for (double z : zs) {
        const ContourResult result = contour_integral(z, contour_center, contour_radius, contour_points);
        contour.max_residual = std::max(contour.max_residual, result.value.magnitude() / result.max_magnitude);
        for (double angle : {0.0, 2.0, 4.0}) {
            const CParam a{contour_center.x + 0.3 * contour_radius * std::cos(angle),
                           contour_center.y + 0.3 * contour_radius * std::sin(angle)};
            const Complex expected = eval_psi(z, a).as_complex();
            const Complex rebuilt = cauchy_formula(z, a, contour_center, contour_radius, cauchy_points).as_complex();
            formula.max_residual = std::max(formula.max_residual, std::abs(rebuilt - expected) / std::abs(expected));
        }
    }
    checks.push_back(contour);
    checks.push_back(formula);

    const Potential fixed = Potential::fixed(potential);
    const ResidualOptions analytic{Differentiation::analytic};
    const auto sweep = [&](const char *name, const ZField &field, bool real_part) {
        const GridSummary s = evaluate_grid(field, c, physical, fixed, grid, analytic).summary();
        checks.push_back({name, real_part ? s.max_abs_real : s.max_abs_imag, solution_tol});
    };
    sweep("real_solution_real_residual", perturbed(real_solution(potential, physical), noise), true);
    sweep("one_vortex_imag_residual",
          perturbed(imag_solution(Branch::one_vortex, potential, physical).field(), noise), false);
    sweep("zero_vortex_imag_residual",
          perturbed(imag_solution(Branch::zero_vortex, potential, physical).field(), noise), false);

    bool all_passed = true;
    for (const Check &check : checks) {
        all_passed = all_passed && check.passed();
        if (!check.passed()) {
            err << "verify: " << check.name << " residual " << io::format_double(check.max_residual)
                << " exceeds tolerance " << io::format_double(check.tolerance) << '\n';
        }
    }

    if (format_or(config, OutputFormat::json) == OutputFormat::json) {
        Json report;
        report["checks"] = Json::array();
        for (const Check &check : checks) {
            report["checks"].push_back({{"name", check.name},
                                        {"max_residual", io::number_or_null(check.max_residual)},
                                        {"tolerance", check.tolerance},
                                        {"passed", check.passed()}});
        }
        report["passed"] = all_passed;
        out << report.dump(2) << '\n';
    } else {
        io::CsvWriter csv(out);
        csv.header({"name", "max_residual", "tolerance", "passed"});
        for (const Check &check : checks) {
            csv.row(check.name, check.max_residual, check.tolerance, check.passed() ? "true" : "false");
        }
    }
    return all_passed ? kSuccess : kFailure;
}

// ---------------------------------------------------------------------------
// trajectory

namespace {

double wavenumber(const Json &params, const PhysicalParams &physical)
{
    if (params.contains("k")) {
        return param_or(params, "k", 0.0);
    }
    if (params.contains("U_f")) {
        return k_from_potential(param_or(params, "U_f", 0.0), physical);
    }
    throw UsageError("parameters need either 'k' or 'U_f'");
}

std::vector<double> time_grid(const Json &params)
{
    if (params.contains("t_grid")) {
        return param_or(params, "t_grid", std::vector<double>{});
    }
    if (!params.contains("t_end")) {
        throw UsageError("trajectory needs 't_grid' or 't_end' (with optional 't_start', 'steps')");
    }
    const double start = param_or(params, "t_start", 0.0);
    const double end = param_or(params, "t_end", 0.0);
    const auto steps = param_or<std::size_t>(params, "steps", 100);
    std::vector<double> times;
    times.reserve(steps + 1);
    for (std::size_t i = 0; i < steps; ++i) {
        times.push_back(start + (end - start) * static_cast<double>(i) / static_cast<double>(steps));
    }
    times.push_back(end);
    return times;
}

} // namespace

int cmd_trajectory(const RunConfig &config, const Json &params, std::ostream &out, std::ostream & /*err*/)
{
    const PhysicalParams physical = physical_params(config, params);
    const Branch branch = parse_branch(param_or<std::string>(params, "branch", "one_vortex"));
    const double k = wavenumber(params, physical);
    if (!(k > 0.0)) {
        throw DomainError("degenerate vortex: k = " + io::format_double(k) + " gives a static field");
    }
    const VortexSolution sol = VortexSolution::make(branch, k, param_or(params, "s", 1.0), physical.beta());
    const std::vector<double> times = time_grid(params);
    const std::vector<TrajectoryPoint> points = trajectory(sol, times);

    if (format_or(config, OutputFormat::csv) == OutputFormat::csv) {
        io::write_trajectory_csv(out, points);
        out << "# " << io::solution_json(sol).dump() << '\n';
    } else {
        Json doc;
        doc["solution"] = io::solution_json(sol);
        doc["points"] = Json::array();
        for (const TrajectoryPoint &p : points) {
            doc["points"].push_back(io::to_json(p));
        }
        out << doc.dump(2) << '\n';
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// ladder

int cmd_ladder(const RunConfig &config, const Json &params, std::ostream &out, std::ostream & /*err*/)
{
    const PhysicalParams physical = physical_params(config, params);
    const Json &ladder_json = params.contains("ladder") ? params.at("ladder") : params;
    if (!ladder_json.contains("eigenvalues") || !params.contains("schedule")) {
        throw UsageError("ladder needs 'eigenvalues' and 'schedule'");
    }
    const EnergyLadder ladder = io::ladder_from_json(ladder_json);
    const auto schedule = param_or(params, "schedule", std::vector<double>{});
    const std::vector<KTracePoint> trace = k_jump_trace(ladder, schedule, physical);

    if (format_or(config, OutputFormat::csv) == OutputFormat::csv) {
        io::write_trace_csv(out, trace);
    } else {
        Json doc;
        doc["ladder"] = io::to_json(ladder);
        doc["trace"] = Json::array();
        for (const KTracePoint &p : trace) {
            doc["trace"].push_back(io::to_json(p));
        }
        out << doc.dump(2) << '\n';
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// ensemble

int cmd_ensemble(const RunConfig &config, const Json &params, std::ostream &out, std::ostream &err)
{
    EnsembleConfig ensemble;
    try {
        ensemble = io::ensemble_config_from_json(params);
    } catch (const Json::exception &e) {
        throw UsageError(std::string("ensemble config: ") + e.what());
    }
    if (config.hbar || config.mass || params.contains("hbar") || params.contains("mass")) {
        ensemble.beta = physical_params(config, params).beta();
    }
    if (config.seed) {
        ensemble.seed = *config.seed;
    }
    if (config.bits_path) {
        ensemble.record_bits = true;
    }
    const OutputFormat format = format_or(config, OutputFormat::json);
    if (format == OutputFormat::csv && ensemble.sample_interval == 0.0) {
        ensemble.sample_interval = ensemble.horizon / 100.0;
    }

    const EqualizationReport check = equalization_check(ensemble);
    if (check.horizon_warning) {
        err << "ensemble: horizon is shorter than 10x the longest lifetime; counts may not be stationary\n";
    }
    if (config.bits_path) {
        std::ofstream bits(*config.bits_path, std::ios::binary);
        if (!bits) {
            throw UsageError("cannot open bit-stream file " + *config.bits_path);
        }
        bits << check.ensemble.bits;
    }

    if (format == OutputFormat::csv) {
        io::write_series_csv(out, check.ensemble.series);
    } else {
        const SteadyStateCounts expected = steady_state_counts(ensemble);
        Json doc;
        doc["config"] = io::to_json(ensemble);
        doc["report"] = io::to_json(check.ensemble);
        doc["steady_state"] = {{"live_zero", expected.live_zero}, {"live_one", expected.live_one}};
        doc["equalization"] = io::to_json(check);
        out << doc.dump(2) << '\n';
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// geometry

int cmd_geometry(const RunConfig &config, const Json &params, std::ostream &out, std::ostream & /*err*/)
{
    const PhysicalParams physical = physical_params(config, params);
    const double k = wavenumber(params, physical);
    const auto samples = param_or<std::size_t>(params, "samples", 11);
    const auto one_range = param_or(params, "one_z", std::vector<double>{1.0, 3.0});
    const auto zero_range = param_or(params, "zero_z", std::vector<double>{0.05, 1.0});
    if (one_range.size() != 2 || zero_range.size() != 2) {
        throw UsageError("'one_z' and 'zero_z' must be [from, to] pairs");
    }

    std::vector<io::GeometryRow> rows;
    const auto one = gradient_map_segment(Branch::one_vortex, k, one_range[0], one_range[1], samples);
    const auto zero = gradient_map_segment(Branch::zero_vortex, k, zero_range[0], zero_range[1], samples);
    for (const GradientPoint &p : one) {
        rows.push_back({"segment", Branch::one_vortex, p.z, p});
    }
    for (const GradientPoint &p : zero) {
        rows.push_back({"segment", Branch::zero_vortex, p.z, p});
    }
    for (const GradientPoint &p : one) {
        if (p.z > 1.0) {
            rows.push_back({"involution", Branch::zero_vortex, p.z, segment_involution(p, k)});
        }
    }
    for (const GradientPoint &p : zero) {
        rows.push_back({"squared", Branch::zero_vortex, p.z, squared_map(Branch::zero_vortex, k, p.z)});
    }
    for (const GradientPoint &p : one) {
        rows.push_back({"squared", Branch::one_vortex, p.z, squared_map(Branch::one_vortex, k, p.z)});
    }

    if (format_or(config, OutputFormat::csv) == OutputFormat::csv) {
        io::write_geometry_csv(out, rows);
    } else {
        Json doc = Json::array();
        for (const io::GeometryRow &r : rows) {
            doc.push_back({{"kind", r.kind},
                           {"branch", to_string(r.branch)},
                           {"source_z", r.source_z},
                           {"point", {r.point.grad_x, r.point.grad_y, r.point.z}}});
        }
        out << doc.dump(2) << '\n';
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// driver

namespace {

Json load_params(const std::optional<std::string> &path)
{
    if (!path) {
        return Json::object();
    }
    std::ifstream in(*path);
    if (!in) {
        throw UsageError("cannot read params file " + *path);
    }
    try {
        Json params = Json::parse(in);
        if (!params.is_object()) {
            throw UsageError("params file must hold a JSON object");
        }
        return params;
    } catch (const Json::parse_error &e) {
        throw UsageError("malformed params file " + *path + ": " + e.what());
    }
}

int dispatch(const RunConfig &config, const Json &params, std::ostream &out, std::ostream &err)
{
    switch (config.command) {
    case Command::verify:
        return cmd_verify(config, params, out, err);
    case Command::trajectory:
        return cmd_trajectory(config, params, out, err);
    case Command::ladder:
        return cmd_ladder(config, params, out, err);
    case Command::ensemble:
        return cmd_ensemble(config, params, out, err);
    case Command::geometry:
        return cmd_geometry(config, params, out, err);
    }
    return kUsage;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Verification and simulation tools for psi = z^c vortex solutions", "zvortex"};
    app.require_subcommand(1);

    RunConfig config;
    std::string params_path;
    std::string out_path;
    std::string format;
    std::string bits_path;
    double hbar = 0.0;
    double mass = 0.0;
    unsigned long long seed = 0;

    const struct
    {
        const char *name;
        Command command;
        const char *description;
    } commands[] = {
        {"verify", Command::verify, "Run the analyticity and residual checks"},
        {"trajectory", Command::trajectory, "Sample a vortex trajectory in the (u, v) plane"},
        {"ladder", Command::ladder, "Trace k along an energy schedule on an eigenvalue ladder"},
        {"ensemble", Command::ensemble, "Simulate a population of 0- and 1-vortices"},
        {"geometry", Command::geometry, "Sample the gradient-map segments and their maps"},
    };
    std::vector<std::pair<CLI::App *, Command>> subcommands;
    for (const auto &c : commands) {
        CLI::App *sub = app.add_subcommand(c.name, c.description);
        sub->add_option("--params", params_path, "JSON parameter file");
        sub->add_option("--out", out_path, "Output path (default: standard output)");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--hbar", hbar, "Reduced Planck constant (overrides params)");
        sub->add_option("--mass", mass, "Particle mass (overrides params)");
        sub->add_option("--seed", seed, "Random seed (overrides params)");
        if (c.command == Command::ensemble) {
            sub->add_option("--bits", bits_path, "Write the emitted bit stream as 0/1 text");
        }
        subcommands.emplace_back(sub, c.command);
    }

    std::vector<const char *> argv;
    argv.push_back("zvortex");
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "zvortex: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    for (const auto &[sub, command] : subcommands) {
        if (sub->parsed()) {
            config.command = command;
            const auto given = [sub](const char *flag) { return sub->count(flag) > 0; };
            if (given("--params")) config.params_path = params_path;
            if (given("--out")) config.out_path = out_path;
            if (given("--format")) config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
            if (given("--hbar")) config.hbar = hbar;
            if (given("--mass")) config.mass = mass;
            if (given("--seed")) config.seed = seed;
            if (command == Command::ensemble && given("--bits")) config.bits_path = bits_path;
        }
    }
    config.natural_units = !config.hbar && !config.mass;

    std::ostringstream buffer;
    int code = kSuccess;
    try {
        const Json params = load_params(config.params_path);
        code = dispatch(config, params, buffer, err);
    } catch (const UsageError &e) {
        err << "zvortex: usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const nlohmann::json::exception &e) {
        err << "zvortex: usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const BelowLadderError &e) {
        err << "zvortex: ladder error: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception &e) {
        err << "zvortex: " << e.what() << '\n';
        return kFailure;
    }

    if (config.out_path) {
        std::ofstream file(*config.out_path, std::ios::binary);
        if (!file) {
            err << "zvortex: cannot open output file " << *config.out_path << '\n';
            return kUsage;
        }
        file << buffer.str();
    } else {
        out << buffer.str();
    }
    return code;
}

} // namespace zvortex::cli
