#pragma once

#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace zvortex::cli {

enum class Command { verify, trajectory, ladder, ensemble, geometry };
enum class OutputFormat { csv, json };

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

/// Tolerance override for the closed-form residual checks in `verify`.
inline constexpr const char *kToleranceEnv = "ZVORTEX_TOLERANCE";

struct RunConfig
{
    Command command = Command::verify;
    std::optional<std::string> params_path;
    std::optional<std::string> out_path; // standard output when unset
    std::optional<OutputFormat> format;  // csv unless the command says otherwise
    std::optional<double> hbar;
    std::optional<double> mass;
    std::optional<unsigned long long> seed;
    std::optional<std::string> bits_path; // ensemble bit stream
    bool natural_units = true;
};

/// Thrown for malformed parameters; maps to exit code 2.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Each command writes its primary output to `out` and diagnostics to `err`, and
/// returns an ExitCode. Parameter objects are the parsed --params file (or empty).
int cmd_verify(const RunConfig &config, const nlohmann::ordered_json &params, std::ostream &out, std::ostream &err);
int cmd_trajectory(const RunConfig &config, const nlohmann::ordered_json &params, std::ostream &out, std::ostream &err);
int cmd_ladder(const RunConfig &config, const nlohmann::ordered_json &params, std::ostream &out, std::ostream &err);
int cmd_ensemble(const RunConfig &config, const nlohmann::ordered_json &params, std::ostream &out, std::ostream &err);
int cmd_geometry(const RunConfig &config, const nlohmann::ordered_json &params, std::ostream &out, std::ostream &err);

/// Full driver: parses argv, loads params, dispatches, writes --out.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace zvortex::cli
