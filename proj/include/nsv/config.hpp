#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nsv/bounds.hpp"
#include "nsv/dynamics.hpp"
#include "nsv/inequality.hpp"
#include "nsv/lyapunov.hpp"

namespace nsv {

enum class Subcommand { simulate, lyapunov, bounds, verify };

std::string_view to_string(Subcommand s) noexcept;
Subcommand subcommand_from_string(std::string_view name);

enum class ParamType { number, integer, string, number_list, mode_list };

/// One accepted configuration key.
struct ParamSpec {
    std::string key;
    ParamType type;
    std::vector<Subcommand> used_by;
    nlohmann::json default_value;
    std::string help;
};

/// Every key of the flat key-value schema, in documentation order.
const std::vector<ParamSpec>& config_schema();

inline constexpr const char* kOutputDirEnv = "NSVLAB_OUTPUT_DIR";

/// A validated run description. `params` holds every key of the subcommand with
/// defaults filled in, so the JSON form is complete and round-trips.
struct RunConfig {
    Subcommand subcommand = Subcommand::bounds;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "nsvlab-out";
    std::vector<std::string> formats{"csv", "json"};
    nlohmann::json params = nlohmann::json::object();

    SimConfig sim_config() const;
    LyapunovConfig lyapunov_config() const;
    std::size_t scan_max() const;
    BoundsInput bounds_input() const;
    ConstantSet threshold_constants() const;

    std::string verify_target() const;
    SweepConfig sweep_config() const;
    std::int64_t param_int(const std::string& key) const;

    bool wants(std::string_view format) const;
};

/// Sources of one configuration, lowest precedence first: schema defaults,
/// the file object, the output-dir environment value, then flags.
struct ConfigSources {
    std::optional<Subcommand> subcommand;
    nlohmann::json file = nlohmann::json::object();
    /// Raw flag strings by key, converted according to the schema.
    std::map<std::string, std::string> flags;
    std::optional<std::string> env_output_dir;
};

/// Merges and validates; throws ConfigError listing every problem
/// (unknown key, type mismatch, constraint violation).
RunConfig parse_config(const ConfigSources& sources);

/// Reads a JSON config file into ConfigSources::file; FormatError on malformed JSON.
nlohmann::json read_config_file(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& cfg);
/// to_json followed by parse_config with no other sources.
RunConfig run_config_from_json(const nlohmann::json& j);

/// FNV-1a over the canonical JSON of the config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace nsv
