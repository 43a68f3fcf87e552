#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsv/config.hpp"

namespace nsv {

inline constexpr const char* kToolName = "nsvlab";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr int kJsonSchemaVersion = 1;

/// Process status contract.
enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_config_error = 2,
    exit_runtime_error = 3,
};

struct ArtifactEntry {
    std::string path;  ///< relative to the output directory
    std::string kind;  ///< csv, json, text, snapshot
    std::uintmax_t bytes = 0;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
    /// false when the run was too short to decide; such checks do not gate the exit status
    bool assessed = true;
};

struct RunManifest {
    std::string config_hash;
    nlohmann::json config;
    std::string started;  ///< UTC, ISO 8601
    double wall_clock_seconds = 0.0;
    std::vector<ArtifactEntry> files;
    std::vector<CheckResult> checks;
    bool complete = false;
    std::string error;
    int exit_code = exit_ok;

    bool pass() const;
};

nlohmann::json to_json(const RunManifest& m);

/// Writes files into one directory via a temporary name and rename, and keeps
/// the list of everything written.
class OutputWriter {
public:
    explicit OutputWriter(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    const std::vector<ArtifactEntry>& files() const noexcept { return files_; }

    void write(const std::string& relative, const std::string& kind,
               const std::function<void(std::ostream&)>& body);
    void write_json(const std::string& relative, const nlohmann::json& j);
    /// Renames every file written so far to <name>.partial.
    void mark_partial();

private:
    std::filesystem::path dir_;
    std::vector<ArtifactEntry> files_;
};

/// Dispatches to the module, writes outputs and manifest.json. Never throws
/// for run-time failures: they end up in the manifest with exit_runtime_error.
/// `log` receives human-readable progress and summaries.
RunManifest run(const RunConfig& cfg, std::ostream& log);

}  // namespace nsv
