#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nsv/config.hpp"
#include "nsv/harness.hpp"

namespace {

struct Command {
    nsv::Subcommand sub;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
};

std::string dashed(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"NSV spectral simulation and verification lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nsv::kToolVersion));

    std::map<std::string, std::string> universal;
    std::string config_file;
    std::string target;

    std::vector<Command> commands;
    const std::pair<nsv::Subcommand, const char*> subs[] = {
        {nsv::Subcommand::simulate, "integrate the NSV system and write diagnostics"},
        {nsv::Subcommand::lyapunov, "estimate q(n) and n* from a co-evolved tangent frame"},
        {nsv::Subcommand::bounds, "evaluate every attractor-dimension bound"},
        {nsv::Subcommand::verify, "check an inequality target: spectrum, liyau, lt, rho-l2, rho-linf"},
    };
    commands.reserve(std::size(subs));
    for (const auto& [sub, help] : subs) {
        commands.push_back({sub, app.add_subcommand(std::string(nsv::to_string(sub)), help), {}});
        Command& c = commands.back();
        c.app->add_option("--config", config_file, "JSON configuration file");
        c.app->add_option("--seed", universal["seed"], "seed of every random draw");
        c.app->add_option("--output-dir,--output_dir", universal["output_dir"],
                          std::string("output directory (env ") + nsv::kOutputDirEnv + ")");
        c.app->add_option("--formats", universal["formats"], "comma-separated subset of csv, json");
        for (const auto& p : nsv::config_schema()) {
            if (p.key == "subcommand" || p.key == "seed" || p.key == "output_dir" || p.key == "formats") continue;
            if (std::find(p.used_by.begin(), p.used_by.end(), sub) == p.used_by.end()) continue;
            if (p.key == "target") continue;
            std::string names = "--" + p.key;
            if (dashed(p.key) != p.key) names += ",--" + dashed(p.key);
            c.app->add_option(names, c.values[p.key], p.help + " (default " + p.default_value.dump() + ")");
        }
        if (sub == nsv::Subcommand::verify) c.app->add_option("target", target, "verification target")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return nsv::exit_config_error;
    }

    const Command* chosen = nullptr;
    for (const auto& c : commands)
        if (c.app->parsed()) chosen = &c;

    nsv::RunConfig cfg;
    try {
        nsv::ConfigSources src;
        src.subcommand = chosen->sub;
        if (!config_file.empty()) src.file = nsv::read_config_file(config_file);
        if (const char* env = std::getenv(nsv::kOutputDirEnv); env && *env) src.env_output_dir = env;
        for (const auto& [k, v] : universal)
            if (!v.empty()) src.flags[k] = v;
        for (const auto& [k, v] : chosen->values)
            if (!v.empty()) src.flags[k] = v;
        if (!target.empty()) src.flags["target"] = target;
        cfg = nsv::parse_config(src);
    } catch (const nsv::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return nsv::exit_config_error;
    } catch (const nsv::FormatError& e) {
        std::cerr << e.what() << '\n';
        return nsv::exit_config_error;
    }

    const auto manifest = nsv::run(cfg, std::cout);
    std::cout << "outputs in " << cfg.output_dir.string() << " (exit " << manifest.exit_code << ")\n";
    return manifest.exit_code;
}
