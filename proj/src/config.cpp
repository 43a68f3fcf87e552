#include "nsv/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "nsv/error.hpp"

namespace nsv {

namespace {

using nlohmann::json;
using S = Subcommand;

const std::vector<S> kSim{S::simulate, S::lyapunov};
const std::vector<S> kAll{S::simulate, S::lyapunov, S::bounds, S::verify};

const std::set<std::string> kTargets{"spectrum", "liyau", "lt", "rho-l2", "rho-linf"};

std::vector<ParamSpec> build_schema() {
    const double area = 4.0 * std::numbers::pi * std::numbers::pi;
    return {
        {"subcommand", ParamType::string, kAll, "bounds", "simulate | lyapunov | bounds | verify"},
        {"seed", ParamType::integer, kAll, 0, "seed of every random draw"},
        {"output_dir", ParamType::string, kAll, "nsvlab-out", "directory for all outputs"},
        {"formats", ParamType::string, kAll, "csv,json", "comma-separated subset of csv, json"},

        {"nu", ParamType::number, {S::simulate, S::lyapunov, S::bounds}, 1.0, "viscosity"},
        {"alpha", ParamType::number, {S::simulate, S::lyapunov, S::bounds}, 0.0, "regularisation length squared"},
        {"resolution", ParamType::integer, {S::simulate, S::lyapunov, S::verify}, 64, "grid points per side"},
        {"dt", ParamType::number, kSim, 1e-3, "time step"},
        {"t_end", ParamType::number, kSim, 1.0, "final time"},
        {"scheme", ParamType::string, kSim, "auto", "auto | rk4 | integrating-factor-rk4"},
        {"form", ParamType::string, kSim, "velocity", "velocity | vorticity"},
        {"forcing", ParamType::string, kSim, "none", "none | shear | two-mode | modes"},
        {"forcing_amplitude", ParamType::number, kSim, 1.0, "forcing amplitude"},
        {"forcing_wavenumber", ParamType::integer, kSim, 1, "shear forcing wavenumber"},
        {"forcing_modes", ParamType::mode_list, kSim, json::array(), "[[k1, k2, re1, im1, re2, im2], ...]"},
        {"initial", ParamType::string, kSim, "zero", "zero | shear | random | file"},
        {"initial_amplitude", ParamType::number, kSim, 1.0, "initial amplitude (L2 norm for random)"},
        {"initial_wavenumber", ParamType::integer, kSim, 1, "shear initial wavenumber"},
        {"initial_path", ParamType::string, kSim, "", "snapshot file for initial = file"},
        {"perturbation", ParamType::number, kSim, 0.0, "L2 norm of a random perturbation"},
        {"sample_every", ParamType::integer, kSim, 10, "diagnostic cadence in steps"},
        {"snapshot_every", ParamType::integer, {S::simulate}, 0, "snapshot cadence in steps, 0 = off"},
        {"burn_in", ParamType::number, kSim, -1.0, "start of the averaging window, negative = 5/gamma"},

        {"frame_size", ParamType::integer, {S::lyapunov}, 4, "number of tangent vectors"},
        {"reorth_every", ParamType::integer, {S::lyapunov}, 10, "steps between re-orthonormalisations"},
        {"spinup", ParamType::number, {S::lyapunov}, 0.0, "base-flow time before the frame starts"},
        {"frame_burn_in", ParamType::number, {S::lyapunov}, -1.0, "window start after frame launch, negative = burn_in"},
        {"frame_seed", ParamType::integer, {S::lyapunov}, 1, "seed of the initial frame"},
        {"scan_max", ParamType::integer, {S::lyapunov}, 0, "largest frame size of an n* scan, 0 = single run"},

        {"d", ParamType::integer, {S::bounds}, 2, "dimension, 2 or 3"},
        {"gnorm", ParamType::number, {S::bounds}, 1.0, "L2 norm of the forcing"},
        {"lambda1", ParamType::number, {S::bounds}, 1.0, "first Stokes eigenvalue"},
        {"measure", ParamType::number, {S::bounds}, area, "domain area or volume"},
        {"geometry", ParamType::string, {S::bounds}, "torus", "torus | bounded-domain"},
        {"constants", ParamType::string, {S::bounds}, "printed", "threshold constants: printed | exact"},

        {"target", ParamType::string, {S::verify}, "", "spectrum | liyau | lt | rho-l2 | rho-linf"},
        {"j_max", ParamType::integer, {S::verify}, 100000, "largest eigenvalue index (spectrum)"},
        {"e_max", ParamType::integer, {S::verify}, 10000, "largest level E (spectrum)"},
        {"m_max", ParamType::integer, {S::verify}, 10000, "largest partial sum (liyau)"},
        {"sums_max", ParamType::integer, {S::verify}, 10000, "largest Lambda of the spectral sums (rho-linf)"},
        {"lambda_max", ParamType::integer, {S::verify}, 64, "largest Lambda of the L-infinity bound (rho-linf)"},
        {"families", ParamType::integer, {S::verify}, 100, "random families per alpha (lt, rho-l2, rho-linf)"},
        {"alphas", ParamType::number_list, {S::verify}, json::array({0.01, 0.1, 1.0}), "alpha values of the sweeps"},
    };
}

const std::set<std::string> kUniversal{"subcommand", "seed", "output_dir", "formats"};

const ParamSpec* find_spec(const std::string& key) {
    for (const auto& p : config_schema())
        if (p.key == key) return &p;
    return nullptr;
}

bool applies(const ParamSpec& p, S s) { return std::find(p.used_by.begin(), p.used_by.end(), s) != p.used_by.end(); }

std::string type_name(ParamType t) {
    switch (t) {
        case ParamType::number: return "a number";
        case ParamType::integer: return "an integer";
        case ParamType::string: return "a string";
        case ParamType::number_list: return "a list of numbers";
        case ParamType::mode_list: return "a list of [k1, k2, re1, im1, re2, im2]";
    }
    return "a value";
}

bool type_ok(ParamType t, const json& v) {
    switch (t) {
        case ParamType::number: return v.is_number();
        case ParamType::integer: return v.is_number_integer();
        case ParamType::string: return v.is_string();
        case ParamType::number_list:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
        case ParamType::mode_list:
            return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& m) {
                       return m.is_array() && m.size() == 6 && m[0].is_number_integer() && m[1].is_number_integer() &&
                              std::all_of(m.begin() + 2, m.end(), [](const json& x) { return x.is_number(); });
                   });
    }
    return false;
}

// Flag text -> JSON value of the schema type; nullopt on a malformed value.
std::optional<json> convert_flag(ParamType t, const std::string& text) {
    try {
        std::size_t used = 0;
        switch (t) {
            case ParamType::number: {
                const double v = std::stod(text, &used);
                if (used != text.size()) return std::nullopt;
                return json(v);
            }
            case ParamType::integer: {
                const long long v = std::stoll(text, &used);
                if (used != text.size()) return std::nullopt;
                return json(v);
            }
            case ParamType::string: return json(text);
            case ParamType::number_list: {
                json out = json::array();
                std::stringstream ss(text);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    const double v = std::stod(item, &used);
                    if (used != item.size()) return std::nullopt;
                    out.push_back(v);
                }
                return out;
            }
            case ParamType::mode_list: {
                auto v = json::parse(text);
                if (!type_ok(t, v)) return std::nullopt;
                return v;
            }
        }
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

std::vector<std::string> split_formats(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join_formats(const std::vector<std::string>& f) {
    std::string out;
    for (const auto& x : f) out += (out.empty() ? "" : ",") + x;
    return out;
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "rk4") return Scheme::rk4;
    if (name == "integrating-factor-rk4" || name == "if-rk4") return Scheme::integrating_factor_rk4;
    throw InvalidParameter("unknown scheme '" + name + "'");
}

template <class F>
void collect(std::vector<std::string>& problems, F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    } catch (const Error& e) {
        problems.push_back(e.what());
    }
}

}  // namespace

std::string_view to_string(Subcommand s) noexcept {
    switch (s) {
        case S::simulate: return "simulate";
        case S::lyapunov: return "lyapunov";
        case S::bounds: return "bounds";
        case S::verify: return "verify";
    }
    return "bounds";
}

Subcommand subcommand_from_string(std::string_view name) {
    for (S s : kAll)
        if (to_string(s) == name) return s;
    throw InvalidParameter("unknown subcommand '" + std::string(name) + "'");
}

const std::vector<ParamSpec>& config_schema() {
    static const std::vector<ParamSpec> schema = build_schema();
    return schema;
}

SimConfig RunConfig::sim_config() const {
    const json& p = params;
    SimConfig c;
    c.nu = p.at("nu").get<double>();
    c.alpha = p.at("alpha").get<double>();
    c.grid = SpectralGrid(p.at("resolution").get<int>());
    c.dt = p.at("dt").get<double>();
    c.t_end = p.at("t_end").get<double>();
    const auto scheme = p.at("scheme").get<std::string>();
    if (scheme != "auto") c.scheme = scheme_from_string(scheme);
    c.form = form_from_string(p.at("form").get<std::string>());
    c.forcing.kind = forcing_kind_from_string(p.at("forcing").get<std::string>());
    c.forcing.amplitude = p.at("forcing_amplitude").get<double>();
    c.forcing.wavenumber = p.at("forcing_wavenumber").get<int>();
    for (const auto& m : p.at("forcing_modes"))
        c.forcing.modes.push_back({{m[0].get<int>(), m[1].get<int>()},
                                   Complex{m[2].get<double>(), m[3].get<double>()},
                                   Complex{m[4].get<double>(), m[5].get<double>()}});
    c.initial.kind = initial_kind_from_string(p.at("initial").get<std::string>());
    c.initial.amplitude = p.at("initial_amplitude").get<double>();
    c.initial.wavenumber = p.at("initial_wavenumber").get<int>();
    c.initial.path = p.at("initial_path").get<std::string>();
    c.initial.perturbation = p.at("perturbation").get<double>();
    c.sample_every = p.at("sample_every").get<int>();
    if (p.contains("snapshot_every")) c.snapshot_every = p.at("snapshot_every").get<int>();
    c.burn_in = p.at("burn_in").get<double>();
    c.seed = seed;
    return c;
}

LyapunovConfig RunConfig::lyapunov_config() const {
    LyapunovConfig c;
    c.sim = sim_config();
    c.n = static_cast<std::size_t>(std::max<std::int64_t>(0, params.at("frame_size").get<std::int64_t>()));
    c.reorth_every = params.at("reorth_every").get<int>();
    c.spinup = params.at("spinup").get<double>();
    c.burn_in = params.at("frame_burn_in").get<double>();
    c.frame_seed = params.at("frame_seed").get<std::uint64_t>();
    return c;
}

std::size_t RunConfig::scan_max() const {
    return static_cast<std::size_t>(std::max<std::int64_t>(0, params.at("scan_max").get<std::int64_t>()));
}

BoundsInput RunConfig::bounds_input() const {
    BoundsInput in;
    in.d = params.at("d").get<int>();
    in.nu = params.at("nu").get<double>();
    in.alpha = params.at("alpha").get<double>();
    in.g_norm = params.at("gnorm").get<double>();
    in.lambda1 = params.at("lambda1").get<double>();
    in.domain_measure = params.at("measure").get<double>();
    in.geometry = geometry_from_string(params.at("geometry").get<std::string>());
    return in;
}

ConstantSet RunConfig::threshold_constants() const {
    const auto s = params.at("constants").get<std::string>();
    if (s == "printed") return ConstantSet::printed;
    if (s == "exact") return ConstantSet::exact;
    throw InvalidParameter("constants must be printed or exact (got '" + s + "')");
}

std::string RunConfig::verify_target() const { return params.at("target").get<std::string>(); }

std::int64_t RunConfig::param_int(const std::string& key) const { return params.at(key).get<std::int64_t>(); }

SweepConfig RunConfig::sweep_config() const {
    SweepConfig c;
    c.grid = SpectralGrid(params.at("resolution").get<int>());
    c.families = static_cast<std::size_t>(std::max<std::int64_t>(0, params.at("families").get<std::int64_t>()));
    c.seed = seed;
    c.alphas = params.at("alphas").get<std::vector<double>>();
    c.lambda_max = params.at("lambda_max").get<std::int64_t>();
    return c;
}

bool RunConfig::wants(std::string_view format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_config(const ConfigSources& src) {
    std::vector<std::string> problems;
    if (!src.file.is_object()) throw ConfigError({"configuration file must hold a JSON object"});

    RunConfig cfg;
    std::optional<S> sub = src.subcommand;
    if (src.file.contains("subcommand")) {
        const auto& v = src.file["subcommand"];
        if (!v.is_string()) {
            problems.push_back("subcommand must be a string");
        } else {
            try {
                const S from_file = subcommand_from_string(v.get<std::string>());
                if (sub && *sub != from_file)
                    problems.push_back("configuration file is for '" + v.get<std::string>() + "' but the command line asks for '" +
                                       std::string(to_string(*sub)) + "'");
                if (!sub) sub = from_file;
            } catch (const InvalidParameter& e) {
                problems.push_back(e.what());
            }
        }
    }
    if (!sub) {
        problems.push_back("no subcommand given");
        throw ConfigError(std::move(problems));
    }
    cfg.subcommand = *sub;

    json merged = json::object();
    for (const auto& p : config_schema())
        if (applies(p, cfg.subcommand)) merged[p.key] = p.default_value;
    merged["subcommand"] = std::string(to_string(cfg.subcommand));

    auto assign = [&](const std::string& key, const json& value, const std::string& origin) {
        const ParamSpec* p = find_spec(key);
        if (!p) {
            problems.push_back("unknown key '" + key + "' (" + origin + ")");
            return;
        }
        if (!applies(*p, cfg.subcommand)) {
            problems.push_back("key '" + key + "' does not apply to " + std::string(to_string(cfg.subcommand)) + " (" + origin + ")");
            return;
        }
        if (!type_ok(p->type, value)) {
            problems.push_back("key '" + key + "' must be " + type_name(p->type) + " (" + origin + ")");
            return;
        }
        if (key != "subcommand") merged[key] = value;
    };

    for (const auto& [key, value] : src.file.items()) assign(key, value, "file");
    if (src.env_output_dir) merged["output_dir"] = *src.env_output_dir;
    for (const auto& [key, text] : src.flags) {
        const ParamSpec* p = find_spec(key);
        if (!p) {
            problems.push_back("unknown key '" + key + "' (flag)");
            continue;
        }
        const auto v = convert_flag(p->type, text);
        if (!v) {
            problems.push_back("flag --" + key + " must be " + type_name(p->type) + " (got '" + text + "')");
            continue;
        }
        assign(key, *v, "flag");
    }

    const auto seed = merged["seed"].get<std::int64_t>();
    if (seed < 0) problems.push_back("seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(std::max<std::int64_t>(seed, 0));
    cfg.output_dir = merged["output_dir"].get<std::string>();
    if (cfg.output_dir.empty()) problems.push_back("output_dir must not be empty");
    cfg.formats = split_formats(merged["formats"].get<std::string>());
    for (const auto& f : cfg.formats)
        if (f != "csv" && f != "json") problems.push_back("formats may contain only csv and json (got '" + f + "')");
    for (const auto& k : kUniversal) merged.erase(k);
    cfg.params = merged;

    if (!problems.empty()) throw ConfigError(std::move(problems));

    // Downstream validation, aggregated.
    switch (cfg.subcommand) {
        case S::simulate: collect(problems, [&] { cfg.sim_config().validate(); }); break;
        case S::lyapunov:
            collect(problems, [&] { cfg.lyapunov_config().validate(); });
            if (cfg.params["scan_max"].get<std::int64_t>() < 0) problems.push_back("scan_max must be >= 0");
            break;
        case S::bounds:
            collect(problems, [&] { cfg.bounds_input().validate(); });
            collect(problems, [&] { cfg.threshold_constants(); });
            break;
        case S::verify: {
            const auto t = cfg.verify_target();
            if (t.empty())
                problems.push_back("verify needs a target");
            else if (!kTargets.count(t))
                problems.push_back("unknown verify target '" + t + "'");
            for (const char* k : {"j_max", "e_max", "m_max", "sums_max", "lambda_max", "families"})
                if (cfg.param_int(k) < 1) problems.push_back(std::string(k) + " must be >= 1");
            if (cfg.param_int("j_max") < 2) problems.push_back("j_max must be >= 2");
            for (double a : cfg.params["alphas"].get<std::vector<double>>())
                if (!(a > 0.0) || !std::isfinite(a)) problems.push_back("alphas must be positive");
            collect(problems, [&] { SpectralGrid(cfg.params["resolution"].get<int>()); });
            break;
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

json read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open configuration file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("malformed configuration file " + path.string() + ": " + e.what());
    }
}

json to_json(const RunConfig& cfg) {
    json j = cfg.params;
    j["subcommand"] = std::string(to_string(cfg.subcommand));
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir.string();
    j["formats"] = join_formats(cfg.formats);
    return j;
}

RunConfig run_config_from_json(const json& j) {
    ConfigSources src;
    src.file = j;
    return parse_config(src);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

}  // namespace nsv
