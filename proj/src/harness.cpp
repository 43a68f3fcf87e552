#include "nsv/harness.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "nsv/field_io.hpp"

namespace nsv {

namespace fs = std::filesystem;
using nlohmann::json;

bool RunManifest::pass() const {
    for (const auto& c : checks)
        if (c.assessed && !c.pass) return false;
    return complete;
}

json to_json(const RunManifest& m) {
    json files = json::array();
    for (const auto& f : m.files) files.push_back({{"path", f.path}, {"kind", f.kind}, {"bytes", f.bytes}});
    json checks = json::array();
    for (const auto& c : m.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"assessed", c.assessed}, {"detail", c.detail}});
    json j = {{"tool", kToolName},
              {"version", kToolVersion},
              {"schema_versions", {{"csv", kCsvSchemaVersion}, {"json", kJsonSchemaVersion}, {"snapshot", "nsv-field 1"}}},
              {"config_hash", m.config_hash},
              {"config", m.config},
              {"started", m.started},
              {"wall_clock_seconds", m.wall_clock_seconds},
              {"files", files},
              {"summary", {{"checks", checks}, {"pass", m.pass()}, {"exit_code", m.exit_code}}},
              {"complete", m.complete}};
    if (!m.error.empty()) j["error"] = m.error;
    return j;
}

OutputWriter::OutputWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

void OutputWriter::write(const std::string& relative, const std::string& kind,
                         const std::function<void(std::ostream&)>& body) {
    const fs::path target = dir_ / relative;
    fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        body(os);
        os.flush();
        if (!os) throw Error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, target);
    files_.push_back({relative, kind, fs::file_size(target)});
}

void OutputWriter::write_json(const std::string& relative, const json& j) {
    write(relative, "json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

void OutputWriter::mark_partial() {
    for (auto& f : files_) {
        const fs::path from = dir_ / f.path;
        std::error_code ec;
        if (!fs::exists(from, ec)) continue;
        fs::rename(from, fs::path(from) += ".partial", ec);
        if (!ec) f.path += ".partial";
    }
}

namespace {

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json series_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
    return out;
}

void run_simulate(const RunConfig& cfg, OutputWriter& out, RunManifest& m, std::ostream& log) {
    const SimConfig sim = cfg.sim_config();
    int snap_index = 0;
    SnapshotSink sink;
    if (sim.snapshot_every > 0) {
        sink = [&](double t, const SpectralField& u) {
            std::ostringstream name;
            name << "snapshots/snap_" << std::setw(6) << std::setfill('0') << snap_index++ << ".nsv";
            out.write(name.str(), "snapshot", [&](std::ostream& os) { write_snapshot(os, {u, sim.alpha, t}); });
        };
    }
    const auto res = integrate(sim, sink);
    const auto bound = check_dissipative_bound(res.series, sim);
    const auto avg = check_time_averages(res.series);

    if (cfg.wants("csv")) out.write("diagnostics.csv", "csv", [&](std::ostream& os) { write_diagnostics_csv(os, res.series); });
    out.write("final.nsv", "snapshot", [&](std::ostream& os) { write_snapshot(os, {res.final_velocity, sim.alpha, sim.t_end}); });

    m.checks.push_back({"dissipative-bound", bound.pass, "max violation " + std::to_string(bound.max_violation)});
    std::string avg_detail = "window " + std::to_string(avg.window);
    for (const auto& w : avg.warnings) avg_detail += "; " + w;
    // the averages bound a limsup; a window shorter than 10/gamma cannot test it
    const bool long_enough = avg.window >= 10.0 / sim.gamma() && !std::isnan(avg.avg_enstrophy);
    m.checks.push_back({"time-averages", avg.pass, avg_detail, long_enough});

    if (cfg.wants("json")) {
        json warnings = res.warnings;
        for (const auto& w : avg.warnings) warnings.push_back(w);
        out.write_json("summary.json",
                       {{"steps", res.steps},
                        {"t_end", sim.t_end},
                        {"scheme", std::string(to_string(sim.effective_scheme()))},
                        {"energy_residual", res.energy_residual},
                        {"grashof_G", res.series.grashof_G},
                        {"grashof_calG", res.series.grashof_calG},
                        {"dissipative_bound", {{"pass", bound.pass}, {"max_violation", bound.max_violation},
                                               {"worst_time", bound.worst_time}, {"samples", bound.samples}}},
                        {"time_averages", {{"pass", avg.pass}, {"avg_enstrophy", avg.avg_enstrophy},
                                           {"enstrophy_bound", avg.enstrophy_bound}, {"avg_grad", avg.avg_grad},
                                           {"grad_bound", avg.grad_bound}, {"window", avg.window}}},
                        {"warnings", warnings}});
    }
    log << "simulate: " << res.steps << " steps, energy residual " << res.energy_residual << ", bound "
        << (bound.pass ? "ok" : "VIOLATED") << ", averages " << (!long_enough ? "not assessed (short window)" : avg.pass ? "ok" : "VIOLATED") << '\n';
}

void run_lyapunov(const RunConfig& cfg, OutputWriter& out, std::ostream& log) {
    const LyapunovConfig lc = cfg.lyapunov_config();
    TraceSeries s;
    std::vector<std::size_t> sizes;
    std::optional<std::size_t> n_star;
    if (cfg.scan_max() > 0) {
        auto scan = scan_n_star(lc, cfg.scan_max());
        s = std::move(scan.last);
        sizes = scan.frame_sizes;
        n_star = scan.n_star;
    } else {
        s = q_n_estimate(lc);
        sizes = {lc.n};
        n_star = s.n_star;
    }
    if (cfg.wants("csv")) out.write("trace.csv", "csv", [&](std::ostream& os) { write_trace_csv(os, s); });
    if (cfg.wants("json")) {
        out.write_json("lyapunov.json", {{"n", s.n},
                                         {"q_hat", series_json(s.q_hat)},
                                         {"n_star", n_star ? json(*n_star) : json(nullptr)},
                                         {"window", s.window},
                                         {"burn_in", s.burn_in},
                                         {"spinup", s.spinup},
                                         {"exponents", series_json(s.exponents)},
                                         {"rayleigh_means", series_json(s.rayleigh_means)},
                                         {"eventually_decreasing", s.eventually_decreasing},
                                         {"reorthonormalizations", s.reorthonormalizations},
                                         {"frame_sizes", sizes},
                                         {"warnings", s.warnings}});
    }
    log << "lyapunov: n = " << s.n << ", q_hat(n) = " << s.q_hat_n() << ", n* = ";
    if (n_star)
        log << *n_star;
    else
        log << "none";
    log << ", window " << s.window << '\n';
}

json printed_constants() {
    return {{"classical_domain", 0.055}, {"linear_domain", 0.109}, {"linear_torus", 0.039},
            {"classical_torus", 0.028},  {"log_factor", 7.46},     {"log_shift", 5.74},
            {"classical_log_factor", 4.7}, {"classical_log_shift", 5.56}};
}

void run_bounds(const RunConfig& cfg, OutputWriter& out, std::ostream& log) {
    const auto report = evaluate_bounds(cfg.bounds_input());
    std::ostringstream table;
    write_bounds_table(table, report);
    log << table.str();
    if (cfg.wants("json")) {
        json j = to_json(report);
        j["constants"] = constants_json();
        j["printed_constants"] = printed_constants();
        if (report.input.d == 2 && report.input.geometry == Geometry::torus) {
            const auto t = thresholds(cfg.threshold_constants());
            j["thresholds"] = to_json(t);
        }
        out.write_json("bounds.json", j);
    }
    out.write("bounds.txt", "text", [&](std::ostream& os) { os << table.str(); });
}

void persist_witness(const RunConfig& cfg, const InequalityReport& r, OutputWriter& out) {
    if (r.near_saturation.empty() || !r.details.contains("witness")) return;
    const auto& w = r.details["witness"];
    const auto kind = w["kind"] == "gram-scaled" ? FamilyKind::gram_scaled : FamilyKind::alpha_orthonormal;
    const double alpha = w["alpha"].get<double>();
    const auto fam = sample_suborthonormal(cfg.sweep_config().grid, role_from_string(w["role"].get<std::string>()),
                                           w["n"].get<std::size_t>(), kind, alpha, w["seed"].get<std::uint64_t>());
    for (std::size_t j = 0; j < fam.vectors.size(); ++j)
        out.write("witness/member_" + std::to_string(j) + ".nsv", "snapshot",
                  [&](std::ostream& os) { write_snapshot(os, {fam.vectors[j], alpha, std::nullopt}); });
}

void run_verify(const RunConfig& cfg, OutputWriter& out, RunManifest& m, std::ostream& log) {
    const auto target = cfg.verify_target();
    std::vector<InequalityReport> reports;
    if (target == "spectrum") {
        reports.push_back(verify_eigenvalue_bounds(cfg.param_int("j_max"), cfg.param_int("e_max")));
    } else if (target == "liyau") {
        reports.push_back(verify_liyau(cfg.param_int("m_max")));
    } else if (target == "lt") {
        reports.push_back(sweep_lieb_thirring(cfg.sweep_config()));
        reports.push_back(verify_lt_closed_form(cfg.sweep_config().grid));
    } else if (target == "rho-l2") {
        reports.push_back(sweep_rho_l2(cfg.sweep_config()));
    } else if (target == "rho-linf") {
        reports.push_back(sweep_rho_linf(cfg.sweep_config()));
        reports.push_back(verify_spectral_sums(cfg.param_int("sums_max")));
    } else {
        throw InvalidParameter("unknown verify target '" + target + "'");
    }
    json j = to_json(reports.front());
    if (reports.size() > 1) {
        j["companions"] = json::array();
        for (std::size_t i = 1; i < reports.size(); ++i) j["companions"].push_back(to_json(reports[i]));
    }
    bool all = true;
    for (const auto& r : reports) {
        all = all && r.pass();
        m.checks.push_back({r.target, r.pass(),
                            "worst ratio " + std::to_string(r.worst_ratio) + " over " + std::to_string(r.checked) + " checks"});
        log << "verify " << r.target << ": " << (r.pass() ? "PASS" : "FAIL") << " worst ratio " << r.worst_ratio
            << " (" << r.checked << " checks, " << r.violations << " violations)\n";
        for (const auto& c : r.counterexamples) log << "  counterexample: " << c << '\n';
        persist_witness(cfg, r, out);
    }
    j["pass"] = all;
    if (cfg.wants("json")) out.write_json("verify_" + target + ".json", j);
}

}  // namespace

RunManifest run(const RunConfig& cfg, std::ostream& log) {
    RunManifest m;
    m.config = to_json(cfg);
    m.config_hash = config_hash(cfg);
    m.started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();

    std::optional<OutputWriter> out;
    try {
        out.emplace(cfg.output_dir);
        out->write_json("config.json", m.config);
        switch (cfg.subcommand) {
            case Subcommand::simulate: run_simulate(cfg, *out, m, log); break;
            case Subcommand::lyapunov: run_lyapunov(cfg, *out, log); break;
            case Subcommand::bounds: run_bounds(cfg, *out, log); break;
            case Subcommand::verify: run_verify(cfg, *out, m, log); break;
        }
        m.complete = true;
    } catch (const std::exception& e) {
        m.error = e.what();
        m.exit_code = exit_runtime_error;
        log << "error: " << e.what() << '\n';
        if (out) out->mark_partial();
    }
    m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (m.complete) m.exit_code = m.pass() ? exit_ok : exit_verification_failed;
    if (out) {
        m.files = out->files();
        try {
            // the manifest lists itself
            m.files.push_back({"manifest.json", "json", 0});
            const std::string text = to_json(m).dump(2) + "\n";
            OutputWriter(cfg.output_dir).write("manifest.json", "json", [&](std::ostream& os) { os << text; });
        } catch (const std::exception& e) {
            log << "error: manifest not written: " << e.what() << '\n';
            m.complete = false;
            m.exit_code = exit_runtime_error;
        }
    }
    return m;
}

}  // namespace nsv
