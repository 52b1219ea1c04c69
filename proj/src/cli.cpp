#include "negtemp/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include "negtemp/config.hpp"
#include "negtemp/csv.hpp"
#include "negtemp/manifest.hpp"
#include "negtemp/selfcheck.hpp"
#include "negtemp/version.hpp"

namespace negtemp {
namespace {

namespace fs = std::filesystem;

unsigned resolve_jobs(std::optional<unsigned> flag) {
    if (flag && *flag > 0) return *flag;
    if (const char* env = std::getenv("NEGTEMP_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string("NEGTEMP_JOBS must be a positive integer, got '") + env + "'");
        }
        throw ConfigError(std::string("NEGTEMP_JOBS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run_scenarios(const std::vector<NamedScenario>& scenarios, const SolverOptions& solver,
                  const std::string& config_path, const fs::path& out_dir, unsigned jobs,
                  bool keep_partial, std::ostream& out, std::ostream& err) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        err << "error: cannot create output directory '" << out_dir.string() << "': " << ec.message() << '\n';
        return kExitSolverFailure;
    }

    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.config_path = config_path;
    manifest.output_dir = out_dir.string();
    manifest.solver = solver;
    manifest.jobs = jobs;
    manifest.tool_version = kVersion;

    RunOptions options;
    options.jobs = jobs;
    options.solver = solver;

    bool all_ok = true;
    for (const auto& s : scenarios) {
        ManifestEntry entry;
        entry.name = s.name;
        entry.config = s.config;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto rows = run_scenario(s.config, options);
            const fs::path csv = out_dir / (s.name + ".csv");
            write_csv(rows, csv);
            entry.rows = rows.size();
            entry.succeeded = true;
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out << s.name << ": " << rows.size() << " rows -> " << csv.string() << " (" << secs << " s)\n";
        } catch (const Error& e) {
            all_ok = false;
            entry.error = e.what();
            err << "error: " << s.name << ": " << e.what() << '\n';
        }
        manifest.scenarios.push_back(std::move(entry));
        if (!all_ok && !keep_partial) break;
    }
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (all_ok || keep_partial) {
        try {
            write_manifest(manifest, out_dir / "manifest.json");
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return kExitSolverFailure;
        }
    }
    return all_ok ? kExitOk : kExitSolverFailure;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state negative-temperature simulations of driven qubit-boson models.\n"
                 "All rates and couplings are in units of the qubit decay rate gamma "
                 "(gamma = hbar = k_B = 1); temperatures are reported as k_B T / omega_0."};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run every scenario listed in a configuration file");
    std::string config_path, run_out;
    std::optional<unsigned> run_jobs;
    bool keep_partial = false;
    run->add_option("--config", config_path, "Scenario configuration file")->required();
    run->add_option("--out", run_out, "Output directory for CSV files and manifest.json")->required();
    run->add_option("--jobs", run_jobs, "Worker threads (default: $NEGTEMP_JOBS or all cores)");
    run->add_flag("--keep-partial", keep_partial, "Keep results and write the manifest even if a scenario fails");

    auto* fig = app.add_subcommand("fig", "Run the canonical configuration for one figure");
    int fig_id = 0;
    std::string fig_out;
    std::optional<unsigned> fig_jobs;
    fig->add_option("--id", fig_id, "Figure number 1..7")->required()->check(CLI::Range(1, 7));
    fig->add_option("--out", fig_out, "Output directory; writes figN.csv")->required();
    fig->add_option("--jobs", fig_jobs, "Worker threads (default: $NEGTEMP_JOBS or all cores)");

    auto* check = app.add_subcommand("check", "Run the built-in oracle suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfigError;
    }

    try {
        if (*run) {
            const RunConfig cfg = load_run_config(config_path);
            return run_scenarios(cfg.scenarios, cfg.solver, config_path, run_out, resolve_jobs(run_jobs),
                                 keep_partial, out, err);
        }
        if (*fig) {
            const NamedScenario s{"fig" + std::to_string(fig_id), canonical_scenario(fig_id)};
            return run_scenarios({s}, SolverOptions{}, "", fig_out, resolve_jobs(fig_jobs), false, out, err);
        }
        if (*check) {
            bool ok = true;
            for (const auto& r : run_self_checks()) {
                out << (r.passed ? "PASS " : "FAIL ") << r.name << "  [" << r.detail << "]\n";
                ok = ok && r.passed;
            }
            return ok ? kExitOk : kExitSolverFailure;
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolverFailure;
    }
    return kExitConfigError;
}

} // namespace negtemp
