#pragma once

// Command-line front end: modes, evolve, sweep, figure, verify.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "milburn/errors.hpp"
#include "milburn/evolution.hpp"
#include "milburn/experiments.hpp"
#include "milburn/io.hpp"
#include "milburn/normal_modes.hpp"
#include "milburn/verify.hpp"

namespace milburn::cli {

enum ExitCode : int { kOk = 0, kBadInput = 2, kIoFailure = 3, kVerifyFailure = 4 };

struct CliConfig {
    std::string command;
    SystemParams params{1.0, 1.0, 0.2, 100.0};
    double t_max = 100.0;
    std::size_t steps = 2001;
    std::string kernel = "milburn";
    std::string out_dir = "out";
    bool csv = true;
    bool svg = false;
    bool verbose = false;
    bool oracle = false;
    std::string axis = "J";
    std::vector<double> values;
    std::string preset;
    std::size_t samples = 200;
    std::uint64_t seed = 20211;

    [[nodiscard]] TimeGrid grid() const { return {0.0, t_max, steps}; }
};

/// Sweep worker count from MILBURN_THREADS (unset or 0 = automatic).
inline unsigned thread_budget() {
    const char* env = std::getenv("MILBURN_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0) throw DomainError("MILBURN_THREADS must be a non-negative integer");
    return static_cast<unsigned>(v);
}

namespace detail {

inline std::filesystem::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw IoError("failed writing " + path.string());
}

inline void write_run_svg(const std::filesystem::path& path, const std::string& title,
                          const std::vector<SvgSeries>& series) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    write_svg(f, title, "value", series);
}

inline int cmd_modes(const CliConfig& cfg, std::ostream& out) {
    validate(cfg.params);
    const auto m = derive_modes(cfg.params);
    nlohmann::json doc{{"params", to_json(cfg.params)},
                       {"modes", to_json(m)},
                       {"stability_bound", cfg.params.omega1 * cfg.params.omega2}};
    out << doc.dump(2) << '\n';
    return kOk;
}

/// Max deviation between the resummed kernel and the series oracle on every 100th grid point.
/// Points with Gamma t above 1e6 are skipped (series too long).
inline double oracle_crosscheck(const RunResult& run, std::size_t& checked) {
    double worst = 0.0;
    checked = 0;
    for (std::size_t i = 0; i < run.grid.steps; i += 100) {
        const double t = run.grid.at(i);
        if (run.params.gamma * t > 1e6) continue;
        const double d = milburn_covariance(run.modes, run.params.gamma, t)
                             .max_abs_diff(series_oracle_covariance(run.modes, run.params.gamma, t, 1e-12));
        worst = std::max(worst, d);
        ++checked;
    }
    return worst;
}

inline int cmd_evolve(const CliConfig& cfg, std::ostream& out) {
    const Kernel kernel = parse_kernel(cfg.kernel);
    const auto grid = cfg.grid();
    const auto run = time_series(cfg.params, grid, kernel);
    const auto dir = prepare_dir(cfg.out_dir);
    if (cfg.csv) write_csv_file(dir / "evolve.csv", run.records, cfg.verbose);
    if (cfg.svg)
        write_run_svg(dir / "evolve.svg", "evolve (" + std::string(to_string(kernel)) + ")",
                      {series_of("N1", run, &CorrelationRecord::N1), series_of("N2", run, &CorrelationRecord::N2),
                       series_of("E_N", run, &CorrelationRecord::E_N)});
    out << "evolve: " << run.records.size() << " records, kernel " << to_string(kernel)
        << (run.flags.resonance ? ", resonance flagged" : "") << ", output " << (dir / "evolve.csv").string() << '\n';
    if (cfg.oracle) {
        if (kernel != Kernel::milburn) throw DomainError("--oracle applies to the milburn kernel only");
        std::size_t checked = 0;
        const double worst = oracle_crosscheck(run, checked);
        out << "oracle: " << checked << " points checked, max deviation " << milburn::detail::short_num(worst) << '\n';
        if (worst > 1e-8) return kVerifyFailure;
    }
    return kOk;
}

inline std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

inline int write_cells(const std::string& kind, const std::vector<RunConfig>& configs,
                       const std::vector<SweepCell>& cells, const CliConfig& cfg, std::ostream& out) {
    const auto dir = prepare_dir(cfg.out_dir);
    std::vector<ManifestCell> manifest;
    std::vector<SvgSeries> n1_series;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        ManifestCell mc{configs[i].label, cells[i].params, configs[i].grid, configs[i].kernel, "", false, cells[i].error};
        if (cells[i].result) {
            mc.file = configs[i].label + ".csv";
            mc.resonance = cells[i].result->flags.resonance;
            if (cfg.csv) write_csv_file(dir / mc.file, cells[i].result->records, cfg.verbose);
            n1_series.push_back(series_of(configs[i].label, *cells[i].result, &CorrelationRecord::N1));
        } else {
            out << kind << ": cell " << configs[i].label << " failed: " << cells[i].error << '\n';
        }
        manifest.push_back(std::move(mc));
    }
    write_text(dir / "manifest.json", manifest_json(kind, manifest).dump(2) + "\n");
    if (cfg.svg && !n1_series.empty()) write_run_svg(dir / (kind + "_N1.svg"), kind + ": N1(t)", n1_series);
    out << kind << ": " << cells.size() << " cells written to " << dir.string() << '\n';
    return kOk;
}

inline int cmd_sweep(const CliConfig& cfg, std::ostream& out) {
    const Kernel kernel = parse_kernel(cfg.kernel);
    SweepSpec spec{cfg.params, parse_axis(cfg.axis), cfg.values, cfg.grid()};
    validate_domain(cfg.params);
    const auto cells = parameter_sweep(spec, kernel, thread_budget());
    std::vector<RunConfig> configs;
    for (const auto& c : cells)
        configs.push_back({sanitize(std::string(to_string(spec.axis)) + milburn::detail::short_num(c.value)), c.params,
                           spec.grid, kernel});
    return write_cells("sweep", configs, cells, cfg, out);
}

inline int cmd_figure(const CliConfig& cfg, std::ostream& out) {
    const auto configs = figure_preset(cfg.preset);
    std::vector<SweepCell> cells(configs.size());
    run_parallel(configs.size(), thread_budget(), [&](std::size_t i) {
        cells[i].params = configs[i].params;
        try {
            cells[i].result = time_series(configs[i].params, configs[i].grid, configs[i].kernel);
        } catch (const DomainError& e) {
            cells[i].error = e.what();
        }
    });
    return write_cells(cfg.preset, configs, cells, cfg, out);
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out) {
    const auto reports = run_verification(cfg.samples, cfg.seed);
    std::size_t passed = 0, failed = 0;
    for (const auto& r : reports) {
        out << (r.failed == 0 ? "PASS " : "FAIL ") << r.name << ": " << r.passed << " passed, " << r.failed
            << " failed, worst residual " << milburn::detail::short_num(r.worst) << '\n';
        passed += r.passed;
        failed += r.failed;
    }
    out << "verify: " << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? kOk : kVerifyFailure;
}

}  // namespace detail

/// Parses argv and dispatches. Returns the process exit status; diagnostics go to `err` as a single
/// line.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CliConfig cfg;
    CLI::App app{"Two coupled oscillators under Milburn intrinsic decoherence"};
    app.require_subcommand(1);

    auto add_physics = [&](CLI::App* sub) {
        sub->add_option("--omega1", cfg.params.omega1, "frequency of oscillator A")->capture_default_str();
        sub->add_option("--omega2", cfg.params.omega2, "frequency of oscillator B (<= omega1)")->capture_default_str();
        sub->add_option("-J,--coupling", cfg.params.coupling, "position-position coupling J")->capture_default_str();
        sub->add_option("--gamma", cfg.params.gamma, "intrinsic decoherence rate Gamma")->capture_default_str();
    };
    auto add_run = [&](CLI::App* sub) {
        sub->add_option("--t-max", cfg.t_max, "end of the time grid (starts at 0)")->capture_default_str();
        sub->add_option("--steps", cfg.steps, "number of grid points")->capture_default_str();
        sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
        sub->add_flag("--csv,!--no-csv", cfg.csv, "write CSV files (default on)");
        sub->add_flag("--svg", cfg.svg, "also write SVG line charts");
        sub->add_flag("--verbose", cfg.verbose, "add unclamped steering columns to CSV output");
    };

    auto* modes = app.add_subcommand("modes", "print the derived normal-mode quantities as JSON");
    add_physics(modes);

    auto* evolve = app.add_subcommand("evolve", "single time-series run");
    add_physics(evolve);
    add_run(evolve);
    evolve->add_option("--kernel", cfg.kernel, "milburn or von-neumann")->capture_default_str();
    evolve->add_flag("--oracle", cfg.oracle, "cross-check every 100th grid point against the series oracle");

    auto* sweep = app.add_subcommand("sweep", "run one time series per value of a parameter axis");
    add_physics(sweep);
    add_run(sweep);
    sweep->add_option("--kernel", cfg.kernel, "milburn or von-neumann")->capture_default_str();
    sweep->add_option("--axis", cfg.axis, "J, omega2 or Gamma")->capture_default_str();
    sweep->add_option("--values", cfg.values, "strictly monotone axis values")->delimiter(',')->required();

    auto* figure = app.add_subcommand("figure", "reproduce a figure preset: fig4, anisotropy or coupling");
    figure->add_option("name", cfg.preset, "preset name")->required();
    figure->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    figure->add_flag("--csv,!--no-csv", cfg.csv, "write CSV files (default on)");
    figure->add_flag("--svg", cfg.svg, "also write SVG line charts");
    figure->add_flag("--verbose", cfg.verbose, "add unclamped steering columns to CSV output");

    auto* verify = app.add_subcommand("verify", "run the built-in oracle suites");
    verify->add_option("--samples", cfg.samples, "random samples per suite")->capture_default_str();
    verify->add_option("--seed", cfg.seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    try {
        if (*modes) return detail::cmd_modes(cfg, out);
        if (*evolve) return detail::cmd_evolve(cfg, out);
        if (*sweep) return detail::cmd_sweep(cfg, out);
        if (*figure) return detail::cmd_figure(cfg, out);
        if (*verify) return detail::cmd_verify(cfg, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace milburn::cli
