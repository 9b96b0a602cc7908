#pragma once

// Time series, parameter sweeps and figure presets.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "milburn/detail/format.hpp"
#include "milburn/errors.hpp"
#include "milburn/evolution.hpp"
#include "milburn/normal_modes.hpp"
#include "milburn/quantifiers.hpp"

namespace milburn {

/// Uniform grid over [t_start, t_end] with `steps` points (both ends included).
struct TimeGrid {
    double t_start = 0.0;
    double t_end = 100.0;
    std::size_t steps = 2001;

    void validate() const {
        if (!(t_start >= 0.0) || !std::isfinite(t_start)) throw DomainError("time grid needs t_start >= 0");
        if (!(t_end > t_start) || !std::isfinite(t_end)) throw DomainError("time grid needs t_end > t_start");
        if (steps < 2) throw DomainError("time grid needs at least 2 steps");
    }

    [[nodiscard]] double at(std::size_t i) const {
        if (i + 1 == steps) return t_end;
        return t_start + (t_end - t_start) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

enum class Kernel { milburn, von_neumann };

inline std::string_view to_string(Kernel k) { return k == Kernel::milburn ? "milburn" : "von-neumann"; }

inline Kernel parse_kernel(std::string_view s) {
    if (s == "milburn") return Kernel::milburn;
    if (s == "von-neumann" || s == "von_neumann" || s == "vonneumann") return Kernel::von_neumann;
    throw DomainError("unknown kernel '" + std::string(s) + "' (expected milburn or von-neumann)");
}

struct RunFlags {
    Kernel kernel = Kernel::milburn;
    bool resonance = false;  ///< some off-diagonal decoherence factor never decays
};

struct RunResult {
    SystemParams params;
    NormalModes modes;
    TimeGrid grid;
    std::vector<CorrelationRecord> records;
    RunFlags flags;
};

/// Covariance at time t with the chosen kernel.
inline CovarianceMatrix evolve(const NormalModes& modes, double gamma, double t, Kernel kernel) {
    return kernel == Kernel::milburn ? milburn_covariance(modes, gamma, t) : von_neumann_covariance(modes, t);
}

/// Evolves the vacuum over the grid and records every quantifier. Validation happens before any
/// evolution.
inline RunResult time_series(const SystemParams& params, const TimeGrid& grid, Kernel kernel) {
    validate(params);
    grid.validate();
    RunResult out;
    out.params = params;
    out.modes = derive_modes(params);
    out.grid = grid;
    out.flags.kernel = kernel;
    out.flags.resonance = kernel == Kernel::milburn && !resonant_pairs(out.modes, params.gamma).empty();
    out.records.reserve(grid.steps);
    for (std::size_t i = 0; i < grid.steps; ++i) {
        const double t = grid.at(i);
        out.records.push_back(correlation_record(t, evolve(out.modes, params.gamma, t, kernel)));
    }
    return out;
}

enum class SweepAxis { coupling, omega2, gamma };

inline std::string_view to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::coupling: return "J";
        case SweepAxis::omega2: return "omega2";
        case SweepAxis::gamma: return "Gamma";
    }
    return "?";
}

inline SweepAxis parse_axis(std::string_view s) {
    if (s == "J" || s == "coupling") return SweepAxis::coupling;
    if (s == "omega2") return SweepAxis::omega2;
    if (s == "Gamma" || s == "gamma") return SweepAxis::gamma;
    throw DomainError("unknown sweep axis '" + std::string(s) + "' (expected J, omega2 or Gamma)");
}

inline SystemParams with_axis(SystemParams p, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::coupling: p.coupling = value; break;
        case SweepAxis::omega2: p.omega2 = value; break;
        case SweepAxis::gamma: p.gamma = value; break;
    }
    return p;
}

struct SweepSpec {
    SystemParams base;
    SweepAxis axis = SweepAxis::coupling;
    std::vector<double> values;
    TimeGrid grid;

    /// Values must be strictly monotone. Individual cells may still be unstable; those are reported
    /// per cell by parameter_sweep.
    void validate() const {
        grid.validate();
        if (values.empty()) throw DomainError("sweep needs at least one value");
        if (values.size() > 1) {
            const bool up = values[1] > values[0];
            for (std::size_t i = 1; i < values.size(); ++i)
                if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1]))
                    throw DomainError("sweep values must be strictly monotone");
        }
    }
};

struct SweepCell {
    double value = 0.0;
    SystemParams params;
    std::optional<RunResult> result;
    std::string error;  ///< non-empty when the cell failed (e.g. InstabilityError)
};

/// Runs `tasks` on up to `threads` workers (0 = hardware concurrency). Each task writes only its own
/// slot, so the outcome does not depend on scheduling.
inline void run_parallel(std::size_t tasks, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < tasks; i = next++) body(i);
        });
}

/// One RunResult per axis value, in value order. Per-cell domain errors are recorded and the sweep
/// continues.
inline std::vector<SweepCell> parameter_sweep(const SweepSpec& spec, Kernel kernel, unsigned threads = 1) {
    spec.validate();
    std::vector<SweepCell> cells(spec.values.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        cells[i].value = spec.values[i];
        cells[i].params = with_axis(spec.base, spec.axis, spec.values[i]);
    }
    run_parallel(cells.size(), threads, [&](std::size_t i) {
        try {
            cells[i].result = time_series(cells[i].params, spec.grid, kernel);
        } catch (const DomainError& e) {
            cells[i].error = e.what();
        }
    });
    return cells;
}

/// RMS difference of N1(t) between the Milburn and von Neumann kernels.
inline double milburn_vs_vonneumann_distance(const SystemParams& params, const TimeGrid& grid) {
    const auto mil = time_series(params, grid, Kernel::milburn);
    const auto vn = time_series(params, grid, Kernel::von_neumann);
    double acc = 0.0;
    for (std::size_t i = 0; i < mil.records.size(); ++i) {
        const double d = mil.records[i].N1 - vn.records[i].N1;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(mil.records.size()));
}

/// Normalized RMS distance between the N1(t) and N2(t) curves:
/// RMS(N1 - N2) / sqrt(mean((N1^2 + N2^2)/2)); 0 when both curves vanish.
inline double sync_diagnostic(const RunResult& result) {
    if (result.records.empty()) throw DomainError("sync diagnostic needs a non-empty run");
    double diff = 0.0, scale = 0.0;
    for (const auto& r : result.records) {
        diff += (r.N1 - r.N2) * (r.N1 - r.N2);
        scale += 0.5 * (r.N1 * r.N1 + r.N2 * r.N2);
    }
    if (scale == 0.0) return 0.0;
    return std::sqrt(diff / scale);
}

/// Trapezoid-rule time average of one record field.
inline double time_average(const RunResult& result, double CorrelationRecord::*field) {
    const auto& rs = result.records;
    if (rs.size() < 2) throw DomainError("time average needs at least two records");
    double integral = 0.0;
    for (std::size_t i = 1; i < rs.size(); ++i)
        integral += 0.5 * (rs[i].*field + rs[i - 1].*field) * (rs[i].t - rs[i - 1].t);
    return integral / (rs.back().t - rs.front().t);
}

struct RunConfig {
    std::string label;
    SystemParams params;
    TimeGrid grid;
    Kernel kernel = Kernel::milburn;
};

/// Default grid: [0, 100] with 2001 points.
inline TimeGrid default_grid() { return {0.0, 100.0, 2001}; }

inline std::vector<RunConfig> figure_preset(std::string_view name) {
    std::vector<RunConfig> out;
    const auto tag = [](const char* prefix, double v) {
        std::string s = detail::short_num(v);
        std::replace(s.begin(), s.end(), '.', 'p');
        return std::string(prefix) + s;
    };
    if (name == "fig4") {
        // Approximate coupling ladder approaching the stability boundary J = omega1*omega2.
        for (double frac : {0.2, 0.4, 0.6, 0.8, 0.9, 0.99})
            for (Kernel k : {Kernel::milburn, Kernel::von_neumann})
                out.push_back({tag("J", frac) + "_" + std::string(to_string(k)), {1.0, 1.0, frac, 100.0},
                               default_grid(), k});
    } else if (name == "anisotropy") {
        for (double w2 : {1.0, 0.95, 0.7, 0.5, 0.3, 0.21})
            out.push_back({tag("omega2_", w2), {1.0, w2, 0.2, 100.0}, default_grid(), Kernel::milburn});
    } else if (name == "coupling") {
        for (double J : {0.1, 0.23, 0.35, 0.45, 0.49})
            out.push_back({tag("J", J), {1.0, 0.5, J, 100.0}, default_grid(), Kernel::milburn});
    } else {
        throw UnknownPresetError("unknown preset '" + std::string(name) + "' (expected fig4, anisotropy or coupling)");
    }
    return out;
}

}  // namespace milburn
