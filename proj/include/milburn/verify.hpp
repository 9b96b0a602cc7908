#pragma once

// Built-in self-checks behind `milburn verify`.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "milburn/evolution.hpp"
#include "milburn/normal_modes.hpp"
#include "milburn/quantifiers.hpp"
#include "milburn/symplectic.hpp"

namespace milburn {

struct SuiteReport {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
    double worst = 0.0;  ///< largest residual seen

    void record(bool ok, double residual) {
        (ok ? passed : failed)++;
        if (std::isfinite(residual)) worst = std::max(worst, residual);
        else worst = residual;
    }
};

/// Random stable parameters with omega1 >= omega2 and J below `margin` of the stability bound.
inline SystemParams random_stable_params(std::mt19937_64& rng, double margin = 0.95) {
    std::uniform_real_distribution<double> w(0.3, 2.0), u(0.0, 1.0), lg(0.0, 3.0);
    SystemParams p;
    p.omega1 = w(rng);
    p.omega2 = p.omega1 * (0.2 + 0.8 * u(rng));
    p.coupling = margin * u(rng) * p.omega1 * p.omega2;
    p.gamma = std::pow(10.0, lg(rng));
    return p;
}

inline SuiteReport verify_symplectic(std::size_t samples, std::mt19937_64& rng) {
    SuiteReport rep{"symplectic"};
    std::uniform_real_distribution<double> ang(-3.2, 3.2), r(1.0, 3.0), s(-1.0, 1.0), om(0.1, 3.0), tau(-20.0, 20.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const double th = ang(rng), R = r(rng), s1 = s(rng), s2 = s(rng), O1 = om(rng), O2 = om(rng), tt = tau(rng);
        const SymplecticMatrix mats[] = {rotation_symplectic(th, R), squeeze_symplectic(s1, s2), phase_symplectic(O1, O2, tt)};
        for (const auto& m : mats) rep.record(is_symplectic(m, 1e-10), metric_residual(m));
        const double inv = std::max({
            (rotation_symplectic(th, R) * rotation_symplectic(-th, R)).max_abs_diff(SymplecticMatrix::identity()),
            (squeeze_symplectic(s1, s2) * squeeze_symplectic(-s1, -s2)).max_abs_diff(SymplecticMatrix::identity()),
            (phase_symplectic(O1, O2, tt) * phase_symplectic(O1, O2, -tt)).max_abs_diff(SymplecticMatrix::identity()),
        });
        rep.record(inv <= 1e-12, inv);
    }
    return rep;
}

inline SuiteReport verify_frequencies(std::size_t samples, std::mt19937_64& rng) {
    SuiteReport rep{"normal-frequencies"};
    for (std::size_t i = 0; i < samples; ++i) {
        const auto p = random_stable_params(rng);
        const auto m = derive_modes(p);
        const double w1s = p.omega1 * p.omega1, w2s = p.omega2 * p.omega2;
        const double tr = std::abs(m.Omega1 * m.Omega1 + m.Omega2 * m.Omega2 - (w1s + w2s)) / (w1s + w2s);
        const double det =
            std::abs(m.Omega1 * m.Omega1 * m.Omega2 * m.Omega2 - (w1s * w2s - p.coupling * p.coupling)) / (w1s * w2s);
        rep.record(tr <= 1e-12 && det <= 1e-12, std::max(tr, det));
    }
    return rep;
}

/// Printed isotropic occupation display and off-diagonal entries against the general pipeline.
/// The printed off-diagonals use the conjugate ordering <{A_n^dag, A_m}>.
inline SuiteReport verify_isotropic(std::size_t samples, std::mt19937_64& rng) {
    SuiteReport rep{"isotropic-closed-form"};
    std::uniform_real_distribution<double> J(0.05, 0.9), t(0.0, 50.0), lg(1.0, 3.0);
    for (std::size_t i = 0; i < samples; ++i) {
        const SystemParams p{1.0, 1.0, J(rng), std::pow(10.0, lg(rng))};
        const auto m = derive_modes(p);
        const double tt = t(rng);
        const auto sigma = milburn_covariance(m, p.gamma, tt);
        const auto e = isotropic_closed_form(m, p.gamma, tt);
        const double n1 = 0.5 * (sigma(kA, kA).real() - 1.0);
        const double res = std::max({std::abs(isotropic_excitation_closed_form(m, p.gamma, tt) - n1),
                                     std::abs(e.sigma12 - std::conj(sigma(kA, kADag))),
                                     std::abs(e.sigma13 - std::conj(sigma(kA, kB))),
                                     std::abs(e.sigma23 - std::conj(sigma(kADag, kB)))});
        rep.record(res <= 1e-10, res);
    }
    return rep;
}

inline SuiteReport verify_series(std::size_t samples, std::mt19937_64& rng) {
    SuiteReport rep{"series-vs-resummation"};
    std::uniform_real_distribution<double> t(0.0, 20.0), lg(0.0, 3.0);
    for (std::size_t i = 0; i < samples; ++i) {
        auto p = random_stable_params(rng);
        p.gamma = std::pow(10.0, lg(rng));
        const auto m = derive_modes(p);
        const double tt = t(rng);
        const double res = milburn_covariance(m, p.gamma, tt).max_abs_diff(series_oracle_covariance(m, p.gamma, tt, 1e-12));
        rep.record(res <= 1e-8, res);
    }
    return rep;
}

inline SuiteReport verify_kernel_limit(std::size_t samples, std::mt19937_64& rng) {
    SuiteReport rep{"milburn-unitary-limit"};
    std::uniform_real_distribution<double> t(0.0, 50.0);
    for (std::size_t i = 0; i < samples; ++i) {
        auto p = random_stable_params(rng);
        p.gamma = 1e8;
        const auto m = derive_modes(p);
        const double tt = t(rng);
        const double res = milburn_covariance(m, p.gamma, tt).max_abs_diff(von_neumann_covariance(m, tt));
        rep.record(res <= 1e-5, res);
    }
    return rep;
}

inline std::vector<SuiteReport> run_verification(std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return {verify_symplectic(samples, rng), verify_frequencies(samples, rng), verify_isotropic(samples, rng),
            verify_series(std::max<std::size_t>(1, samples / 5), rng), verify_kernel_limit(samples, rng)};
}

}  // namespace milburn
