#pragma once

// Exact Milburn evolution of the two-mode covariance.
//
// The Milburn map is a Poisson mixture of unitaries exp(-i k H / Gamma). In the normal-mode
// frame every unitary is diagonal, so the mixture acts entrywise: entry (i, j) of the
// normal-frame covariance picks up sum_k w_k exp(-i k (nu_i - nu_j) / Gamma), which resums to
// exp[Gamma t (exp(i (nu_i - nu_j) / Gamma) - 1)].

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "milburn/detail/format.hpp"
#include "milburn/errors.hpp"
#include "milburn/normal_modes.hpp"
#include "milburn/symplectic.hpp"

namespace milburn {

/// Frames relating the lab basis to the normal-mode basis: Sigma_lab = U Sigma_normal U^dag and
/// Sigma_normal = V Sigma_lab V^dag, with U V = 1.
struct ConjugationFrames {
    SymplecticMatrix to_lab;    ///< U = S_R(theta) S_S(-s1, -s2)
    SymplecticMatrix from_lab;  ///< V = S_S(s1, s2) S_R(-theta)
    std::array<double, 4> rates{};  ///< phase rates nu = (-Omega1, +Omega1, -Omega2, +Omega2)
};

inline ConjugationFrames conjugation_frames(const NormalModes& m) {
    ConjugationFrames f;
    f.to_lab = rotation_symplectic(m.theta, m.R) * squeeze_symplectic(-m.s1, -m.s2);
    f.from_lab = squeeze_symplectic(m.s1, m.s2) * rotation_symplectic(-m.theta, m.R);
    f.rates = {-m.Omega1, m.Omega1, -m.Omega2, m.Omega2};
    return f;
}

/// E_ij(t); unit diagonal, |E_ij| <= 1.
class DecoherenceFactorMatrix {
  public:
    DecoherenceFactorMatrix() : e_(Matrix4::Ones()) {}
    explicit DecoherenceFactorMatrix(const Matrix4& e) : e_(e) {}

    [[nodiscard]] const Matrix4& matrix() const { return e_; }
    Complex operator()(int row, int col) const { return e_(row, col); }

  private:
    Matrix4 e_;
};

namespace detail {

inline void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0 (got " + short_num(t) + ")");
}

inline void require_rate(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("Gamma must be finite and > 0 (got " + short_num(gamma) + ")");
}

/// Hadamard resummation U (M o E) U^dag with M = V Sigma0 V^dag.
inline CovarianceMatrix conjugate_hadamard(const ConjugationFrames& f, const CovarianceMatrix& initial,
                                           const Matrix4& factors) {
    const Matrix4 M = f.from_lab.matrix() * initial.matrix() * f.from_lab.matrix().adjoint();
    const Matrix4 damped = M.cwiseProduct(factors);
    CovarianceMatrix out(Matrix4(f.to_lab.matrix() * damped * f.to_lab.matrix().adjoint()));
    out.symmetrize();
    return out;
}

}  // namespace detail

/// exp[Gamma t (e^{i delta/Gamma} - 1)], with e^{ix} - 1 = -2 sin^2(x/2) + i sin x for accuracy at
/// large Gamma.
inline Complex decoherence_factor(double delta, double gamma, double t) {
    if (t == 0.0 || delta == 0.0) return {1.0, 0.0};
    const double x = delta / gamma;
    const double half = std::sin(0.5 * x);
    const Complex em1(-2.0 * half * half, std::sin(x));
    return std::exp(gamma * t * em1);
}

inline DecoherenceFactorMatrix decoherence_factor_matrix(const NormalModes& m, double gamma, double t) {
    detail::require_rate(gamma);
    detail::require_time(t);
    const auto nu = conjugation_frames(m).rates;
    Matrix4 e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) e(i, j) = i == j ? Complex(1.0, 0.0) : decoherence_factor(nu[i] - nu[j], gamma, t);
    return DecoherenceFactorMatrix(e);
}

/// Unitary (Gamma -> infinity) counterpart: exp[i (nu_i - nu_j) t].
inline DecoherenceFactorMatrix unitary_factor_matrix(const NormalModes& m, double t) {
    detail::require_time(t);
    const auto nu = conjugation_frames(m).rates;
    Matrix4 e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) e(i, j) = i == j ? Complex(1.0, 0.0) : std::polar(1.0, (nu[i] - nu[j]) * t);
    return DecoherenceFactorMatrix(e);
}

/// Sigma(t) under Milburn intrinsic decoherence, exact for every Gamma t.
inline CovarianceMatrix milburn_covariance(const NormalModes& m, double gamma, double t,
                                           const CovarianceMatrix& initial = CovarianceMatrix::vacuum()) {
    const auto factors = decoherence_factor_matrix(m, gamma, t);
    if (t == 0.0) return initial;
    return detail::conjugate_hadamard(conjugation_frames(m), initial, factors.matrix());
}

/// Sigma(t) under closed unitary (von Neumann) evolution.
inline CovarianceMatrix von_neumann_covariance(const NormalModes& m, double t,
                                               const CovarianceMatrix& initial = CovarianceMatrix::vacuum()) {
    const auto factors = unitary_factor_matrix(m, t);
    if (t == 0.0) return initial;
    return detail::conjugate_hadamard(conjugation_frames(m), initial, factors.matrix());
}

struct PoissonTruncation {
    std::size_t terms = 1;   ///< number of leading terms kept (k = 0 .. terms-1)
    double weight_sum = 1.0; ///< sum of the kept Poisson weights
};

/// Truncation index for a Poisson(lambda) series: the larger of ceil(lambda + 12 sqrt(lambda+1) + 25)
/// and the first index whose tail mass drops below eps. Weights come from a log-space recurrence.
inline PoissonTruncation poisson_truncation(double lambda, double eps) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("Poisson mean must be finite and >= 0");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("tail tolerance must lie in (0, 1)");
    if (lambda == 0.0) return {1, 1.0};
    const auto concentration = static_cast<std::size_t>(std::ceil(lambda + 12.0 * std::sqrt(lambda + 1.0) + 25.0));
    const std::size_t cap = 4 * concentration + 1000;
    const long double lam = lambda;
    const long double log_lambda = std::log(lam);
    long double sum = 0.0L;
    std::size_t k = 0;
    for (; k < cap; ++k) {
        const long double kk = static_cast<long double>(k);
        sum += std::exp(kk * log_lambda - lam - std::lgamma(kk + 1.0L));
        if (k + 1 >= concentration && 1.0L - sum < eps) break;
    }
    return {k + 1, static_cast<double>(sum)};
}

/// Direct Poisson-series evaluation sum_k w_k H_k Sigma0 H_k^dag, H_k = U P(k/Gamma) V.
/// Independent of the resummation; used as its oracle.
inline CovarianceMatrix series_oracle_covariance(const NormalModes& m, double gamma, double t, double eps,
                                                 const CovarianceMatrix& initial = CovarianceMatrix::vacuum()) {
    detail::require_rate(gamma);
    detail::require_time(t);
    const double lambda = gamma * t;
    const auto trunc = poisson_truncation(lambda, eps);
    const auto f = conjugation_frames(m);
    Matrix4 acc = Matrix4::Zero();
    const double log_lambda = lambda > 0.0 ? std::log(lambda) : 0.0;
    for (std::size_t k = 0; k < trunc.terms; ++k) {
        const double kk = static_cast<double>(k);
        const double w = lambda > 0.0 ? std::exp(kk * log_lambda - lambda - std::lgamma(kk + 1.0)) : 1.0;
        if (w > 0.0) {
            const SymplecticMatrix H =
                f.to_lab * phase_symplectic(m.Omega1, m.Omega2, static_cast<double>(k) / gamma) * f.from_lab;
            acc += w * (H.matrix() * initial.matrix() * H.matrix().adjoint());
        }
    }
    CovarianceMatrix out(acc);
    out.symmetrize();
    return out;
}

/// Index pairs (i < j) whose phase difference is a multiple of 2 pi * Gamma; those entries never
/// decohere.
inline std::vector<std::array<int, 2>> resonant_pairs(const NormalModes& m, double gamma, double tol = 1e-12) {
    detail::require_rate(gamma);
    const auto nu = conjugation_frames(m).rates;
    std::vector<std::array<int, 2>> out;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double x = (nu[i] - nu[j]) / gamma;
            if (x == 0.0) continue;  // degenerate rates (Omega1 == Omega2) are not resonances of the map
            const double turns = x / (2.0 * std::numbers::pi);
            if (std::abs(turns - std::round(turns)) <= tol * std::max(1.0, std::abs(turns))) out.push_back({i, j});
        }
    return out;
}

}  // namespace milburn
