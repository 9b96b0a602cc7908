#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "milburn/detail/format.hpp"
#include "milburn/errors.hpp"

namespace milburn {

/// Raw physical inputs in units hbar = m = 1. Oscillator A carries omega1, B carries omega2.
struct SystemParams {
    double omega1 = 1.0;
    double omega2 = 1.0;
    double coupling = 0.0;  ///< J, multiplies -x1*x2 in the Hamiltonian
    double gamma = 100.0;   ///< intrinsic decoherence rate

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Quantities derived from SystemParams that drive the evolution.
struct NormalModes {
    double R = 1.0;      ///< anisotropy sqrt(omega1/omega2)
    double g = 0.0;      ///< scaled coupling J/omega2^2
    double theta = 0.0;  ///< rotation angle of the diagonalizing transform
    double Omega1 = 1.0;
    double Omega2 = 1.0;
    double s1 = 0.0;  ///< 0.5*ln(Omega1/omega1), >= 0
    double s2 = 0.0;  ///< 0.5*ln(Omega2/omega2), <= 0

    [[nodiscard]] bool isotropic(double tol = 1e-12) const { return std::abs(R - 1.0) <= tol; }
};

/// Checks everything except stability (which normal_frequencies detects).
/// Throws DomainError naming the violated constraint.
inline void validate_domain(const SystemParams& p) {
    using detail::short_num;
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(p.omega1) || !finite(p.omega2) || !finite(p.coupling) || !finite(p.gamma))
        throw DomainError("parameters must be finite");
    if (!(p.omega1 > 0.0)) throw DomainError("omega1 must be > 0 (got " + short_num(p.omega1) + ")");
    if (!(p.omega2 > 0.0)) throw DomainError("omega2 must be > 0 (got " + short_num(p.omega2) + ")");
    if (!(p.gamma > 0.0)) throw DomainError("Gamma must be > 0 (got " + short_num(p.gamma) + ")");
    if (p.coupling < 0.0) throw DomainError("J must be >= 0 (got " + short_num(p.coupling) + ")");
    if (p.omega1 < p.omega2)
        throw DomainError("omega1 >= omega2 required (got omega1=" + short_num(p.omega1) +
                          ", omega2=" + short_num(p.omega2) + ")");
}

inline void check_stability(const SystemParams& p) {
    const double bound = p.omega1 * p.omega2;
    if (!(p.coupling < bound))
        throw InstabilityError("stability requires J < omega1*omega2 = " + detail::short_num(bound) +
                               " (got J=" + detail::short_num(p.coupling) + ")");
}

/// Full validation: domain plus stability.
inline void validate(const SystemParams& p) {
    validate_domain(p);
    check_stability(p);
}

/// Angle of the rotation diagonalizing the potential. theta = pi/4 at R = 1 (g > 0), 0 at g = 0.
inline double rotation_angle(double R, double g) {
    if (!(R >= 1.0) || !(g >= 0.0) || !std::isfinite(R) || !std::isfinite(g))
        throw DomainError("rotation_angle requires R >= 1 and g >= 0 (got R=" + detail::short_num(R) +
                          ", g=" + detail::short_num(g) + ")");
    if (g == 0.0) return 0.0;
    const double denom = R * R * R * R - 1.0;
    if (denom == 0.0) return std::numbers::pi / 4.0;
    return 0.5 * std::atan(2.0 * g / denom);
}

/// Normal frequencies (Omega1, Omega2), Omega1 >= Omega2.
/// Omega2^2 uses the rationalized form of (1+R^4)/2 - sqrt(...)/2 so it stays accurate near the
/// stability boundary.
inline std::pair<double, double> normal_frequencies(const SystemParams& p) {
    validate_domain(p);
    const double R2 = p.omega1 / p.omega2;
    const double R4 = R2 * R2;
    const double g = p.coupling / (p.omega2 * p.omega2);
    const double inv4 = 1.0 / R4;

    const double d1 = 1.0 - inv4;
    const double ratio1 = 0.5 * (1.0 + inv4) + 0.5 * std::sqrt(d1 * d1 + 4.0 * g * g * inv4 * inv4);

    const double root2 = std::sqrt((1.0 - R4) * (1.0 - R4) + 4.0 * g * g);
    const double ratio2 = 2.0 * (R4 - g * g) / (1.0 + R4 + root2);
    if (!(ratio2 > 0.0))
        throw InstabilityError("stability requires J < omega1*omega2 = " +
                               detail::short_num(p.omega1 * p.omega2) + " (got J=" +
                               detail::short_num(p.coupling) + ")");
    return {p.omega1 * std::sqrt(ratio1), p.omega2 * std::sqrt(ratio2)};
}

/// Derives every normal-mode quantity. Throws DomainError / InstabilityError.
inline NormalModes derive_modes(const SystemParams& p) {
    const auto [Omega1, Omega2] = normal_frequencies(p);
    NormalModes m;
    m.R = std::sqrt(p.omega1 / p.omega2);
    m.g = p.coupling / (p.omega2 * p.omega2);
    m.theta = rotation_angle(m.R, m.g);
    m.Omega1 = Omega1;
    m.Omega2 = Omega2;
    m.s1 = 0.5 * std::log(Omega1 / p.omega1);
    m.s2 = 0.5 * std::log(Omega2 / p.omega2);

    // Trace and determinant of the potential matrix [[w1^2, -J], [-J, w2^2]].
    const double w1s = p.omega1 * p.omega1;
    const double w2s = p.omega2 * p.omega2;
    const double trace = w1s + w2s;
    const double det = w1s * w2s - p.coupling * p.coupling;
    const double O1s = Omega1 * Omega1;
    const double O2s = Omega2 * Omega2;
    if (std::abs(O1s + O2s - trace) > 1e-10 * trace || std::abs(O1s * O2s - det) > 1e-10 * w1s * w2s)
        throw std::logic_error("normal frequencies fail the trace/determinant cross-check");
    return m;
}

}  // namespace milburn
