#pragma once

// Correlation quantifiers read off a two-mode covariance matrix.

#include <algorithm>
#include <cmath>
#include <complex>

#include "milburn/detail/format.hpp"
#include "milburn/errors.hpp"
#include "milburn/normal_modes.hpp"
#include "milburn/symplectic.hpp"

namespace milburn {

inline constexpr double kImagTolerance = 1e-10;

namespace detail {

/// Real part of a quantity that must be real; throws if the imaginary residue exceeds tolerance.
inline double real_checked(Complex z, const char* what) {
    if (std::abs(z.imag()) > kImagTolerance * std::max(1.0, std::abs(z.real())))
        throw DomainError(std::string(what) + " has imaginary part " + short_num(z.imag()));
    return z.real();
}

inline double det2(const Matrix2& m) { return real_checked(m.determinant(), "2x2 block determinant"); }

}  // namespace detail

struct Excitations {
    double N1 = 0.0;
    double N2 = 0.0;
};

/// Mean occupations <a^dag a> = (Sigma_11 - 1)/2 and <b^dag b> = (Sigma_33 - 1)/2.
inline Excitations virtual_excitations(const CovarianceMatrix& sigma) {
    const double n1 = 0.5 * (detail::real_checked(sigma(kA, kA), "Sigma(1,1)") - 1.0);
    const double n2 = 0.5 * (detail::real_checked(sigma(kB, kB), "Sigma(3,3)") - 1.0);
    if (n1 < -1e-8 || n2 < -1e-8)
        throw NegativeOccupationError("negative occupation (N1=" + detail::short_num(n1) + ", N2=" +
                                      detail::short_num(n2) + ")");
    return {n1, n2};
}

struct BlockDecomposition {
    Matrix2 Sa;   ///< mode a: rows/cols {1, 2}
    Matrix2 Sb;   ///< mode b: rows/cols {3, 4}
    Matrix2 Sab;  ///< correlations: rows {1, 2} x cols {3, 4}

    [[nodiscard]] CovarianceMatrix assemble() const {
        Matrix4 m;
        m.topLeftCorner<2, 2>() = Sa;
        m.bottomRightCorner<2, 2>() = Sb;
        m.topRightCorner<2, 2>() = Sab;
        m.bottomLeftCorner<2, 2>() = Sab.adjoint();
        return CovarianceMatrix(m);
    }
};

inline BlockDecomposition block_decomposition(const CovarianceMatrix& sigma) {
    const Matrix4& m = sigma.matrix();
    return {m.topLeftCorner<2, 2>(), m.bottomRightCorner<2, 2>(), m.topRightCorner<2, 2>()};
}

/// Real determinant of the full covariance.
inline double covariance_determinant(const CovarianceMatrix& sigma) {
    return detail::real_checked(sigma.determinant(), "det Sigma");
}

struct PptEigenvalues {
    double nu_min = 1.0;    ///< smallest symplectic eigenvalue of the partial transpose
    double nu_max = 1.0;
    double seralian = 2.0;  ///< det Sa + det Sb - 2 det Sab
    double det_sigma = 1.0;
};

inline PptEigenvalues ppt_symplectic_eigenvalues(const CovarianceMatrix& sigma) {
    const auto blocks = block_decomposition(sigma);
    const double det_sigma = covariance_determinant(sigma);
    if (det_sigma < 0.0) throw DomainError("det Sigma < 0 (" + detail::short_num(det_sigma) + ")");
    const double delta = detail::det2(blocks.Sa) + detail::det2(blocks.Sb) - 2.0 * detail::det2(blocks.Sab);
    double disc = delta * delta - 4.0 * det_sigma;
    if (disc < 0.0) {
        if (disc < -1e-10 * std::max(1.0, delta * delta))
            throw DomainError("negative PPT discriminant (" + detail::short_num(disc) + ")");
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    const double big_sq = 0.5 * (delta + root);
    // Small root via the product nu_min^2 nu_max^2 = det Sigma, avoiding cancellation.
    const double small_sq = big_sq > 0.0 ? det_sigma / big_sq : 0.5 * (delta - root);
    if (small_sq < -1e-8 || big_sq < -1e-8) throw DomainError("negative squared PPT eigenvalue");
    return {std::sqrt(std::max(small_sq, 0.0)), std::sqrt(std::max(big_sq, 0.0)), delta, det_sigma};
}

/// E_N = max(0, -ln nu_min), in nats.
inline double log_negativity(const CovarianceMatrix& sigma) {
    const double nu = ppt_symplectic_eigenvalues(sigma).nu_min;
    return std::max(0.0, -std::log(nu));
}

struct Steering {
    double S_ab = 0.0;  ///< A -> B, bits
    double S_ba = 0.0;  ///< B -> A, bits
    double dS = 0.0;    ///< |S_ab - S_ba|
    double raw_ab = 0.0;
    double raw_ba = 0.0;
};

/// Two-way Gaussian steering log2 sqrt(det S_x / (4 det Sigma)), clamped at 0.
inline Steering steering(const CovarianceMatrix& sigma) {
    const double det_sigma = covariance_determinant(sigma);
    if (!(det_sigma > 0.0)) throw DomainError("steering requires det Sigma > 0");
    const auto blocks = block_decomposition(sigma);
    Steering s;
    s.raw_ab = 0.5 * std::log2(detail::det2(blocks.Sa) / (4.0 * det_sigma));
    s.raw_ba = 0.5 * std::log2(detail::det2(blocks.Sb) / (4.0 * det_sigma));
    s.S_ab = std::max(0.0, s.raw_ab);
    s.S_ba = std::max(0.0, s.raw_ba);
    s.dS = std::abs(s.S_ab - s.S_ba);
    return s;
}

/// 1 / sqrt(det Sigma), clamped to (0, 1].
inline double purity(const CovarianceMatrix& sigma) {
    const double det_sigma = covariance_determinant(sigma);
    if (!(det_sigma > 0.0)) throw DomainError("purity requires det Sigma > 0");
    return std::min(1.0, 1.0 / std::sqrt(det_sigma));
}

/// The four entries of the isotropic (R = 1) closed form as printed, in terms of ch_j = cosh s_j,
/// sh_j = sinh s_j and F_j^{+-} = exp[Gamma t (exp(+-2i Omega_j / Gamma) - 1)].
struct IsotropicEntries {
    Complex sigma11;
    Complex sigma12;
    Complex sigma13;
    Complex sigma23;
};

namespace detail {

struct IsotropicFactors {
    double ch1, sh1, ch2, sh2;
    Complex p1, m1, p2, m2;  // F_1^+, F_1^-, F_2^+, F_2^-
};

inline IsotropicFactors isotropic_factors(const NormalModes& m, double gamma, double t) {
    if (!m.isotropic()) throw DomainError("isotropic closed form requires R = 1 (got R=" + short_num(m.R) + ")");
    if (!(gamma > 0.0) || !(t >= 0.0)) throw DomainError("isotropic closed form requires Gamma > 0, t >= 0");
    auto F = [&](double phase) {
        return std::exp(gamma * t * (std::exp(Complex(0.0, phase / gamma)) - 1.0));
    };
    return {std::cosh(m.s1), std::sinh(m.s1), std::cosh(m.s2), std::sinh(m.s2),
            F(2.0 * m.Omega1), F(-2.0 * m.Omega1), F(2.0 * m.Omega2), F(-2.0 * m.Omega2)};
}

}  // namespace detail

/// Evaluates the printed isotropic expressions verbatim.
inline IsotropicEntries isotropic_closed_form(const NormalModes& m, double gamma, double t) {
    const auto f = detail::isotropic_factors(m, gamma, t);
    const double c1 = f.ch1, s1 = f.sh1, c2 = f.ch2, s2 = f.sh2;
    IsotropicEntries e;
    e.sigma11 = 0.5 * c1 * c1 * s1 * s1 * (2.0 - f.p1 - f.m1) + 0.5 * c2 * c2 * s2 * s2 * (2.0 - f.p2 - f.m2) + 1.0;
    e.sigma12 = c1 * c1 * c1 * s1 * (-2.0 + f.p1 + f.m1) + c2 * c2 * c2 * s2 * (-2.0 + f.p2 + f.m2) +
                c1 * s1 * (1.0 - f.m1) + c2 * s2 * (1.0 - f.m2);
    e.sigma13 = c2 * c2 * s2 * s2 * (2.0 - f.m2 - f.p2) + c1 * c1 * s1 * s1 * (-2.0 + f.m1 + f.p1);
    e.sigma23 = c1 * c1 * c1 * s1 * (2.0 - f.p1 - f.m1) + c2 * c2 * c2 * s2 * (-2.0 + f.p2 + f.m2) -
                c1 * s1 * (1.0 - f.p1) + c2 * s2 * (1.0 - f.p2);
    return e;
}

/// Printed isotropic occupation <a^dag a> = <b^dag b>.
inline double isotropic_excitation_closed_form(const NormalModes& m, double gamma, double t) {
    const auto f = detail::isotropic_factors(m, gamma, t);
    const Complex n = 0.5 * f.ch1 * f.ch1 * f.sh1 * f.sh1 * (2.0 - f.p1 - f.m1) +
                      0.5 * f.ch2 * f.ch2 * f.sh2 * f.sh2 * (2.0 - f.p2 - f.m2);
    return n.real();
}

/// Long-time occupation ch1^2 sh1^2 + ch2^2 sh2^2 of an isotropic Milburn run.
inline double isotropic_steady_excitation(const NormalModes& m) {
    const double a = std::cosh(m.s1) * std::sinh(m.s1);
    const double b = std::cosh(m.s2) * std::sinh(m.s2);
    return a * a + b * b;
}

/// One time point of a run.
struct CorrelationRecord {
    double t = 0.0;
    double N1 = 0.0;
    double N2 = 0.0;
    double E_N = 0.0;
    double S_ab = 0.0;
    double S_ba = 0.0;
    double dS = 0.0;
    double purity = 1.0;
    double nu_min_raw = 1.0;  ///< unclamped smallest PPT eigenvalue
    double S_ab_raw = 0.0;
    double S_ba_raw = 0.0;

    friend bool operator==(const CorrelationRecord&, const CorrelationRecord&) = default;
};

inline CorrelationRecord correlation_record(double t, const CovarianceMatrix& sigma) {
    CorrelationRecord r;
    r.t = t;
    const auto n = virtual_excitations(sigma);
    r.N1 = n.N1;
    r.N2 = n.N2;
    const auto ppt = ppt_symplectic_eigenvalues(sigma);
    r.nu_min_raw = ppt.nu_min;
    r.E_N = std::max(0.0, -std::log(ppt.nu_min));
    const auto st = steering(sigma);
    r.S_ab = st.S_ab;
    r.S_ba = st.S_ba;
    r.dS = st.dS;
    r.S_ab_raw = st.raw_ab;
    r.S_ba_raw = st.raw_ba;
    r.purity = purity(sigma);
    return r;
}

}  // namespace milburn
