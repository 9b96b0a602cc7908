#pragma once

// Complex 4x4 algebra in the ordered basis (a, a^dag, b, b^dag).

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace milburn {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix<Complex, 4, 4>;
using Matrix2 = Eigen::Matrix<Complex, 2, 2>;

/// Positions in the ordered basis (a, a^dag, b, b^dag).
enum Basis : int { kA = 0, kADag = 1, kB = 2, kBDag = 3 };

namespace detail {

template <class Tag>
class Fixed4 {
  public:
    Fixed4() : m_(Matrix4::Identity()) {}
    explicit Fixed4(const Matrix4& m) : m_(m) {}

    [[nodiscard]] const Matrix4& matrix() const { return m_; }
    Matrix4& matrix() { return m_; }

    Complex operator()(int row, int col) const { return m_(row, col); }
    Complex& operator()(int row, int col) { return m_(row, col); }

    [[nodiscard]] Complex determinant() const { return m_.determinant(); }

    [[nodiscard]] double max_abs_diff(const Fixed4& other) const {
        return (m_ - other.m_).cwiseAbs().maxCoeff();
    }

    friend bool operator==(const Fixed4& x, const Fixed4& y) { return x.m_ == y.m_; }

  private:
    Matrix4 m_;
};

struct SymplecticTag {};
struct CovarianceTag {};

}  // namespace detail

/// A linear map A -> S A of the mode operators that preserves the commutators.
class SymplecticMatrix : public detail::Fixed4<detail::SymplecticTag> {
  public:
    using Fixed4::Fixed4;

    static SymplecticMatrix identity() { return SymplecticMatrix(); }

    friend SymplecticMatrix operator*(const SymplecticMatrix& x, const SymplecticMatrix& y) {
        return SymplecticMatrix(Matrix4(x.matrix() * y.matrix()));
    }
};

/// Sigma_{nm} = <{A_n, A_m^dag}> for zero first moments; the vacuum is the identity.
class CovarianceMatrix : public detail::Fixed4<detail::CovarianceTag> {
  public:
    using Fixed4::Fixed4;

    static CovarianceMatrix vacuum() { return CovarianceMatrix(); }

    /// Replaces the matrix with (Sigma + Sigma^dag)/2.
    void symmetrize() {
        Matrix4 h = 0.5 * (matrix() + matrix().adjoint());
        matrix() = h;
    }

    [[nodiscard]] double hermiticity_defect() const {
        return (matrix() - matrix().adjoint()).cwiseAbs().maxCoeff();
    }
};

/// The commutator metric J, defined by [A_n, A_m] = i J_nm, i.e. iJ = blockdiag(I~, I~) with
/// I~ = [[0, 1], [-1, 0]].
inline Matrix4 commutator_metric() {
    const Complex i(0.0, 1.0);
    Matrix4 J = Matrix4::Zero();
    J(kA, kADag) = -i;
    J(kADag, kA) = i;
    J(kB, kBDag) = -i;
    J(kBDag, kB) = i;
    return J;
}

/// Rotation R(theta) acting on (a, a^dag, b, b^dag). Mixes the modes through a beam-splitter
/// part (R + 1/R)/2 sin(theta) and a two-mode-squeezing part (R - 1/R)/2 sin(theta).
inline SymplecticMatrix rotation_symplectic(double theta, double R) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double bs = 0.5 * (R + 1.0 / R) * s;
    const double sq = 0.5 * (R - 1.0 / R) * s;
    Matrix4 m;
    // clang-format off
    m <<  c,   0.0,  bs,  sq,
          0.0, c,    sq,  bs,
         -bs,  sq,   c,   0.0,
          sq, -bs,   0.0, c;
    // clang-format on
    return SymplecticMatrix(m);
}

/// Local squeezers on both modes: blocks [[cosh s, sinh s], [sinh s, cosh s]].
inline SymplecticMatrix squeeze_symplectic(double s1, double s2) {
    Matrix4 m = Matrix4::Zero();
    m(kA, kA) = m(kADag, kADag) = std::cosh(s1);
    m(kA, kADag) = m(kADag, kA) = std::sinh(s1);
    m(kB, kB) = m(kBDag, kBDag) = std::cosh(s2);
    m(kB, kBDag) = m(kBDag, kB) = std::sinh(s2);
    return SymplecticMatrix(m);
}

/// Free evolution of the normal modes for a time tau:
/// diag(e^{-i Omega1 tau}, e^{+i Omega1 tau}, e^{-i Omega2 tau}, e^{+i Omega2 tau}).
inline SymplecticMatrix phase_symplectic(double Omega1, double Omega2, double tau) {
    Matrix4 m = Matrix4::Zero();
    m(kA, kA) = std::polar(1.0, -Omega1 * tau);
    m(kADag, kADag) = std::polar(1.0, Omega1 * tau);
    m(kB, kB) = std::polar(1.0, -Omega2 * tau);
    m(kBDag, kBDag) = std::polar(1.0, Omega2 * tau);
    return SymplecticMatrix(m);
}

/// Max-norm residual of S^T J S - J. The commutator form is bilinear, so the transpose (not
/// the adjoint) is the right pairing; the two coincide for real S.
inline double metric_residual(const SymplecticMatrix& S) {
    const Matrix4 J = commutator_metric();
    return (S.matrix().transpose() * J * S.matrix() - J).cwiseAbs().maxCoeff();
}

/// True iff the metric is preserved to `tol` and det S = 1 to 100*tol.
inline bool is_symplectic(const SymplecticMatrix& S, double tol = 1e-10) {
    if (!S.matrix().allFinite()) return false;
    return metric_residual(S) <= tol && std::abs(S.determinant() - Complex(1.0, 0.0)) <= tol * 1e2;
}

/// S Sigma S^dag, re-symmetrized against round-off.
inline CovarianceMatrix sandwich(const SymplecticMatrix& S, const CovarianceMatrix& sigma) {
    CovarianceMatrix out(Matrix4(S.matrix() * sigma.matrix() * S.matrix().adjoint()));
    out.symmetrize();
    return out;
}

}  // namespace milburn

#include <optional>
#include <string>

namespace milburn {

/// Returns a description of the first violated CovarianceMatrix invariant, if any:
/// Hermitian (1e-10), real diagonal >= 1 - 1e-10, det >= 1 - 1e-8.
inline std::optional<std::string> covariance_violation(const CovarianceMatrix& sigma) {
    if (!sigma.matrix().allFinite()) return "covariance has non-finite entries";
    if (sigma.hermiticity_defect() > 1e-10) return "covariance is not Hermitian";
    for (int i = 0; i < 4; ++i) {
        if (std::abs(sigma(i, i).imag()) > 1e-10) return "covariance diagonal is not real";
        if (sigma(i, i).real() < 1.0 - 1e-10) return "covariance diagonal below the vacuum floor";
    }
    const Complex det = sigma.determinant();
    if (det.real() < 1.0 - 1e-8) return "covariance determinant below 1";
    return std::nullopt;
}

}  // namespace milburn
