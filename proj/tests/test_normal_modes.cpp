#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "milburn/normal_modes.hpp"

using namespace milburn;

namespace {

// Eigenvalues of the potential matrix [[w1^2, -J], [-J, w2^2]], descending.
std::pair<double, double> potential_eigenvalues(const SystemParams& p) {
    Eigen::Matrix2d K;
    K << p.omega1 * p.omega1, -p.coupling, -p.coupling, p.omega2 * p.omega2;
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(K).eigenvalues();
    return {ev(1), ev(0)};
}

// Angle of the eigenvector belonging to the larger eigenvalue, folded into [0, pi/2).
double diagonalizing_angle(const SystemParams& p) {
    Eigen::Matrix2d K;
    K << p.omega1 * p.omega1, -p.coupling, -p.coupling, p.omega2 * p.omega2;
    const Eigen::Vector2d v = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(K).eigenvectors().col(1);
    double a = std::atan2(-v(1), v(0));
    if (a < 0) a += std::numbers::pi;
    return a;
}

}  // namespace

TEST(RotationAngle, IsotropicLimitIsQuarterPi) {
    EXPECT_DOUBLE_EQ(rotation_angle(1.0, 0.2), std::numbers::pi / 4);
}

TEST(RotationAngle, UncoupledNeedsNoRotation) {
    EXPECT_EQ(rotation_angle(1.0, 0.0), 0.0);
    EXPECT_EQ(rotation_angle(3.7, 0.0), 0.0);
}

TEST(RotationAngle, MatchesPotentialEigenvectors) {
    const SystemParams p{1.0, 0.5, 0.2, 100.0};
    const double theta = rotation_angle(std::sqrt(2.0), 0.8);
    EXPECT_NEAR(theta, 0.244979, 1e-6);
    EXPECT_NEAR(theta, diagonalizing_angle(p), 1e-12);
}

TEST(RotationAngle, RejectsOutOfDomain) {
    EXPECT_THROW(rotation_angle(0.9, 0.1), DomainError);
    EXPECT_THROW(rotation_angle(1.2, -0.1), DomainError);
}

TEST(RotationAngle, ContinuousTowardIsotropy) {
    double prev = rotation_angle(1.5, 0.3);
    for (double R = 1.4; R > 1.0 + 1e-9; R = 1.0 + (R - 1.0) * 0.5) {
        const double th = rotation_angle(R, 0.3);
        EXPECT_GE(th, prev - 1e-15);
        EXPECT_LE(th, std::numbers::pi / 4);
        prev = th;
    }
    EXPECT_NEAR(prev, std::numbers::pi / 4, 1e-6);
}

TEST(NormalFrequencies, IsotropicExample) {
    const auto [O1, O2] = normal_frequencies({1.0, 1.0, 0.2, 100.0});
    EXPECT_NEAR(O1, std::sqrt(1.2), 1e-15);
    EXPECT_NEAR(O2, std::sqrt(0.8), 1e-15);
    EXPECT_NEAR(O1, 1.095445, 1e-6);
    EXPECT_NEAR(O2, 0.894427, 1e-6);
}

TEST(NormalFrequencies, AnisotropicExampleAgainstEigenvalues) {
    const SystemParams p{1.0, 0.5, 0.2, 100.0};
    const auto [O1, O2] = normal_frequencies(p);
    const auto [l1, l2] = potential_eigenvalues(p);
    EXPECT_NEAR(O1 * O1, 1.05, 1e-14);
    EXPECT_NEAR(O2 * O2, 0.2, 1e-14);
    EXPECT_NEAR(O1 * O1, l1, 1e-14);
    EXPECT_NEAR(O2 * O2, l2, 1e-14);
}

TEST(NormalFrequencies, DecoupledLimit) {
    const auto [O1, O2] = normal_frequencies({1.0, 1.0, 0.0, 100.0});
    EXPECT_DOUBLE_EQ(O1, 1.0);
    EXPECT_DOUBLE_EQ(O2, 1.0);
}

TEST(NormalFrequencies, InstabilityAtAndBeyondBoundary) {
    EXPECT_THROW(normal_frequencies({1.0, 0.5, 0.5, 100.0}), InstabilityError);
    EXPECT_THROW(normal_frequencies({1.0, 0.5, 0.7, 100.0}), InstabilityError);
    EXPECT_NO_THROW(normal_frequencies({1.0, 0.5, 0.4999, 100.0}));
}

TEST(DeriveModes, IsotropicExample) {
    const auto m = derive_modes({1.0, 1.0, 0.2, 100.0});
    EXPECT_DOUBLE_EQ(m.theta, std::numbers::pi / 4);
    EXPECT_NEAR(m.s1, 0.045581, 1e-6);
    EXPECT_NEAR(m.s2, -0.055786, 1e-6);
    EXPECT_NEAR(m.s1, 0.25 * std::log(1.2), 1e-15);
    EXPECT_TRUE(m.isotropic());
}

TEST(DeriveModes, DecoupledExample) {
    const auto m = derive_modes({1.0, 1.0, 0.0, 100.0});
    EXPECT_EQ(m.theta, 0.0);
    EXPECT_EQ(m.s1, 0.0);
    EXPECT_EQ(m.s2, 0.0);
}

TEST(DeriveModes, PropagatesInstability) {
    try {
        derive_modes({1.0, 0.5, 0.5, 100.0});
        FAIL() << "expected InstabilityError";
    } catch (const InstabilityError& e) {
        EXPECT_NE(std::string(e.what()).find("J < omega1*omega2 = 0.5"), std::string::npos) << e.what();
    }
}

TEST(Validation, RejectsBadDomain) {
    EXPECT_THROW(validate({0.0, 1.0, 0.1, 1.0}), DomainError);
    EXPECT_THROW(validate({1.0, -1.0, 0.1, 1.0}), DomainError);
    EXPECT_THROW(validate({1.0, 1.0, -0.1, 1.0}), DomainError);
    EXPECT_THROW(validate({1.0, 1.0, 0.1, 0.0}), DomainError);
    EXPECT_THROW(validate({0.5, 1.0, 0.1, 1.0}), DomainError);  // omega1 < omega2
    EXPECT_THROW(validate({1.0, 1.0, NAN, 1.0}), DomainError);
    EXPECT_NO_THROW(validate({1.0, 1.0, 0.0, 1.0}));
}

TEST(DeriveModes, RandomStableParamsSatisfyInvariants) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(0.2, 3.0), u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        SystemParams p;
        p.omega1 = w(rng);
        p.omega2 = p.omega1 * (0.05 + 0.95 * u(rng));
        p.coupling = 0.99 * u(rng) * p.omega1 * p.omega2;
        const auto m = derive_modes(p);
        const auto [l1, l2] = potential_eigenvalues(p);
        const double w1s = p.omega1 * p.omega1, w2s = p.omega2 * p.omega2;
        ASSERT_NEAR(m.Omega1 * m.Omega1 / l1, 1.0, 1e-12);
        ASSERT_NEAR(m.Omega2 * m.Omega2 / l2, 1.0, 1e-12);
        ASSERT_NEAR((m.Omega1 * m.Omega1 * m.Omega2 * m.Omega2) / (w1s * w2s - p.coupling * p.coupling), 1.0, 1e-12);
        ASSERT_NEAR((m.Omega1 * m.Omega1 + m.Omega2 * m.Omega2) / (w1s + w2s), 1.0, 1e-12);
        ASSERT_GE(m.Omega1, p.omega1 * (1 - 1e-15));
        ASSERT_LE(m.Omega2, p.omega2 * (1 + 1e-15));
        ASSERT_GE(m.s1, 0.0);
        ASSERT_LE(m.s2, 0.0);
        ASSERT_GT(m.theta, 0.0);
        ASSERT_LE(m.theta, std::numbers::pi / 4);
    }
}

TEST(DeriveModes, SqueezingVanishesWithCoupling) {
    for (double J : {1e-2, 1e-4, 1e-6}) {
        const auto m = derive_modes({1.0, 0.7, J, 1.0});
        EXPECT_LT(m.s1, 10 * J);
        EXPECT_GT(m.s2, -10 * J);
    }
}
