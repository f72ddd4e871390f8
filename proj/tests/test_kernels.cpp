#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "landau/kernels.hpp"

using namespace landau;

TEST_CASE("make_kernel validates the soft-potential range") {
    CHECK_THROWS_AS(make_kernel(-1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_kernel(-2.0, 0.1), std::invalid_argument);  // gamma < -2 required
    CHECK_THROWS_AS(make_kernel(-3.0001, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_kernel(-3.0, -0.1), std::invalid_argument);
    const KernelSpec s = make_kernel(-3.0, 0.25);
    CHECK(s.gamma == -3.0);
    CHECK(s.epsilon == 0.25);
}

TEST_CASE("a(z) is the scaled projection off z") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Vector3d z(u(rng), u(rng), u(rng));
        if (z.norm() < 1e-6) continue;
        const Eigen::Matrix3d a = a_matrix(z);

        CHECK((a * z).norm() <= 1e-13 * z.squaredNorm() * z.norm());
        CHECK(a.trace() == doctest::Approx(2.0 * z.squaredNorm()).epsilon(1e-14));
        CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);

        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a);
        CHECK(es.eigenvalues()(0) >= -1e-13 * z.squaredNorm());
        CHECK(es.eigenvalues()(1) == doctest::Approx(z.squaredNorm()).epsilon(1e-12));
        CHECK(es.eigenvalues()(2) == doctest::Approx(z.squaredNorm()).epsilon(1e-12));
    }
}

TEST_CASE("b fields are orthogonal to z and reproduce a(z)") {
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Vector3d z(u(rng), u(rng), u(rng));
        Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector3d bk = b_field(k, z);
            CHECK(std::abs(bk.dot(z)) <= 1e-14 * z.squaredNorm());
            sum += bk * bk.transpose();
        }
        CHECK((sum - a_matrix(z)).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + z.squaredNorm()));
    }
}

TEST_CASE("eta is the documented quintic: exact values and C2 knots") {
    CHECK(eta(0.0) == 0.0);
    CHECK(eta(0.25) == doctest::Approx(std::pow(0.25, 5)).epsilon(1e-15));
    CHECK(eta(0.5) == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    CHECK(eta(1.0) == 1.0);
    CHECK(eta(2.5) == 1.0);

    // Monotone on a dense scan.
    double prev = 0.0;
    for (int i = 1; i <= 3000; ++i) {
        const double r = 1.5 * i / 3000.0;
        const double v = eta(r);
        CHECK(v >= prev);
        prev = v;
    }

    // Value and first two derivatives are continuous across both knots.
    for (double knot : {0.5, 1.0}) {
        const double d = 1e-7;
        CHECK(eta(knot + d) - eta(knot - d) <= 1e-6);
        CHECK(std::abs(eta_d(knot + d) - eta_d(knot - d)) <= 2e-5);
        CHECK(std::abs(eta_dd(knot + d) - eta_dd(knot - d)) <= 2e-3);
    }

    // Analytic derivatives match central differences of eta.
    for (double r : {0.1, 0.3, 0.45, 0.6, 0.8, 0.95}) {
        const double d = 1e-5;
        const double fd1 = (eta(r + d) - eta(r - d)) / (2.0 * d);
        const double fd2 = (eta(r + d) - 2.0 * eta(r) + eta(r - d)) / (d * d);
        CHECK(eta_d(r) == doctest::Approx(fd1).epsilon(1e-7));
        CHECK(eta_dd(r) == doctest::Approx(fd2).epsilon(1e-4));
    }
}

TEST_CASE("measured kernel constants sit in their frozen bands") {
    const KernelSpec s = make_kernel(-3.0, 0.1);
    CHECK(s.eta_sup_dd == doctest::Approx(20.7231377552831).epsilon(1e-9));
    CHECK(s.c_delta == doctest::Approx(13.263654343243012).epsilon(1e-9));

    // c_delta dominates its defining expression on a dense scan.
    double sup = 0.0;
    for (int i = 1; i <= 20000; ++i) {
        const double r = 2.0 * i / 20000.0;
        const double expr = std::pow(2.0, s.gamma) *
                            (6.0 * eta(r) * std::pow(r, s.gamma - 2.0) +
                             std::max(eta_dd(r), 0.0) * std::pow(r, s.gamma));
        CHECK(expr <= s.c_delta * (1.0 + 1e-12));
        sup = std::max(sup, expr);
    }
    CHECK(sup >= 0.99 * s.c_delta);
}

TEST_CASE("alpha forms and their radial derivatives agree with differences") {
    const KernelSpec s = make_kernel(-2.5, 0.2);
    for (double r : {0.05, 0.3, 0.7, 1.4, 3.0}) {
        const double d = 1e-6 * r;
        const double fd = (alpha(s, r + d) - alpha(s, r - d)) / (2.0 * d);
        CHECK(alpha_d(s, r) == doctest::Approx(fd).epsilon(1e-7));
        const double fdt = (alpha_tilde(s, r + d) - alpha_tilde(s, r - d)) / (2.0 * d);
        CHECK(alpha_tilde_d(s, r) == doctest::Approx(fdt).epsilon(1e-7));
    }
    // Regularization vanishes for r >> eps, and caps the value near r = 0.
    CHECK(alpha(s, 100.0) == doctest::Approx(std::pow(100.0, -2.5)).epsilon(1e-6));
    CHECK(alpha(s, 0.0) == doctest::Approx(std::pow(0.2, -2.5)).epsilon(1e-14));
    CHECK(alpha_tilde(s, 0.4) == doctest::Approx(eta(0.4) * std::pow(0.4, -2.5)).epsilon(1e-14));
}

TEST_CASE("cube kernel averages match closed forms and frozen values") {
    CHECK(cube_kernel_average(0.0) == doctest::Approx(1.0).epsilon(1e-10));
    // Mean of |u| over the unit cube: half the classic box integral
    // B3 = sqrt(3)/4 + log(2+sqrt(3))/2 - pi/24.
    const double b3 =
        std::sqrt(3.0) / 4.0 + std::log(2.0 + std::sqrt(3.0)) / 2.0 - M_PI / 24.0;
    CHECK(cube_kernel_average(1.0) == doctest::Approx(0.5 * b3).epsilon(1e-10));
    // Singular exponent against the frozen reference.
    CHECK(cube_kernel_average(-1.0) == doctest::Approx(2.380077363979554).epsilon(1e-9));
    CHECK_THROWS_AS(cube_kernel_average(-3.0), std::invalid_argument);
    CHECK_THROWS_AS(cube_kernel_average(1.5), std::invalid_argument);
}
