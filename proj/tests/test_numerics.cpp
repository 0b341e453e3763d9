#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qrdiode/numerics.hpp"

using namespace qrdiode;

TEST_CASE("kron index convention") {
    QOperator a(2, 2), b(3, 3);
    a << 1, 2, 3, 4;
    b << 1, 0, 5, 0, 1, 0, 7, 0, 1;
    const QOperator k = numerics::kron(a, b);
    REQUIRE(k.rows() == 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) CHECK(k(i * 3 + r, j * 3 + c) == a(i, j) * b(r, c));
}

TEST_CASE("kron mixed product") {
    std::mt19937 rng(7);
    const QOperator a = oracle::random_hermitian(2, rng), b = oracle::random_hermitian(3, rng);
    const QOperator c = oracle::random_hermitian(2, rng), d = oracle::random_hermitian(3, rng);
    const QOperator lhs = numerics::kron(a, b) * numerics::kron(c, d);
    const QOperator rhs = numerics::kron(a * c, b * d);
    CHECK(numerics::max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("eigh on sigma_x") {
    QOperator sx(2, 2);
    sx << 0, 1, 1, 0;
    const auto es = numerics::eigh(sx);
    CHECK(es.energies(0) == doctest::Approx(-1.0));
    CHECK(es.energies(1) == doctest::Approx(1.0));
    // first significant component real and positive
    CHECK(es.vectors(0, 0).real() > 0.0);
    CHECK(std::abs(es.vectors(0, 0).imag()) < 1e-15);
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const QOperator h = oracle::random_hermitian(7, rng);
        const auto es = numerics::eigh(h);
        const QOperator back = es.vectors * es.energies.cast<cplx>().asDiagonal() * es.vectors.adjoint();
        CHECK(numerics::max_abs(back - h) < 1e-12);
        CHECK(numerics::max_abs(es.vectors.adjoint() * es.vectors - QOperator::Identity(7, 7)) < 1e-12);
        for (Eigen::Index k = 1; k < 7; ++k) CHECK(es.energies(k) >= es.energies(k - 1));
        for (Eigen::Index k = 0; k < 7; ++k) {
            const auto col = es.vectors.col(k);
            Eigen::Index r = 0;
            while (std::abs(col(r)) <= 1e-12) ++r;
            CHECK(col(r).real() > 0.0);
            CHECK(std::abs(col(r).imag()) < 1e-14);
        }
    }
}

TEST_CASE("eigh rejects non-Hermitian input") {
    QOperator m(2, 2);
    m << 0, 1, 0, 0;
    CHECK_THROWS_AS(numerics::eigh(m), NonHermitianInput);
    CHECK_THROWS_AS(numerics::eigh(QOperator::Zero(2, 3)), NonHermitianInput);
}

TEST_CASE("nullspace of a two-state generator") {
    Eigen::MatrixXd m(2, 2);
    m << -0.4, 0.6, 0.4, -0.6;
    const Eigen::VectorXd p = numerics::nullspace(m);
    CHECK(p(0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p(1) == doctest::Approx(0.4).epsilon(1e-12));
    const Eigen::VectorXd q = numerics::stationary_distribution(m);
    CHECK((p - q).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("nullspace of the zero matrix is degenerate") {
    CHECK_THROWS_AS(numerics::nullspace(Eigen::MatrixXd::Zero(2, 2)), DegenerateSteadyState);
    CHECK(numerics::numerical_nullity(Eigen::MatrixXd::Zero(3, 3), 1e-10) == 3);
}

TEST_CASE("stationary distribution of a reducible chain throws") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(1, 0) = 1.0;
    m(0, 0) = -1.0;  // level 2 is disconnected
    CHECK_THROWS_AS(numerics::stationary_distribution(m), DegenerateSteadyState);
}

TEST_CASE("stationary distribution keeps tiny populations accurate") {
    // Birth-death chain with up/down ratio r: p_k proportional to r^k exactly.
    const int n = 12;
    const double r = 1e-3;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        m(k + 1, k) = r;    // up
        m(k, k + 1) = 1.0;  // down
    }
    for (int c = 0; c < n; ++c) m(c, c) = -(m.col(c).sum() - m(c, c));
    const Eigen::VectorXd p = numerics::stationary_distribution(m);
    double z = 0.0;
    for (int k = 0; k < n; ++k) z += std::pow(r, k);
    for (int k = 0; k < n; ++k) CHECK(oracle::rel(p(k), std::pow(r, k) / z) < 1e-13);
}

TEST_CASE("three-state cycle agrees with RK4 relaxation") {
    Eigen::MatrixXd m(3, 3);
    m << 0, 0.2, 1.5, 1.0, 0, 0.3, 0.4, 2.0, 0;
    for (int c = 0; c < 3; ++c) m(c, c) = -m.col(c).sum();
    const Eigen::VectorXd p = numerics::stationary_distribution(m);
    const Eigen::VectorXd svd = numerics::nullspace(m);

    Eigen::VectorXd y = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    const auto f = [&m](const Eigen::VectorXd& v) -> Eigen::VectorXd { return m * v; };
    for (int k = 0; k < 4000; ++k) y = numerics::rk4_step(f, y, 0.01);
    CHECK((p - y).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((p - svd).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(p.sum() - 1.0) < 1e-14);
}

TEST_CASE("rk4 decay reaches exp(-1)") {
    const auto f = [](const Eigen::VectorXd& v) -> Eigen::VectorXd { return -v; };
    Eigen::VectorXd y = Eigen::VectorXd::Ones(1);
    for (int k = 0; k < 100; ++k) y = numerics::rk4_step(f, y, 0.01);
    CHECK(std::abs(y(0) - std::exp(-1.0)) < 1e-8);
}

TEST_CASE("rk4 rotation keeps the norm") {
    const auto f = [](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        Eigen::VectorXd d(2);
        d << -v(1), v(0);
        return d;
    };
    Eigen::VectorXd y(2);
    y << 1.0, 0.0;
    const int steps = 1000;
    const double dt = 2.0 * std::numbers::pi / steps;
    for (int k = 0; k < steps; ++k) y = numerics::rk4_step(f, y, dt);
    CHECK(std::abs(y.norm() - 1.0) < 1e-8);
    CHECK(std::abs(y(0) - 1.0) < 1e-8);
}

TEST_CASE("rk4 rejects non-positive steps") {
    const auto f = [](const Eigen::VectorXd& v) -> Eigen::VectorXd { return v; };
    CHECK_THROWS_AS(numerics::rk4_step(f, Eigen::VectorXd::Ones(1).eval(), 0.0), DomainError);
}
