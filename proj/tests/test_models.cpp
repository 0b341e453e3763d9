#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qrdiode/models.hpp"

using namespace qrdiode;
using numerics::kron;

namespace {

RabiParams rabi(double g, double omega_R, double theta, int n) {
    RabiParams p;
    p.g = g;
    p.omega_R = omega_R;
    p.theta = theta;
    p.n_fock = n;
    return p;
}

double commutator_norm(const QOperator& a, const QOperator& b) { return numerics::max_abs(a * b - b * a); }

QOperator photon_parity(int n_fock) {
    QOperator p = QOperator::Zero(n_fock + 1, n_fock + 1);
    for (int n = 0; n <= n_fock; ++n) p(n, n) = n % 2 ? -1.0 : 1.0;
    return p;
}

}  // namespace

TEST_CASE("decoupled Rabi spectrum") {
    const auto spec = models::build_two_photon_rabi(rabi(0.0, 0.1, 0.0, 6));
    const auto es = numerics::eigh(spec.hamiltonian);
    std::vector<double> expected;
    for (int n = 0; n <= 6; ++n)
        for (double s : {-1.0, 1.0}) expected.push_back(n * 1.0 + s * 0.05);
    std::sort(expected.begin(), expected.end());
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(es.energies(static_cast<Eigen::Index>(k)) == doctest::Approx(expected[k]).epsilon(1e-12));
    CHECK(spec.dim == 14);
}

TEST_CASE("qubit-flip matrix element of the quadrature coupling") {
    // <e,n|H|g,n> = g (2n + 1) cos(theta); sigma_z = +1 is the lower qubit level.
    const int n_fock = 5;
    for (double theta : {0.0, 0.3}) {
        const auto spec = models::build_two_photon_rabi(rabi(0.04, 0.1, theta, n_fock));
        for (int n = 0; n <= n_fock; ++n) {
            const cplx v = spec.hamiltonian((n_fock + 1) + n, n);
            CHECK(v.real() == doctest::Approx(0.04 * (2 * n + 1) * std::cos(theta)).epsilon(1e-13));
        }
        // two-photon exchange element <e,n+2|H|g,n> = g sqrt((n+1)(n+2)) cos(theta)
        const cplx w = spec.hamiltonian((n_fock + 1) + 2, 0);
        CHECK(w.real() == doctest::Approx(0.04 * std::sqrt(2.0) * std::cos(theta)).epsilon(1e-13));
    }
}

TEST_CASE("quadrature square matches (a + a^dag)^2 away from the edge") {
    const int n = 8;
    const QOperator a = models::annihilation(n);
    const QOperator x = a + a.adjoint();
    const QOperator x2 = x * x, q = models::quadrature_squared(n);
    // products of truncated operators differ only in the last diagonal entry
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            if (!(i == n && j == n)) CHECK(std::abs(q(i, j) - x2(i, j)) < 1e-13);
    CHECK(q(n, n).real() == doctest::Approx(2.0 * n + 1.0));
}

TEST_CASE("built operators are Hermitian") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto spec = models::build_two_photon_rabi(
            rabi(0.45 * u(rng), 0.05 + 5 * u(rng), 0.5 * std::numbers::pi * u(rng), 2 + trial % 7));
        CHECK(numerics::is_hermitian(spec.hamiltonian));
        CHECK(numerics::is_hermitian(spec.jump(Bath::L)));
        CHECK(numerics::is_hermitian(spec.jump(Bath::R)));
    }
    for (auto kind : {CouplingKind::IsingZZ, CouplingKind::AsymmetricZX, CouplingKind::DM}) {
        const auto spec = models::build_comparison_model({1.0, 0.7, 0.2, kind});
        CHECK(numerics::is_hermitian(spec.hamiltonian));
        CHECK(spec.dim == 4);
    }
}

TEST_CASE("photon parity is conserved") {
    const int n = 10;
    for (double theta : {0.0, 0.4}) {
        const auto spec = models::build_two_photon_rabi(rabi(0.2, 0.3, theta, n));
        const QOperator pi_photon = kron(models::identity(2), photon_parity(n));
        CHECK(commutator_norm(spec.hamiltonian, pi_photon) <= 1e-12);
    }
    // The qubit-dressed parity sigma_z (-1)^n is broken by the sigma_x part of the coupling.
    const auto spec = models::build_two_photon_rabi(rabi(0.2, 0.3, 0.0, n));
    const QOperator dressed = kron(models::sigma_z(), photon_parity(n));
    CHECK(commutator_norm(spec.hamiltonian, dressed) > 0.1);
}

TEST_CASE("qubit bath at theta = pi/2 commutes with the qubit") {
    const auto spec = models::build_two_photon_rabi(rabi(0.0, 0.1, 0.5 * std::numbers::pi, 4));
    CHECK(commutator_norm(spec.hamiltonian, spec.jump(Bath::R)) < 1e-12);
}

TEST_CASE("neighbouring truncations agree on the low spectrum") {
    const int n = 20;
    const auto a = numerics::eigh(models::build_two_photon_rabi(rabi(0.015, 0.1, 0.0, n)).hamiltonian);
    const auto b = numerics::eigh(models::build_two_photon_rabi(rabi(0.015, 0.1, 0.0, n + 1)).hamiltonian);
    for (Eigen::Index k = 0; k < 10; ++k) CHECK(std::abs(a.energies(k) - b.energies(k)) < 1e-9);
}

TEST_CASE("Rabi parameter validation") {
    CHECK_THROWS_AS(models::build_two_photon_rabi(rabi(0.5, 0.1, 0.0, 20)), SpectralCollapse);
    CHECK_THROWS_AS(models::build_two_photon_rabi(rabi(0.6, 0.1, 0.0, 20)), SpectralCollapse);
    CHECK_THROWS_AS(models::build_two_photon_rabi(rabi(0.015, 0.1, 0.0, 1)), TruncationTooSmall);
    CHECK_THROWS_AS(models::build_two_photon_rabi(rabi(0.015, 0.1, 2.0, 20)), InvalidParameter);
    CHECK_THROWS_AS(models::build_two_photon_rabi(rabi(-0.1, 0.1, 0.0, 20)), InvalidParameter);
    CHECK_THROWS_AS(models::build_two_photon_rabi(rabi(0.1, 0.0, 0.0, 20)), InvalidParameter);
    CHECK_NOTHROW(models::build_two_photon_rabi(rabi(0.45, 2.0, 0.0, 2)));
    CHECK(rabi(0.45, 2.0, 0.0, 2).truncation_dependent());
    CHECK_FALSE(rabi(0.15, 2.0, 0.0, 2).truncation_dependent());
    CHECK(models::default_n_fock(0.015) == 20);
    CHECK(models::default_n_fock(0.45) == 40);
}

TEST_CASE("flux-qubit constructor") {
    const auto p = RabiParams::from_flux_qubit(1.0, 0.06, 0.08, 0.015, 20);
    CHECK(p.omega_R == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p.theta == doctest::Approx(std::atan2(0.06, 0.08)).epsilon(1e-14));
}

TEST_CASE("Ising spectrum at zero coupling") {
    const auto es = numerics::eigh(models::build_comparison_model({1.0, 0.4, 0.0, CouplingKind::IsingZZ}).hamiltonian);
    const double expected[] = {-0.7, -0.3, 0.3, 0.7};
    for (int k = 0; k < 4; ++k) CHECK(es.energies(k) == doctest::Approx(expected[k]).epsilon(1e-14));
}

TEST_CASE("DM spectrum by hand") {
    // single-excitation block {{0, 2ig}, {-2ig, 0}} -> +-2g; doubly (de)excited states at +-1
    const auto es = numerics::eigh(models::build_comparison_model({1.0, 1.0, 0.1, CouplingKind::DM}).hamiltonian);
    const double expected[] = {-1.0, -0.2, 0.2, 1.0};
    for (int k = 0; k < 4; ++k) CHECK(es.energies(k) == doctest::Approx(expected[k]).epsilon(1e-13));
}

TEST_CASE("ZX coupling conserves the left qubit") {
    const auto spec = models::build_comparison_model({1.0, 0.6, 0.3, CouplingKind::AsymmetricZX});
    CHECK(commutator_norm(spec.hamiltonian, kron(models::sigma_z(), models::identity(2))) == 0.0);
}

TEST_CASE("coupling kind names") {
    for (auto k : {CouplingKind::IsingZZ, CouplingKind::AsymmetricZX, CouplingKind::DM})
        CHECK(parse_coupling_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_coupling_kind("xy"), ConfigError);
}

TEST_CASE("unit conversion") {
    CHECK(units::to_si(1.0, "frequency") == doctest::Approx(2.0 * std::numbers::pi * 20e9).epsilon(1e-15));
    CHECK(units::to_si(1.0, "temperature") == doctest::Approx(0.9597).epsilon(1e-4));
    CHECK(units::to_si(0.0, "temperature") == 0.0);
    const double w0 = 2.0 * std::numbers::pi * 20e9;
    CHECK(units::to_si(1.0, "power") == doctest::Approx(1.054571817e-34 * w0 * w0).epsilon(1e-14));
    CHECK_THROWS_AS(units::to_si(1.0, "length"), UnknownUnitKind);
}
