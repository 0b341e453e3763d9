#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "oracles.hpp"
#include "qrdiode/steady.hpp"

using namespace qrdiode;

namespace {

std::shared_ptr<const EigenSystem> two_level(double omega) {
    QOperator h = QOperator::Zero(2, 2);
    h(0, 0) = -0.5 * omega;
    h(1, 1) = 0.5 * omega;
    return std::make_shared<const EigenSystem>(numerics::eigh(h));
}

SteadySolution small_rabi(double g, double omega_R, double theta, int n, double t_l, double t_r, double gamma = 1e-4) {
    RabiParams p;
    p.g = g;
    p.omega_R = omega_R;
    p.theta = theta;
    p.n_fock = n;
    return steady::solve_model(models::build_two_photon_rabi(p), {Bath::L, t_l, gamma}, {Bath::R, t_r, gamma});
}

}  // namespace

TEST_CASE("Bose occupation values") {
    CHECK(dissipation::bose_occupation(1.0, 0.5) == doctest::Approx(0.156518).epsilon(1e-6));
    CHECK(dissipation::bose_occupation(0.2, 1.0) == doctest::Approx(4.516655566126994).epsilon(1e-12));
    CHECK(dissipation::bose_occupation(1.0, 0.0) == 0.0);
    for (double w : {0.01, 0.3, 2.0, 7.0})
        for (double t : {0.05, 0.5, 3.0})
            CHECK(oracle::rel(dissipation::bose_occupation(w, t), oracle::bose_series(w, t)) < 1e-12);
    CHECK_THROWS_AS(dissipation::bose_occupation(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(dissipation::bose_occupation(1.0, -0.1), DomainError);
}

TEST_CASE("two-level channel") {
    const auto es = two_level(1.0);
    QOperator sx(2, 2);
    sx << 0, 1, 1, 0;
    const auto chans = dissipation::extract_channels(es, sx, {Bath::L, 0.5, 1e-3}, 1e-12);
    REQUIRE(chans.size() == 1);
    const auto& ch = chans[0];
    CHECK(ch.omega == doctest::Approx(1.0));
    REQUIRE(ch.members.size() == 1);
    CHECK(ch.members[0].i == 0);
    CHECK(ch.members[0].j == 1);
    CHECK(std::abs(ch.members[0].amplitude) == doctest::Approx(1.0));
    const double nbar = oracle::bose_series(1.0, 0.5);
    CHECK(ch.gamma_plus == doctest::Approx(1e-3 * (nbar + 1.0)).epsilon(1e-13));
    CHECK(ch.gamma_minus == doctest::Approx(1e-3 * nbar).epsilon(1e-13));
}

TEST_CASE("diagonal coupling has no channels") {
    const auto es = two_level(1.0);
    QOperator sz(2, 2);
    sz << 1, 0, 0, -1;
    CHECK(dissipation::extract_channels(es, sz, {Bath::R, 0.5, 1e-3}, 1e-12).empty());
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(dissipation::extract_channels(two_level(1.0), QOperator::Zero(3, 3), {Bath::L, 0.5, 1e-3}, 1e-12),
                    BasisMismatch);
}

TEST_CASE("equally spaced ladder forms one channel") {
    const int n = 5;
    const QOperator a = models::annihilation(n);
    const QOperator h = a.adjoint() * a;
    const auto es = std::make_shared<const EigenSystem>(numerics::eigh(h));
    const auto chans = dissipation::extract_channels(es, QOperator(a + a.adjoint()), {Bath::L, 0.4, 1e-4},
                                                     dissipation::default_degeneracy_tolerance(*es));
    REQUIRE(chans.size() == 1);
    CHECK(chans[0].members.size() == static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < chans[0].members.size(); ++k) {
        CHECK(chans[0].members[k].i == static_cast<Eigen::Index>(k));
        CHECK(chans[0].members[k].j == static_cast<Eigen::Index>(k + 1));
        CHECK(std::norm(chans[0].members[k].amplitude) == doctest::Approx(k + 1.0).epsilon(1e-12));
    }
    // members only chain, so no degenerate pair is coupled
    CHECK_FALSE(dissipation::couples_degenerate_coherences(chans));
}

TEST_CASE("a degenerate doublet above the ground state couples coherences") {
    QOperator h = QOperator::Zero(3, 3);
    h(1, 1) = h(2, 2) = 1.0;
    QOperator s = QOperator::Zero(3, 3);
    s(0, 1) = s(1, 0) = 1.0;
    s(0, 2) = s(2, 0) = 0.5;
    const auto es = std::make_shared<const EigenSystem>(numerics::eigh(h));
    const auto chans = dissipation::extract_channels(es, s, {Bath::L, 0.4, 1e-4},
                                                     dissipation::default_degeneracy_tolerance(*es));
    REQUIRE(chans.size() == 1);
    CHECK(chans[0].members.size() == 2);
    CHECK(dissipation::couples_degenerate_coherences(chans));
}

TEST_CASE("detailed balance of every channel") {
    for (double t : {0.05, 0.3, 1.0}) {
        const auto sol = small_rabi(0.015, 2.0, 0.3, 6, t, 2 * t);
        for (const auto& ch : sol.channels) {
            const double temp = ch.bath == Bath::L ? t : 2 * t;
            CHECK(oracle::rel(ch.gamma_plus / ch.gamma_minus, std::exp(ch.omega / temp)) < 1e-12);
        }
    }
}

TEST_CASE("members of one channel keep the rates of their own frequency") {
    // Bohr frequencies 1 and 1 + 5e-9 fall into one channel at deg_tol = 1e-8.
    const double delta = 5e-9, t = 0.3;
    QOperator h = QOperator::Zero(4, 4);
    h(1, 1) = 1.0;
    h(2, 2) = 5.0;
    h(3, 3) = 6.0 + delta;
    QOperator s = QOperator::Zero(4, 4);
    for (int k = 0; k < 3; ++k) s(k, k + 1) = s(k + 1, k) = 1.0;
    const auto es = std::make_shared<const EigenSystem>(numerics::eigh(h));
    const auto chans = dissipation::extract_channels(es, s, {Bath::L, t, 1e-3}, 1e-8);
    REQUIRE(chans.size() == 2);
    REQUIRE(chans[0].members.size() == 2);
    for (const auto& m : chans[0].members) {
        CHECK(oracle::rel(m.gamma_plus / m.gamma_minus, std::exp(m.omega / t)) < 1e-12);
        CHECK(m.gamma_plus == doctest::Approx(1e-3 * m.omega * (oracle::bose_series(m.omega, t) + 1.0)).epsilon(1e-12));
    }
    // a single bath then relaxes to the Gibbs state without an O(delta / T) error
    const auto ss = steady::solve_steady(dissipation::build_rate_matrix(chans, 4));
    const Eigen::VectorXd ref = oracle::gibbs(es->energies, t);
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(oracle::rel(ss.populations(k), ref(k)) < 1e-12);
}

TEST_CASE("rate matrix shape") {
    const auto sol = small_rabi(0.1, 0.3, 0.2, 4, 0.2, 0.6);
    const auto& m = sol.rates.entries;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        CHECK(std::abs(m.col(c).sum()) < 1e-15 * m.cwiseAbs().maxCoeff() * m.rows());
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (r != c) CHECK(m(r, c) >= 0.0);
    }
    // two-level single bath
    const auto es = two_level(1.0);
    QOperator sx(2, 2);
    sx << 0, 1, 1, 0;
    const auto chans = dissipation::extract_channels(es, sx, {Bath::L, 0.5, 1.0}, 1e-12);
    const auto rm = dissipation::build_rate_matrix(chans, 2);
    CHECK(rm.entries(0, 1) == doctest::Approx(chans[0].gamma_plus));
    CHECK(rm.entries(1, 0) == doctest::Approx(chans[0].gamma_minus));
}

TEST_CASE("rate matrix refuses mixed bases") {
    auto a = small_rabi(0.1, 0.3, 0.0, 3, 0.2, 0.6);
    auto b = small_rabi(0.1, 0.3, 0.0, 3, 0.2, 0.6);
    auto chans = a.channels;
    chans.push_back(b.channels.front());
    CHECK_THROWS_AS(dissipation::build_rate_matrix(chans, a.basis->dim()), BasisMismatch);
}

TEST_CASE("Liouvillian action matches dense products and the superoperator") {
    std::mt19937 rng(5);
    for (double theta : {0.0, 0.6}) {
        const auto sol = small_rabi(0.2, 0.7, theta, 3, 0.3, 0.9, 0.05);
        const dissipation::Liouvillian l(sol.basis, sol.channels, true);
        const Eigen::Index d = l.dim();
        const QOperator rho = oracle::random_density(d, rng);

        const QOperator direct = oracle::generator(sol, rho, true);
        CHECK(numerics::max_abs(l.apply(rho) - direct) < 1e-14);
        for (Bath b : {Bath::L, Bath::R})
            CHECK(numerics::max_abs(l.apply_dissipator(rho, b) - oracle::generator(sol, rho, false, b)) < 1e-14);

        const Eigen::MatrixXcd sup = l.dense();
        const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
        const Eigen::VectorXcd lv = sup * v;
        CHECK(numerics::max_abs(Eigen::Map<const QOperator>(lv.data(), d, d) - direct) < 1e-14);

        // trace preservation: every column of the superoperator has zero trace part
        for (Eigen::Index c = 0; c < d * d; ++c) {
            cplx tr = 0.0;
            for (Eigen::Index k = 0; k < d; ++k) tr += sup(k + d * k, c);
            CHECK(std::abs(tr) < 1e-15);
        }

        // spectral radius bound
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(sup, false);
        CHECK(ces.eigenvalues().cwiseAbs().maxCoeff() <= l.norm_bound() * (1 + 1e-12));
    }
}

TEST_CASE("Liouvillian restricted to populations is the rate matrix") {
    const auto sol = small_rabi(0.015, 2.0, 0.3, 4, 0.1, 0.5);
    const dissipation::Liouvillian l(sol.basis, sol.channels, true);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd p(l.dim());
    for (Eigen::Index k = 0; k < p.size(); ++k) p(k) = u(rng);
    p /= p.sum();
    const QOperator out = l.apply(p.cast<cplx>().asDiagonal());
    const Eigen::VectorXd mp = sol.rates.entries * p;
    CHECK((out.diagonal().real() - mp).cwiseAbs().maxCoeff() < 1e-18);
    CHECK(numerics::max_abs(QOperator(out - QOperator(out.diagonal().asDiagonal()))) < 1e-18);

    std::vector<extended> pe(static_cast<std::size_t>(p.size()));
    for (std::size_t k = 0; k < pe.size(); ++k) pe[k] = p(static_cast<Eigen::Index>(k));
    for (Bath b : {Bath::L, Bath::R}) {
        const auto de = l.diagonal_dissipator(pe, b);
        const QOperator dd = l.apply_dissipator(p.cast<cplx>().asDiagonal(), b);
        for (std::size_t k = 0; k < de.size(); ++k)
            CHECK(std::abs(static_cast<double>(de[k]) - dd(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real()) < 1e-18);
    }
}

TEST_CASE("rate scale multiplies the dissipator") {
    const auto sol = small_rabi(0.1, 0.5, 0.2, 3, 0.2, 0.6);
    const dissipation::Liouvillian a(sol.basis, sol.channels, false, 1.0), b(sol.basis, sol.channels, false, 1e4);
    std::mt19937 rng(9);
    const QOperator rho = oracle::random_density(a.dim(), rng);
    CHECK(numerics::max_abs(b.apply(rho) - 1e4 * a.apply(rho)) < 1e-12 * numerics::max_abs(b.apply(rho)));
    CHECK_THROWS_AS(dissipation::Liouvillian(sol.basis, sol.channels, false, 0.0), DomainError);
}
