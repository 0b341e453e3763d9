#include "qrdiode/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrdiode::numerics {

double max_abs(const QOperator& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const QOperator& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double scale = max_abs(a);
    if (scale == 0.0) return true;
    return max_abs(a - a.adjoint()) <= tol * scale;
}

QOperator kron(const QOperator& a, const QOperator& b) {
    QOperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

EigenSystem eigh(const QOperator& h) {
    if (h.rows() != h.cols()) throw NonHermitianInput("eigh: matrix is not square");
    if (!is_hermitian(h)) throw NonHermitianInput("eigh: matrix is not Hermitian");

    // Symmetrize so roundoff in the input cannot leak into the solver.
    const QOperator hs = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<QOperator> solver(hs);
    if (solver.info() != Eigen::Success) throw NonHermitianInput("eigh: eigensolver failed");

    EigenSystem es;
    es.energies = solver.eigenvalues();
    es.vectors = solver.eigenvectors();
    es.source_dim = h.rows();

    for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) {
        auto col = es.vectors.col(k);
        for (Eigen::Index r = 0; r < col.size(); ++r) {
            const double mag = std::abs(col(r));
            if (mag > 1e-12) {
                col *= std::conj(col(r)) / mag;
                col(r) = cplx(std::abs(col(r)), 0.0);
                break;
            }
        }
    }
    return es;
}

Eigen::Index numerical_nullity(const Eigen::MatrixXd& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    const double cutoff = tol * s(0);
    Eigen::Index count = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) <= cutoff) ++count;
    return count;
}

Eigen::VectorXd nullspace(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DomainError("nullspace: matrix must be square and non-empty");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cutoff = tol * s(0);
    Eigen::Index nullity = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) <= cutoff) ++nullity;
    if (nullity != 1)
        throw DegenerateSteadyState("nullspace: numerical nullity is " + std::to_string(nullity) +
                                    ", expected 1");

    Eigen::VectorXd v = svd.matrixV().col(m.cols() - 1);
    v /= v.sum();
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (v(k) < -1e-10)
            throw NonPhysical("nullspace: null vector has a negative component " +
                              std::to_string(v(k)));
        if (v(k) < 0.0) v(k) = 0.0;
    }
    return v / v.sum();
}

std::vector<extended> stationary_distribution_ext(const Eigen::MatrixXd& m) {
    const Eigen::Index n = m.rows();
    if (n == 0 || m.cols() != n) throw DomainError("stationary_distribution: bad shape");
    const auto N = static_cast<std::size_t>(n);
    std::vector<extended> rates(N * N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) rates[i * N + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return stationary_distribution_ext(rates, N);
}

std::vector<extended> stationary_distribution_ext(const std::vector<extended>& rates, std::size_t N) {
    if (N == 0 || rates.size() != N * N) throw DomainError("stationary_distribution: bad shape");

    // q[i][j] is the rate i -> j, i.e. the transpose of the column convention.
    std::vector<extended> q(N * N);
    auto at = [&](std::size_t i, std::size_t j) -> extended& { return q[i * N + j]; };
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) at(i, j) = i == j ? extended(0) : rates[j * N + i];

    for (std::size_t k = N - 1; k > 0; --k) {
        extended out = 0;
        for (std::size_t j = 0; j < k; ++j) out += at(k, j);
        if (!(out > 0))
            throw DegenerateSteadyState("stationary_distribution: rate matrix is reducible");
        for (std::size_t i = 0; i < k; ++i) at(i, k) /= out;
        for (std::size_t i = 0; i < k; ++i) {
            const extended qik = at(i, k);
            if (qik == 0) continue;
            for (std::size_t j = 0; j < k; ++j)
                if (i != j) at(i, j) += qik * at(k, j);
        }
    }

    std::vector<extended> p(N);
    p[0] = 1;
    extended total = 1;
    for (std::size_t k = 1; k < N; ++k) {
        extended acc = 0;
        for (std::size_t i = 0; i < k; ++i) acc += p[i] * at(i, k);
        p[k] = acc;
        total += acc;
    }
    for (auto& x : p) x /= total;
    return p;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& m) {
    const auto p = stationary_distribution_ext(m);
    Eigen::VectorXd out(static_cast<Eigen::Index>(p.size()));
    for (std::size_t k = 0; k < p.size(); ++k) out(static_cast<Eigen::Index>(k)) = static_cast<double>(p[k]);
    return out;
}

} // namespace qrdiode::numerics
