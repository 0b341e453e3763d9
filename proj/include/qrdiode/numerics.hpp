// numerics.hpp: dense complex linear algebra shared by every module

#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qrdiode/errors.hpp"

namespace qrdiode {

using cplx = std::complex<double>;

// Square complex matrix in natural units (hbar = k_B = 1, energies in omega_0).
// Hamiltonians, jump operators and density matrices all use this type; the
// matrix side length is its dimension.
using QOperator = Eigen::MatrixXcd;

// Working precision of the population solve and the current sums. Net currents
// near equilibrium (or at strong coupling) are many orders of magnitude below
// the gross transition fluxes they are differences of.
#if defined(__SIZEOF_FLOAT128__)
using extended = __float128;
inline constexpr int kExtendedDigits = 33;
#else
using extended = long double;
inline constexpr int kExtendedDigits = std::numeric_limits<long double>::digits10;
#endif

struct EigenSystem {
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXcd vectors;  // orthonormal columns, vectors.col(k) <-> energies[k]
    Eigen::Index source_dim{0};

    Eigen::Index dim() const { return energies.size(); }
};

namespace numerics {

inline constexpr double kHermitianTol = 1e-12;

double max_abs(const QOperator& a);

// max|A - A^dagger| <= tol * max|A|
bool is_hermitian(const QOperator& a, double tol = kHermitianTol);

// (A (x) B)[i*dimB + k, j*dimB + l] = A[i,j] * B[k,l]
QOperator kron(const QOperator& a, const QOperator& b);

// Hermitian eigendecomposition with ascending energies. Each eigenvector's
// first component with modulus above 1e-12 is rotated to be real-positive.
// Throws NonHermitianInput.
EigenSystem eigh(const QOperator& h);

// Null vector of a rate-matrix-shaped real matrix from its singular values.
// Nullity is the number of singular values <= tol * sigma_max and must be 1,
// otherwise DegenerateSteadyState. The result is normalized to unit sum;
// components in [-1e-10, 0) are clamped to zero, anything more negative
// raises NonPhysical.
Eigen::VectorXd nullspace(const Eigen::MatrixXd& m, double tol = 1e-10);

// Number of singular values of m at or below tol * sigma_max.
Eigen::Index numerical_nullity(const Eigen::MatrixXd& m, double tol);

// Stationary vector of a generator M (off-diagonals >= 0, columns summing to
// zero) by Grassmann-Taksar-Heyman elimination. Subtraction free, so small
// components keep full relative accuracy. Diagonal entries of M are ignored.
// Throws DegenerateSteadyState if the chain is reducible.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& m);
std::vector<extended> stationary_distribution_ext(const Eigen::MatrixXd& m);
// Same on extended-precision off-diagonal rates, row-major, rates[i * n + j] = rate j -> i.
std::vector<extended> stationary_distribution_ext(const std::vector<extended>& rates, std::size_t n);

// Classical fixed-step fourth-order Runge-Kutta update.
template <class State, class Derivative>
State rk4_step(const Derivative& f, const State& y, double dt) {
    if (!(dt > 0.0)) throw DomainError("rk4_step: dt must be positive");
    const State k1 = f(y);
    const State k2 = f(State(y + (0.5 * dt) * k1));
    const State k3 = f(State(y + (0.5 * dt) * k2));
    const State k4 = f(State(y + dt * k3));
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace numerics
} // namespace qrdiode
