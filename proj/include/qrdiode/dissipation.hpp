// dissipation.hpp: Bohr-frequency channels, Ohmic thermal rates, rate matrix and Liouvillian
//
// Everything here lives in the energy eigenbasis of the system Hamiltonian.
// A channel of bath nu at Bohr frequency w collects the lowering components
//   S_w = sum_{E_j - E_i = w} |E_i><E_i|S_nu|E_j><E_j|
// with emission rate gamma * w * (nbar(w) + 1) and absorption rate gamma * w * nbar(w).
// Members of one channel may differ by up to deg_tol; each member carries the
// rates of its own frequency so detailed balance holds pair by pair, and the
// grouping only decides which coherences the secular terms couple.

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "qrdiode/models.hpp"
#include "qrdiode/numerics.hpp"

namespace qrdiode {

struct BathSpec {
    Bath label{Bath::L};
    double temperature{0.5};
    double gamma{1e-4};

    void validate() const;
};

struct ChannelMember {
    Eigen::Index i{0};  // lower level
    Eigen::Index j{0};  // upper level
    cplx amplitude;     // <E_i|S|E_j>
    double omega{0.0};  // E_j - E_i for this pair
    double gamma_plus{0.0};   // emission at omega
    double gamma_minus{0.0};  // absorption at omega
};

struct TransitionChannel {
    Bath bath{Bath::L};
    double omega{0.0};
    double gamma_plus{0.0};   // emission at the mean frequency
    double gamma_minus{0.0};  // absorption at the mean frequency
    std::vector<ChannelMember> members;
    std::shared_ptr<const EigenSystem> basis;

    // Dense lowering operator in the energy basis.
    QOperator op() const;
};

struct RateMatrix {
    Eigen::MatrixXd entries;  // M(i, j): rate j -> i off the diagonal
    // Off-diagonal rates accumulated in extended precision, row-major (i * dim + j).
    std::vector<extended> rates_ext;
    std::shared_ptr<const EigenSystem> basis;

    Eigen::Index dim() const { return entries.rows(); }
};

namespace dissipation {

inline constexpr double kAmplitudeThreshold = 1e-12;
inline constexpr double kRelativeDegeneracyTol = 1e-8;

// 1 / (exp(omega / T) - 1); zero for T == 0. DomainError for omega <= 0 or T < 0.
double bose_occupation(double omega, double temperature);

// deg_tol = rel * max|E|
double default_degeneracy_tolerance(const EigenSystem& es, double rel = kRelativeDegeneracyTol);

// Expresses S (original basis) in the energy basis, keeps pairs i < j with
// |<E_i|S|E_j>| > 1e-12 and E_j - E_i > deg_tol, and groups them into channels
// whose frequencies agree within deg_tol. Channels are ordered by frequency,
// members by (i, j).
std::vector<TransitionChannel> extract_channels(const std::shared_ptr<const EigenSystem>& es,
                                                const QOperator& s, const BathSpec& bath,
                                                double deg_tol);

// True if some channel has two members with the same lower or the same upper
// level. Such channels feed coherences between degenerate levels back into the
// populations, which the diagonal steady state cannot represent. A ladder whose
// members only chain (i, j), (j, k) is not affected.
bool couples_degenerate_coherences(const std::vector<TransitionChannel>& channels);

RateMatrix build_rate_matrix(const std::vector<TransitionChannel>& channels, Eigen::Index levels);

// Secular Lindblad generator in the energy basis:
//   L[rho] = -i[H, rho] + sum_k { D[S+_k](rho) + D[S-_k](rho) }
//   S+_k = sum_m sqrt(G+_m) s_m |i_m><j_m|,  S-_k = sum_m sqrt(G-_m) conj(s_m) |j_m><i_m|
//   D[A](rho) = A rho A^dag - 1/2 {A^dag A, rho}
// Vectorization is column stacking: vec(rho)[i + d * j] = rho(i, j).
class Liouvillian {
public:
    Liouvillian(std::shared_ptr<const EigenSystem> basis, std::vector<TransitionChannel> channels,
                bool include_hamiltonian, double rate_scale = 1.0);

    Eigen::Index dim() const { return dim_; }
    const std::shared_ptr<const EigenSystem>& basis() const { return basis_; }
    bool includes_hamiltonian() const { return include_hamiltonian_; }
    double rate_scale() const { return rate_scale_; }

    QOperator apply(const QOperator& rho) const;
    // Dissipator of one bath only (no Hamiltonian part).
    QOperator apply_dissipator(const QOperator& rho, std::optional<Bath> bath) const;

    // Diagonal of L_nu[diag(p)] in extended precision; the populations-only
    // path of the trace-form current.
    std::vector<extended> diagonal_dissipator(const std::vector<extended>& p, Bath bath) const;

    // dim^2 x dim^2 superoperator assembled from Kronecker products.
    Eigen::MatrixXcd dense() const;

    // Gershgorin-type bound on the spectral radius: (E_max - E_min) + 2 max total decay rate.
    double norm_bound() const;

private:
    struct Entry {
        Eigen::Index row, col;
        cplx value;
        double rate;  // scaled member rate
        double root;  // sqrt(rate), for products of two members
    };
    struct Jump {
        Bath bath;
        std::size_t begin, end;  // range in entries_
    };

    void add_decay(const QOperator& rho, const Eigen::SparseMatrix<cplx>& k, QOperator& out) const;

    std::shared_ptr<const EigenSystem> basis_;
    Eigen::Index dim_;
    bool include_hamiltonian_;
    double rate_scale_;
    std::vector<Entry> entries_;
    std::vector<Jump> jumps_;
    // rate-weighted sum of A^dag A per bath; stored as a diagonal when it is one
    Eigen::SparseMatrix<cplx> decay_L_, decay_R_;
    bool diagonal_decay_{true};
    Eigen::VectorXd kappa_L_, kappa_R_;
    // -i(E_i - E_j) - (kappa_i + kappa_j) / 2, used by apply() when decay is diagonal
    Eigen::MatrixXcd diagonal_generator_;
};

Liouvillian build_liouvillian(const std::shared_ptr<const EigenSystem>& es,
                              const std::vector<TransitionChannel>& channels,
                              bool include_hamiltonian);

}  // namespace dissipation
}  // namespace qrdiode
