#include "qrdiode/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace qrdiode {

void BathSpec::validate() const {
    if (!(temperature > 0.0)) throw InvalidParameter("bath temperature must be positive");
    if (!(gamma > 0.0)) throw InvalidParameter("bath gamma must be positive");
}

QOperator TransitionChannel::op() const {
    const Eigen::Index d = basis ? basis->dim() : 0;
    QOperator m = QOperator::Zero(d, d);
    for (const auto& mem : members) m(mem.i, mem.j) = mem.amplitude;
    return m;
}

namespace dissipation {

double bose_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) throw DomainError("bose_occupation: omega must be positive");
    if (!(temperature >= 0.0)) throw DomainError("bose_occupation: temperature must be non-negative");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double default_degeneracy_tolerance(const EigenSystem& es, double rel) {
    return rel * es.energies.cwiseAbs().maxCoeff();
}

std::vector<TransitionChannel> extract_channels(const std::shared_ptr<const EigenSystem>& es,
                                                const QOperator& s, const BathSpec& bath,
                                                double deg_tol) {
    if (!es) throw BasisMismatch("extract_channels: no eigensystem");
    if (s.rows() != es->dim() || s.cols() != es->dim())
        throw BasisMismatch("extract_channels: operator and eigensystem dimensions differ");

    const QOperator s_energy = es->vectors.adjoint() * s * es->vectors;
    const auto& e = es->energies;

    std::vector<ChannelMember> pairs;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        for (Eigen::Index j = i + 1; j < e.size(); ++j) {
            const double w = e(j) - e(i);
            if (w <= deg_tol) continue;
            const cplx amp = s_energy(i, j);
            if (std::abs(amp) <= kAmplitudeThreshold) continue;
            pairs.push_back({i, j, amp, w});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const ChannelMember& a, const ChannelMember& b) { return a.omega < b.omega; });

    std::vector<TransitionChannel> channels;
    std::size_t start = 0;
    while (start < pairs.size()) {
        std::size_t stop = start + 1;
        while (stop < pairs.size() && pairs[stop].omega - pairs[start].omega <= deg_tol) ++stop;

        TransitionChannel ch;
        ch.bath = bath.label;
        ch.basis = es;
        ch.members.assign(pairs.begin() + static_cast<std::ptrdiff_t>(start),
                          pairs.begin() + static_cast<std::ptrdiff_t>(stop));
        double sum = 0.0;
        for (const auto& m : ch.members) sum += m.omega;
        ch.omega = sum / static_cast<double>(ch.members.size());
        std::sort(ch.members.begin(), ch.members.end(), [](const auto& a, const auto& b) {
            return std::pair(a.i, a.j) < std::pair(b.i, b.j);
        });

        const double nbar = bose_occupation(ch.omega, bath.temperature);
        ch.gamma_plus = bath.gamma * ch.omega * (nbar + 1.0);
        ch.gamma_minus = bath.gamma * ch.omega * nbar;
        for (auto& m : ch.members) {
            const double n = bose_occupation(m.omega, bath.temperature);
            m.gamma_plus = bath.gamma * m.omega * (n + 1.0);
            m.gamma_minus = bath.gamma * m.omega * n;
        }
        channels.push_back(std::move(ch));
        start = stop;
    }
    return channels;
}

bool couples_degenerate_coherences(const std::vector<TransitionChannel>& channels) {
    for (const auto& ch : channels) {
        std::map<Eigen::Index, int> lower, upper;
        for (const auto& m : ch.members) {
            if (++lower[m.i] > 1) return true;
            if (++upper[m.j] > 1) return true;
        }
    }
    return false;
}

RateMatrix build_rate_matrix(const std::vector<TransitionChannel>& channels, Eigen::Index levels) {
    RateMatrix rm;
    rm.entries = Eigen::MatrixXd::Zero(levels, levels);
    const auto n = static_cast<std::size_t>(levels);
    rm.rates_ext.assign(n * n, extended(0));
    for (const auto& ch : channels) {
        if (!rm.basis) rm.basis = ch.basis;
        else if (rm.basis != ch.basis)
            throw BasisMismatch("build_rate_matrix: channels come from different eigensystems");
        for (const auto& m : ch.members) {
            const double w2 = std::norm(m.amplitude);
            rm.entries(m.i, m.j) += m.gamma_plus * w2;   // emission j -> i
            rm.entries(m.j, m.i) += m.gamma_minus * w2;  // absorption i -> j
            const auto i = static_cast<std::size_t>(m.i), j = static_cast<std::size_t>(m.j);
            rm.rates_ext[i * n + j] += extended(m.gamma_plus) * extended(w2);
            rm.rates_ext[j * n + i] += extended(m.gamma_minus) * extended(w2);
        }
    }
    for (std::size_t k = 0; k < n * n; ++k)
        rm.entries(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = static_cast<double>(rm.rates_ext[k]);
    for (Eigen::Index c = 0; c < levels; ++c) {
        double out = 0.0;
        for (Eigen::Index r = 0; r < levels; ++r)
            if (r != c) out += rm.entries(r, c);
        rm.entries(c, c) = -out;
    }
    return rm;
}

// --- Liouvillian -----------------------------------------------------------

Liouvillian::Liouvillian(std::shared_ptr<const EigenSystem> basis, std::vector<TransitionChannel> channels,
                         bool include_hamiltonian, double rate_scale)
    : basis_(std::move(basis)),
      dim_(basis_ ? basis_->dim() : 0),
      include_hamiltonian_(include_hamiltonian),
      rate_scale_(rate_scale) {
    if (!basis_) throw BasisMismatch("Liouvillian: no eigensystem");
    if (!(rate_scale > 0.0)) throw DomainError("Liouvillian: rate_scale must be positive");

    std::vector<Eigen::Triplet<cplx>> decay_l, decay_r;
    auto add_jump = [&](Bath bath, std::vector<Entry> entries) {
        std::erase_if(entries, [](const Entry& e) { return e.rate == 0.0; });
        if (entries.empty()) return;
        auto& decay = bath == Bath::L ? decay_l : decay_r;
        // A^dag A: sum over entries sharing a row
        for (const auto& a : entries)
            for (const auto& b : entries)
                if (a.row == b.row)
                    decay.emplace_back(a.col, b.col,
                                       (a.col == b.col ? a.rate : a.root * b.root) * std::conj(a.value) * b.value);
        jumps_.push_back({bath, entries_.size(), entries_.size() + entries.size()});
        entries_.insert(entries_.end(), entries.begin(), entries.end());
    };

    for (const auto& ch : channels) {
        if (ch.basis != basis_) throw BasisMismatch("Liouvillian: channel basis differs");
        std::vector<Entry> lower, raise;
        for (const auto& m : ch.members) {
            const double up = rate_scale * m.gamma_plus, down = rate_scale * m.gamma_minus;
            lower.push_back({m.i, m.j, m.amplitude, up, std::sqrt(up)});
            raise.push_back({m.j, m.i, std::conj(m.amplitude), down, std::sqrt(down)});
        }
        add_jump(ch.bath, std::move(lower));
        add_jump(ch.bath, std::move(raise));
    }
    decay_L_.resize(dim_, dim_);
    decay_R_.resize(dim_, dim_);
    decay_L_.setFromTriplets(decay_l.begin(), decay_l.end());
    decay_R_.setFromTriplets(decay_r.begin(), decay_r.end());

    kappa_L_ = Eigen::VectorXd::Zero(dim_);
    kappa_R_ = Eigen::VectorXd::Zero(dim_);
    for (const auto& pair : {std::pair{&decay_L_, &kappa_L_}, std::pair{&decay_R_, &kappa_R_}}) {
        const auto& k = *pair.first;
        for (Eigen::Index c = 0; c < k.outerSize(); ++c)
            for (Eigen::SparseMatrix<cplx>::InnerIterator it(k, c); it; ++it) {
                if (it.row() == it.col()) (*pair.second)(c) += it.value().real();
                else if (std::abs(it.value()) > 0.0) diagonal_decay_ = false;
            }
    }
    if (diagonal_decay_) {
        const Eigen::VectorXd kappa = kappa_L_ + kappa_R_;
        const auto& e = basis_->energies;
        diagonal_generator_.resize(dim_, dim_);
        for (Eigen::Index j = 0; j < dim_; ++j)
            for (Eigen::Index i = 0; i < dim_; ++i)
                diagonal_generator_(i, j) = cplx(-0.5 * (kappa(i) + kappa(j)),
                                                 include_hamiltonian_ ? -(e(i) - e(j)) : 0.0);
    }
}

void Liouvillian::add_decay(const QOperator& rho, const Eigen::SparseMatrix<cplx>& k, QOperator& out) const {
    out.noalias() -= 0.5 * (k * rho);
    out.noalias() -= 0.5 * (rho * k);
}

QOperator Liouvillian::apply_dissipator(const QOperator& rho, std::optional<Bath> bath) const {
    QOperator out = QOperator::Zero(dim_, dim_);
    for (const auto& jump : jumps_) {
        if (bath && jump.bath != *bath) continue;
        for (std::size_t x = jump.begin; x < jump.end; ++x) {
            const auto& a = entries_[x];
            out(a.row, a.row) += a.rate * std::norm(a.value) * rho(a.col, a.col);
            for (std::size_t y = jump.begin; y < jump.end; ++y) {
                if (y == x) continue;
                const auto& b = entries_[y];
                out(a.row, b.row) += a.root * b.root * a.value * std::conj(b.value) * rho(a.col, b.col);
            }
        }
    }
    const bool use_l = !bath || *bath == Bath::L;
    const bool use_r = !bath || *bath == Bath::R;
    if (diagonal_decay_) {
        Eigen::VectorXd kappa = Eigen::VectorXd::Zero(dim_);
        if (use_l) kappa += kappa_L_;
        if (use_r) kappa += kappa_R_;
        for (Eigen::Index j = 0; j < dim_; ++j)
            for (Eigen::Index i = 0; i < dim_; ++i) out(i, j) -= 0.5 * (kappa(i) + kappa(j)) * rho(i, j);
    } else {
        if (use_l) add_decay(rho, decay_L_, out);
        if (use_r) add_decay(rho, decay_R_, out);
    }
    return out;
}

QOperator Liouvillian::apply(const QOperator& rho) const {
    if (!diagonal_decay_) {
        QOperator out = apply_dissipator(rho, std::nullopt);
        if (include_hamiltonian_) {
            const auto& e = basis_->energies;
            for (Eigen::Index j = 0; j < dim_; ++j)
                for (Eigen::Index i = 0; i < dim_; ++i) out(i, j) += cplx(0.0, -(e(i) - e(j))) * rho(i, j);
        }
        return out;
    }
    QOperator out = diagonal_generator_.cwiseProduct(rho);
    for (const auto& jump : jumps_) {
        for (std::size_t x = jump.begin; x < jump.end; ++x) {
            const auto& a = entries_[x];
            out(a.row, a.row) += a.rate * std::norm(a.value) * rho(a.col, a.col);
            for (std::size_t y = jump.begin; y < jump.end; ++y) {
                if (y == x) continue;
                const auto& b = entries_[y];
                out(a.row, b.row) += a.root * b.root * a.value * std::conj(b.value) * rho(a.col, b.col);
            }
        }
    }
    return out;
}

std::vector<extended> Liouvillian::diagonal_dissipator(const std::vector<extended>& p, Bath bath) const {
    if (static_cast<Eigen::Index>(p.size()) != dim_)
        throw BasisMismatch("diagonal_dissipator: population vector dimension differs");
    // For diagonal rho only x == y survives in the jump term; the anticommutator
    // contributes (A^dag A)_kk p_k.
    std::vector<extended> out(p.size(), extended(0));
    for (const auto& jump : jumps_) {
        if (jump.bath != bath) continue;
        for (std::size_t x = jump.begin; x < jump.end; ++x) {
            const auto& a = entries_[x];
            const extended w = extended(a.rate) * extended(std::norm(a.value));
            const auto col = static_cast<std::size_t>(a.col);
            out[static_cast<std::size_t>(a.row)] += w * p[col];
            out[col] -= w * p[col];
        }
    }
    return out;
}

Eigen::MatrixXcd Liouvillian::dense() const {
    using numerics::kron;
    const Eigen::Index d = dim_;
    const QOperator id = QOperator::Identity(d, d);
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(d * d, d * d);
    if (include_hamiltonian_) {
        const QOperator h = basis_->energies.cast<cplx>().asDiagonal();
        l += cplx(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
    }
    for (const auto& jump : jumps_) {
        QOperator a = QOperator::Zero(d, d);
        for (std::size_t x = jump.begin; x < jump.end; ++x)
            a(entries_[x].row, entries_[x].col) += entries_[x].root * entries_[x].value;
        const QOperator ada = a.adjoint() * a;
        l += kron(a.conjugate(), a) - 0.5 * kron(id, ada) - 0.5 * kron(ada.transpose(), id);
    }
    return l;
}

double Liouvillian::norm_bound() const {
    const auto& e = basis_->energies;
    const double spread = include_hamiltonian_ && dim_ > 0 ? e(dim_ - 1) - e(0) : 0.0;
    const double max_decay = dim_ > 0 ? (kappa_L_ + kappa_R_).maxCoeff() : 0.0;
    return spread + 2.0 * max_decay;
}

Liouvillian build_liouvillian(const std::shared_ptr<const EigenSystem>& es,
                              const std::vector<TransitionChannel>& channels, bool include_hamiltonian) {
    return Liouvillian(es, channels, include_hamiltonian);
}

}  // namespace dissipation
}  // namespace qrdiode
