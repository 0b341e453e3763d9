#include "qrdiode/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrdiode::observables {

namespace {

void require_basis(const SteadyState& ss, const std::vector<TransitionChannel>& channels, const char* what) {
    for (const auto& ch : channels)
        if (ch.basis != ss.basis) throw BasisMismatch(std::string(what) + ": channel and steady state bases differ");
}

HeatCurrents finish(double q_l, double q_r) {
    return {q_l, q_r, std::abs(q_l + q_r)};
}

std::vector<extended> extended_populations(const SteadyState& ss) {
    if (!ss.populations_ext.empty()) return ss.populations_ext;
    std::vector<extended> p(static_cast<std::size_t>(ss.populations.size()));
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = ss.populations(static_cast<Eigen::Index>(k));
    return p;
}

// E_j - E_i formed in extended precision, so the level energies telescope exactly.
extended member_omega(const SteadyState& ss, const ChannelMember& m) {
    const auto& e = ss.basis->energies;
    return extended(e(m.j)) - extended(e(m.i));
}

extended member_net_rate(const ChannelMember& m, const std::vector<extended>& p) {
    return (extended(m.gamma_plus) * p[static_cast<std::size_t>(m.j)] -
            extended(m.gamma_minus) * p[static_cast<std::size_t>(m.i)]) *
           extended(std::norm(m.amplitude));
}

}  // namespace

HeatCurrents heat_current_rate_form(const SteadyState& ss, const std::vector<TransitionChannel>& channels) {
    require_basis(ss, channels, "heat_current_rate_form");
    const auto p = extended_populations(ss);
    extended q[2] = {0, 0};
    for (const auto& ch : channels)
        for (const auto& m : ch.members) q[ch.bath == Bath::L ? 0 : 1] -= member_net_rate(m, p) * member_omega(ss, m);
    return {static_cast<double>(q[0]), static_cast<double>(q[1]), std::abs(static_cast<double>(q[0] + q[1]))};
}

HeatCurrents heat_current_trace_form(const QOperator& rho, const dissipation::Liouvillian& l) {
    if (rho.rows() != l.dim() || rho.cols() != l.dim())
        throw BasisMismatch("heat_current_trace_form: density matrix dimension differs");
    const auto& e = l.basis()->energies;
    auto current = [&](Bath b) {
        const QOperator d = l.apply_dissipator(rho, b);
        double acc = 0.0;
        for (Eigen::Index k = 0; k < e.size(); ++k) acc += e(k) * d(k, k).real();
        return acc / l.rate_scale();
    };
    return finish(current(Bath::L), current(Bath::R));
}

HeatCurrents heat_current_trace_form(const SteadyState& ss, const dissipation::Liouvillian& l) {
    if (ss.basis != l.basis()) throw BasisMismatch("heat_current_trace_form: bases differ");
    const auto p = extended_populations(ss);
    const auto& e = l.basis()->energies;
    extended q[2] = {0, 0};
    for (const Bath b : {Bath::L, Bath::R}) {
        const auto d = l.diagonal_dissipator(p, b);
        extended acc = 0;
        for (std::size_t k = 0; k < d.size(); ++k) acc += extended(e(static_cast<Eigen::Index>(k))) * d[k];
        q[b == Bath::L ? 0 : 1] = acc / extended(l.rate_scale());
    }
    return {static_cast<double>(q[0]), static_cast<double>(q[1]), std::abs(static_cast<double>(q[0] + q[1]))};
}

std::optional<double> rectification(double q_f, double q_r) {
    const double den = std::abs(q_f - q_r);
    if (den < kUndefinedBelow) return std::nullopt;
    return std::abs(q_f + q_r) / den;
}

std::optional<double> photon_asymmetry(double d_f, double d_r) {
    const double den = std::abs(d_f + d_r);
    if (den < kUndefinedBelow) return std::nullopt;
    return std::abs(d_f - d_r) / den;
}

double photon_detection_rate(const QOperator& rho, const std::vector<TransitionChannel>& channels, Bath bath) {
    const Eigen::Index d = rho.rows();
    QOperator a = QOperator::Zero(d, d);
    for (const auto& ch : channels) {
        if (ch.bath != bath) continue;
        if (ch.basis && ch.basis->dim() != d)
            throw BasisMismatch("photon_detection_rate: density matrix dimension differs");
        for (const auto& m : ch.members) a(m.i, m.j) += ch.omega * m.amplitude;
    }
    return (rho * a.adjoint() * a).trace().real();
}

double photon_detection_rate(const SteadyState& ss, const std::vector<TransitionChannel>& channels, Bath bath) {
    require_basis(ss, channels, "photon_detection_rate");
    const double full = photon_detection_rate(ss.density_matrix(), channels, bath);

    double reduced = 0.0;
    for (const auto& ch : channels) {
        if (ch.bath != bath) continue;
        for (const auto& m : ch.members) reduced += ch.omega * ch.omega * std::norm(m.amplitude) * ss.populations(m.j);
    }
    if (std::abs(full - reduced) > 1e-10 * std::max({std::abs(full), std::abs(reduced), 1e-300}))
        throw NonPhysical("photon_detection_rate: double sum and diagonal reduction disagree");
    return full;
}

std::vector<TransitionLedgerEntry> transition_ledger(const SteadyState& ss,
                                                     const std::vector<TransitionChannel>& channels) {
    require_basis(ss, channels, "transition_ledger");
    std::vector<TransitionLedgerEntry> out;
    const auto p = extended_populations(ss);
    for (const auto& ch : channels) {
        for (const auto& m : ch.members) {
            TransitionLedgerEntry e;
            e.bath = ch.bath;
            e.i = m.i;
            e.j = m.j;
            e.omega = m.omega;
            const extended net = member_net_rate(m, p);
            e.net_rate = static_cast<double>(net);
            e.energy_flux_contribution = static_cast<double>(-net * member_omega(ss, m));
            out.push_back(e);
        }
    }
    return out;
}

ObservableRecord evaluate_pair(const ModelParams& params, double t_left, double t_right, double gamma,
                               const SolveOptions& opts) {
    const ModelSpec model = models::build_model(params);

    auto run = [&](double tl, double tr) {
        const auto sol = steady::solve_model(model, {Bath::L, tl, gamma}, {Bath::R, tr, gamma}, opts);
        const auto q = heat_current_rate_form(sol.state, sol.channels);
        const double d = photon_detection_rate(sol.state, sol.channels, Bath::L);
        return std::pair{q, d};
    };
    const auto [fwd, d_f] = run(t_left, t_right);
    const auto [rev, d_r] = run(t_right, t_left);

    ObservableRecord rec;
    rec.T_L = t_left;
    rec.T_R = t_right;
    rec.q_L = fwd.q_L;
    rec.q_R = fwd.q_R;
    rec.q_f = fwd.q_R;
    rec.q_r = rev.q_R;
    rec.rectification = rectification(rec.q_f, rec.q_r);
    rec.photon_rate_f = d_f;
    rec.photon_rate_r = d_r;
    rec.gamma = gamma;
    rec.photon_asymmetry = photon_asymmetry(d_f, d_r);
    rec.residual = std::max(fwd.conservation_residual, rev.conservation_residual);
    rec.params = params;
    if (const auto* rp = std::get_if<RabiParams>(&params)) {
        rec.n_fock = rp->n_fock;
        rec.truncation_dependent = rp->truncation_dependent();
    }
    return rec;
}

ObservableRecord rectification_pair(const ModelParams& params, double t_hot, double t_cold, double gamma,
                                    const SolveOptions& opts) {
    if (!(t_hot > t_cold && t_cold > 0.0))
        throw InvalidParameter("rectification_pair: requires t_hot > t_cold > 0");
    return evaluate_pair(params, t_cold, t_hot, gamma, opts);
}

}  // namespace qrdiode::observables
