#include "qrdiode/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qrdiode {

QOperator SteadyState::density_matrix() const {
    return populations.cast<cplx>().asDiagonal();
}

std::vector<TransitionChannel> SteadySolution::channels_of(Bath b) const {
    std::vector<TransitionChannel> out;
    for (const auto& ch : channels)
        if (ch.bath == b) out.push_back(ch);
    return out;
}

namespace steady {

SteadyState solve_steady(const RateMatrix& m, double nullspace_tol) {
    const Eigen::Index nullity = numerics::numerical_nullity(m.entries, nullspace_tol);
    if (nullity != 1)
        throw DegenerateSteadyState("solve_steady: rate matrix has numerical nullity " + std::to_string(nullity));

    SteadyState ss;
    const auto n = static_cast<std::size_t>(m.dim());
    ss.populations_ext = m.rates_ext.size() == n * n ? numerics::stationary_distribution_ext(m.rates_ext, n)
                                                     : numerics::stationary_distribution_ext(m.entries);
    ss.populations.resize(m.dim());
    for (Eigen::Index k = 0; k < m.dim(); ++k)
        ss.populations(k) = static_cast<double>(ss.populations_ext[static_cast<std::size_t>(k)]);
    ss.basis = m.basis;
    ss.method = SteadyMethod::NullSpace;
    ss.residual = (m.entries * ss.populations).cwiseAbs().maxCoeff();
    return ss;
}

namespace {

void check_density_matrix(const QOperator& rho, double tol, const char* what) {
    if (!numerics::is_hermitian(rho, std::max(tol, numerics::kHermitianTol)))
        throw NonPhysical(std::string(what) + ": density matrix is not Hermitian");
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > tol)
        throw NonPhysical(std::string(what) + ": trace deviates from 1 by " + std::to_string(trace - 1.0));
    Eigen::SelfAdjointEigenSolver<QOperator> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
        throw NonPhysical(std::string(what) + ": density matrix has a negative eigenvalue");
}

double max_offdiag(const QOperator& rho) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < rho.cols(); ++j)
        for (Eigen::Index i = 0; i < rho.rows(); ++i)
            if (i != j) m = std::max(m, std::abs(rho(i, j)));
    return m;
}

}  // namespace

SteadyState evolve_to_steady(const dissipation::Liouvillian& l, const QOperator& rho0, double t_final,
                             double dt, const EvolutionOptions& opts) {
    if (rho0.rows() != l.dim() || rho0.cols() != l.dim())
        throw BasisMismatch("evolve_to_steady: rho0 dimension differs from the Liouvillian");
    if (!(t_final > 0.0) || !(dt > 0.0)) throw DomainError("evolve_to_steady: t_final and dt must be positive");
    if (l.norm_bound() * dt > opts.max_step_factor)
        throw DomainError("evolve_to_steady: step exceeds the RK4 stability bound (norm * dt = " +
                          std::to_string(l.norm_bound() * dt) + ")");
    check_density_matrix(rho0, 1e-10, "evolve_to_steady");

    const auto steps = static_cast<long long>(std::ceil(t_final / dt));
    const double h = t_final / static_cast<double>(steps);
    const auto f = [&l](const QOperator& r) { return l.apply(r); };

    QOperator rho = rho0;
    for (long long n = 0; n < steps; ++n) {
        if (opts.observer && opts.observe_every > 0 && n % opts.observe_every == 0)
            opts.observer(static_cast<double>(n) * h, rho);
        rho = numerics::rk4_step(f, rho, h);
    }
    if (opts.observer) opts.observer(t_final, rho);

    check_density_matrix(rho, opts.physical_tol, "evolve_to_steady");

    SteadyState ss;
    ss.basis = l.basis();
    ss.method = SteadyMethod::TimeEvolution;
    ss.populations = rho.diagonal().real();
    ss.residual = numerics::max_abs(l.apply(rho));
    ss.max_coherence = max_offdiag(rho);
    if (ss.residual > opts.derivative_tol)
        throw NotConverged("evolve_to_steady: |d rho/dt| = " + std::to_string(ss.residual) +
                           " at t_final = " + std::to_string(t_final));
    return ss;
}

double default_horizon(const RateMatrix& m, double rate_scale) {
    if (m.dim() < 2) throw DomainError("default_horizon: need at least two levels");
    if (!(rate_scale > 0.0)) throw DomainError("default_horizon: rate_scale must be positive");
    const Eigen::VectorXcd ev = m.entries.eigenvalues();
    std::vector<double> mags(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index k = 0; k < ev.size(); ++k) mags[static_cast<std::size_t>(k)] = std::abs(ev(k));
    std::sort(mags.begin(), mags.end());
    const double gap = mags[1] * rate_scale;
    if (!(gap > 0.0)) throw DegenerateSteadyState("default_horizon: no relaxation gap");
    return 30.0 / gap;
}

double default_step(const dissipation::Liouvillian& l) { return 1.0 / l.norm_bound(); }

SteadySolution solve_model(const ModelSpec& model, const BathSpec& left, const BathSpec& right,
                           const SolveOptions& opts) {
    left.validate();
    right.validate();
    if (left.label != Bath::L || right.label != Bath::R)
        throw InvalidParameter("solve_model: baths must be labelled L and R");

    SteadySolution sol;
    sol.model = model;
    sol.left = left;
    sol.right = right;
    sol.basis = std::make_shared<const EigenSystem>(numerics::eigh(model.hamiltonian));

    const double deg_tol = dissipation::default_degeneracy_tolerance(*sol.basis, opts.deg_tol_rel);
    sol.channels = dissipation::extract_channels(sol.basis, model.jump(Bath::L), left, deg_tol);
    auto right_channels = dissipation::extract_channels(sol.basis, model.jump(Bath::R), right, deg_tol);
    sol.channels.insert(sol.channels.end(), right_channels.begin(), right_channels.end());

    if (dissipation::couples_degenerate_coherences(sol.channels))
        throw DegenerateSteadyState("solve_model: degenerate levels couple coherences to populations");

    sol.rates = dissipation::build_rate_matrix(sol.channels, sol.basis->dim());
    sol.rates.basis = sol.basis;
    sol.state = solve_steady(sol.rates, opts.nullspace_tol);
    return sol;
}

}  // namespace steady
}  // namespace qrdiode
