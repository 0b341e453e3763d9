// steady.hpp: diagonal steady state from the rate matrix, and the time-evolution oracle

#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qrdiode/dissipation.hpp"

namespace qrdiode {

enum class SteadyMethod { NullSpace, TimeEvolution };

struct SteadyState {
    Eigen::VectorXd populations;
    // Same populations at the working precision of the solve (NullSpace only).
    std::vector<extended> populations_ext;
    std::shared_ptr<const EigenSystem> basis;
    double residual{0.0};  // max |M p| (NullSpace) or max |d rho / dt| (TimeEvolution)
    SteadyMethod method{SteadyMethod::NullSpace};
    double max_coherence{0.0};  // largest off-diagonal |rho_ij| of the final state (TimeEvolution)

    QOperator density_matrix() const;
};

struct SolveOptions {
    double deg_tol_rel{dissipation::kRelativeDegeneracyTol};
    double nullspace_tol{1e-10};
};

// Model, bath pair and everything derived from them for one steady-state solve.
struct SteadySolution {
    ModelSpec model;
    BathSpec left, right;
    std::shared_ptr<const EigenSystem> basis;
    std::vector<TransitionChannel> channels;  // left channels first, then right
    RateMatrix rates;
    SteadyState state;

    std::vector<TransitionChannel> channels_of(Bath b) const;
};

namespace steady {

// Nullity is decided from the singular values of M (threshold tol * sigma_max);
// the populations come from Grassmann-Taksar-Heyman elimination.
SteadyState solve_steady(const RateMatrix& m, double nullspace_tol = 1e-10);

struct EvolutionOptions {
    // called every `observe_every` steps and at the end with (t, rho)
    std::function<void(double, const QOperator&)> observer;
    int observe_every{0};
    double derivative_tol{1e-8};
    double physical_tol{1e-6};
    // largest accepted norm_bound * dt; the steady state is an exact fixed point
    // of the RK4 map, so only stability constrains the step
    double max_step_factor{2.0};
};

// RK4 integration of d rho / dt = L[rho] in the energy basis up to t_final.
// Throws NotConverged if max|L[rho]| > derivative_tol at t_final, NonPhysical
// if trace or positivity drift beyond physical_tol.
SteadyState evolve_to_steady(const dissipation::Liouvillian& l, const QOperator& rho0, double t_final,
                             double dt, const EvolutionOptions& opts = {});

// 30 / lambda, lambda the slowest nonzero relaxation rate of the population
// dynamics (smallest |eigenvalue| of M other than the stationary zero), scaled
// by `rate_scale` to match a Liouvillian built with that scale.
double default_horizon(const RateMatrix& m, double rate_scale = 1.0);
// 1 / norm_bound
double default_step(const dissipation::Liouvillian& l);

// Diagonalizes, extracts both baths' channels and solves the rate equations.
// Throws DegenerateSteadyState when a channel couples coherences between
// degenerate levels.
SteadySolution solve_model(const ModelSpec& model, const BathSpec& left, const BathSpec& right,
                           const SolveOptions& opts = {});

}  // namespace steady
}  // namespace qrdiode
