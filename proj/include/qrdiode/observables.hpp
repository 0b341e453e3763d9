// observables.hpp: heat currents, rectification, photon detection rate and transition ledger
//
// Heat currents are positive when heat flows from the bath into the system and
// are expressed in hbar * omega_0^2. The photon detection rate D_L is the
// steady-state <dS^- dS^+> of the left bath operator in omega_0^2; the
// physical output flux is gamma * D_L.

#pragma once

#include <optional>
#include <vector>

#include "qrdiode/steady.hpp"

namespace qrdiode {

struct HeatCurrents {
    double q_L{0.0};
    double q_R{0.0};
    double conservation_residual{0.0};  // |q_L + q_R|

    double of(Bath b) const { return b == Bath::L ? q_L : q_R; }
};

struct ObservableRecord {
    double T_L{0.0}, T_R{0.0};  // forward run temperatures
    double q_L{0.0}, q_R{0.0};  // forward run currents
    double q_f{0.0}, q_r{0.0};
    std::optional<double> rectification;
    double photon_rate_f{0.0}, photon_rate_r{0.0};
    double gamma{0.0};
    std::optional<double> photon_asymmetry;
    int n_fock{0};  // 0 for two-qubit models
    double residual{0.0};  // worst conservation residual of the two runs
    bool truncation_dependent{false};
    ModelParams params;

    double gamma_photon_rate_f() const { return gamma * photon_rate_f; }
    double gamma_photon_rate_r() const { return gamma * photon_rate_r; }
};

struct TransitionLedgerEntry {
    Bath bath{Bath::L};
    Eigen::Index i{0}, j{0};
    double omega{0.0};
    double net_rate{0.0};                  // (G+ p_j - G- p_i) |<E_i|S|E_j>|^2
    double energy_flux_contribution{0.0};  // -net_rate * omega
};

namespace observables {

inline constexpr double kUndefinedBelow = 1e-15;

// Q_nu = -sum over members of (G+ p_j - G- p_i) |s_ij|^2 (E_j - E_i). Throws BasisMismatch.
HeatCurrents heat_current_rate_form(const SteadyState& ss, const std::vector<TransitionChannel>& channels);

// Q_nu = Tr{H L_nu[rho]} with the per-bath dissipators of `l` applied to rho.
HeatCurrents heat_current_trace_form(const QOperator& rho, const dissipation::Liouvillian& l);
HeatCurrents heat_current_trace_form(const SteadyState& ss, const dissipation::Liouvillian& l);

// |q_f + q_r| / |q_f - q_r|, empty when the denominator is below 1e-15.
std::optional<double> rectification(double q_f, double q_r);

// |D_f - D_r| / |D_f + D_r|, empty when the denominator is below 1e-15.
std::optional<double> photon_asymmetry(double d_f, double d_r);

// D = Tr(rho A^dag A), A = sum_k w_k S_k over the channels of `bath`.
double photon_detection_rate(const QOperator& rho, const std::vector<TransitionChannel>& channels,
                             Bath bath = Bath::L);
// Diagonal steady state; cross-checked against sum_k w_k^2 sum |s_ij|^2 p_j.
double photon_detection_rate(const SteadyState& ss, const std::vector<TransitionChannel>& channels,
                             Bath bath = Bath::L);

std::vector<TransitionLedgerEntry> transition_ledger(const SteadyState& ss,
                                                     const std::vector<TransitionChannel>& channels);

// Forward run at (T_L, T_R) = (t_left, t_right), reverse run with the
// temperatures exchanged. q_f and q_r are the right-bath currents of each run.
ObservableRecord evaluate_pair(const ModelParams& params, double t_left, double t_right, double gamma,
                               const SolveOptions& opts = {});

// Forward: T_L = t_cold, T_R = t_hot. Requires t_hot > t_cold > 0.
ObservableRecord rectification_pair(const ModelParams& params, double t_hot, double t_cold, double gamma,
                                    const SolveOptions& opts = {});

}  // namespace observables
}  // namespace qrdiode
