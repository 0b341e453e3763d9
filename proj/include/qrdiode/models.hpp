// models.hpp: Hamiltonians and bath-coupling operators for the simulated devices
//
// Tensor ordering is fixed:
//   two-photon Rabi model:  qubit (x) resonator, index = q * (N + 1) + n,
//                           qubit basis {sigma_z = +1, sigma_z = -1}
//   two-qubit models:       left (x) right, index = 2 * sL + sR,
//                           single-qubit basis {sigma_z = +1, sigma_z = -1}

#pragma once

#include <map>
#include <string>
#include <variant>

#include "qrdiode/numerics.hpp"

namespace qrdiode {

enum class Bath { L, R };

const char* to_string(Bath b);

struct RabiParams {
    double omega_L{1.0};
    double omega_R{0.1};
    double g{0.015};
    double theta{0.0};
    int n_fock{20};  // photon states 0..n_fock

    // Qubit from tunnel splitting eps and bias q: omega_R = sqrt(eps^2 + q^2),
    // theta = atan2(eps, q).
    static RabiParams from_flux_qubit(double omega_L, double eps, double q, double g, int n_fock);

    void validate() const;

    // Coupling above which omega_L a^dag a - g (a^dag + a)^2 is unbounded below.
    // Between this and the hard limit omega_L / 2 results depend on n_fock.
    double collapse_threshold() const { return 0.25 * omega_L; }
    bool truncation_dependent() const { return g >= collapse_threshold(); }
};

enum class CouplingKind { IsingZZ, AsymmetricZX, DM };

const char* to_string(CouplingKind k);
CouplingKind parse_coupling_kind(const std::string& s);

struct TwoQubitParams {
    double omega_L{1.0};
    double omega_R{1.0};
    double g{0.1};
    CouplingKind kind{CouplingKind::IsingZZ};

    void validate() const;
};

using ModelParams = std::variant<RabiParams, TwoQubitParams>;

struct ModelSpec {
    QOperator hamiltonian;
    std::map<Bath, QOperator> jump_ops;
    ModelParams params;
    Eigen::Index dim{0};

    const QOperator& jump(Bath b) const { return jump_ops.at(b); }
};

namespace models {

// 20 photons up to g = 0.15 omega_0, 40 beyond.
int default_n_fock(double g);

QOperator identity(Eigen::Index n);
QOperator sigma_x();
QOperator sigma_y();
QOperator sigma_z();
QOperator annihilation(int n_fock);
// (a^dag + a)^2 with exact matrix elements a^2 + a^dag^2 + 2 a^dag a + 1,
// so <n|.|n> = 2n + 1 also at the truncation edge.
QOperator quadrature_squared(int n_fock);

// H = omega_L a^dag a - omega_R/2 sigma_z + g (a^dag + a)^2 (sin(theta) sigma_z + cos(theta) sigma_x)
// S_L = a^dag + a, S_R = sin(theta) sigma_z + cos(theta) sigma_x.
// Throws SpectralCollapse if g >= omega_L / 2, TruncationTooSmall if n_fock < 2.
ModelSpec build_two_photon_rabi(const RabiParams& p);

// Ising:  (omega_L sz_L + omega_R sz_R + g sz_L sz_R) / 2
// ZX:     omega_L sz_L / 2 + omega_R sz_R / 2 + g sz_L sx_R
// DM:     omega_L sz_L / 2 + omega_R sz_R / 2 + g (sx_L sy_R - sy_L sx_R)
// X_L = sx (x) I, X_R = I (x) sx.
ModelSpec build_comparison_model(const TwoQubitParams& p);

ModelSpec build_model(const ModelParams& p);

}  // namespace models

namespace units {

enum class UnitKind { Frequency, Temperature, Power };

inline constexpr double kReferenceFrequencyHz = 20e9;  // omega_0 / 2 pi
inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J / K

double omega0();  // rad / s

UnitKind parse_unit_kind(const std::string& s);  // throws UnknownUnitKind

// frequency -> rad/s, temperature -> K, power -> W
double to_si(double value, UnitKind kind);
double to_si(double value, const std::string& kind);

}  // namespace units
}  // namespace qrdiode
