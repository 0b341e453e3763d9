#include "qrdiode/models.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

namespace qrdiode {

const char* to_string(Bath b) { return b == Bath::L ? "L" : "R"; }

const char* to_string(CouplingKind k) {
    switch (k) {
        case CouplingKind::IsingZZ: return "ising_zz";
        case CouplingKind::AsymmetricZX: return "asymmetric_zx";
        case CouplingKind::DM: return "dm";
    }
    return "?";
}

CouplingKind parse_coupling_kind(const std::string& s) {
    if (s == "ising_zz") return CouplingKind::IsingZZ;
    if (s == "asymmetric_zx") return CouplingKind::AsymmetricZX;
    if (s == "dm") return CouplingKind::DM;
    throw ConfigError("unknown coupling kind '" + s + "'");
}

RabiParams RabiParams::from_flux_qubit(double omega_L, double eps, double q, double g, int n_fock) {
    RabiParams p;
    p.omega_L = omega_L;
    p.omega_R = std::hypot(eps, q);
    p.theta = std::atan2(eps, q);
    p.g = g;
    p.n_fock = n_fock;
    return p;
}

void RabiParams::validate() const {
    if (!(omega_L > 0.0)) throw InvalidParameter("omega_L must be positive");
    if (!(omega_R > 0.0)) throw InvalidParameter("omega_R must be positive");
    if (!(g >= 0.0)) throw InvalidParameter("g must be non-negative");
    if (g >= 0.5 * omega_L)
        throw SpectralCollapse("g = " + std::to_string(g) + " is at or beyond omega_L/2 = " +
                               std::to_string(0.5 * omega_L) + "; the two-photon spectrum is unbounded");
    if (!(theta >= 0.0 && theta <= 0.5 * std::numbers::pi))
        throw InvalidParameter("theta must lie in [0, pi/2]");
    if (n_fock < 2) throw TruncationTooSmall("n_fock must be at least 2");
}

void TwoQubitParams::validate() const {
    if (!(omega_L > 0.0)) throw InvalidParameter("omega_L must be positive");
    if (!(omega_R > 0.0)) throw InvalidParameter("omega_R must be positive");
    if (!(g >= 0.0)) throw InvalidParameter("g must be non-negative");
}

namespace models {

int default_n_fock(double g) { return g <= 0.15 ? 20 : 40; }

QOperator identity(Eigen::Index n) { return QOperator::Identity(n, n); }

QOperator sigma_x() {
    QOperator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

QOperator sigma_y() {
    QOperator m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

QOperator sigma_z() {
    QOperator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

QOperator annihilation(int n_fock) {
    QOperator a = QOperator::Zero(n_fock + 1, n_fock + 1);
    for (int n = 1; n <= n_fock; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

QOperator quadrature_squared(int n_fock) {
    const int d = n_fock + 1;
    QOperator x2 = QOperator::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        x2(n, n) = 2.0 * n + 1.0;
        if (n + 2 < d) {
            const double v = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
            x2(n, n + 2) = v;
            x2(n + 2, n) = v;
        }
    }
    return x2;
}

ModelSpec build_two_photon_rabi(const RabiParams& p) {
    p.validate();
    const Eigen::Index dr = p.n_fock + 1;
    const QOperator a = annihilation(p.n_fock);
    const QOperator number = a.adjoint() * a;
    const QOperator qubit_coupling = std::sin(p.theta) * sigma_z() + std::cos(p.theta) * sigma_x();

    ModelSpec spec;
    spec.hamiltonian = p.omega_L * numerics::kron(identity(2), number) -
                       0.5 * p.omega_R * numerics::kron(sigma_z(), identity(dr)) +
                       p.g * numerics::kron(qubit_coupling, quadrature_squared(p.n_fock));
    spec.jump_ops[Bath::L] = numerics::kron(identity(2), QOperator(a + a.adjoint()));
    spec.jump_ops[Bath::R] = numerics::kron(qubit_coupling, identity(dr));
    spec.params = p;
    spec.dim = 2 * dr;
    return spec;
}

ModelSpec build_comparison_model(const TwoQubitParams& p) {
    p.validate();
    using numerics::kron;
    const QOperator I = identity(2);
    const QOperator szL = kron(sigma_z(), I), szR = kron(I, sigma_z());

    QOperator h = 0.5 * p.omega_L * szL + 0.5 * p.omega_R * szR;
    switch (p.kind) {
        case CouplingKind::IsingZZ:
            h += 0.5 * p.g * kron(sigma_z(), sigma_z());
            break;
        case CouplingKind::AsymmetricZX:
            h += p.g * kron(sigma_z(), sigma_x());
            break;
        case CouplingKind::DM:
            h += p.g * (kron(sigma_x(), sigma_y()) - kron(sigma_y(), sigma_x()));
            break;
    }

    ModelSpec spec;
    spec.hamiltonian = h;
    spec.jump_ops[Bath::L] = kron(sigma_x(), I);
    spec.jump_ops[Bath::R] = kron(I, sigma_x());
    spec.params = p;
    spec.dim = 4;
    return spec;
}

ModelSpec build_model(const ModelParams& p) {
    return std::visit(
        [](const auto& params) -> ModelSpec {
            using T = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<T, RabiParams>)
                return build_two_photon_rabi(params);
            else
                return build_comparison_model(params);
        },
        p);
}

}  // namespace models

namespace units {

double omega0() { return 2.0 * std::numbers::pi * kReferenceFrequencyHz; }

UnitKind parse_unit_kind(const std::string& s) {
    if (s == "frequency") return UnitKind::Frequency;
    if (s == "temperature") return UnitKind::Temperature;
    if (s == "power") return UnitKind::Power;
    throw UnknownUnitKind("unknown unit kind '" + s + "'");
}

double to_si(double value, UnitKind kind) {
    switch (kind) {
        case UnitKind::Frequency: return value * omega0();
        case UnitKind::Temperature: return value * kHbar * omega0() / kBoltzmann;
        case UnitKind::Power: return value * kHbar * omega0() * omega0();
    }
    throw UnknownUnitKind("unknown unit kind");
}

double to_si(double value, const std::string& kind) { return to_si(value, parse_unit_kind(kind)); }

}  // namespace units
}  // namespace qrdiode
