"""Steady-state heat transport and photon detection in the dissipative two-photon Rabi model."""

from ._qrdiode import (
    Bath,
    CouplingKind,
    ObservableRecord,
    QrdiodeError,
    RabiParams,
    TwoQubitParams,
    ValidationError,
    __version__,
    convergence,
    evaluate_pair,
    figure_ids,
    hamiltonian,
    rectification,
    rectification_pair,
    run_figure,
    run_point,
    solve,
    to_si,
)

__all__ = [
    "Bath",
    "CouplingKind",
    "ObservableRecord",
    "QrdiodeError",
    "RabiParams",
    "TwoQubitParams",
    "ValidationError",
    "__version__",
    "convergence",
    "evaluate_pair",
    "figure_ids",
    "hamiltonian",
    "rectification",
    "rectification_pair",
    "run_figure",
    "run_point",
    "solve",
    "to_si",
]
