"""Boundary element solver for the Laplace equation on an annulus."""

from ._core import (
    AnnulusMesh,
    BemError,
    ConfigError,
    DomainError,
    InputDataError,
    NumericalError,
    Solution,
    System,
    __version__,
    coil_current,
    convergence_study,
    error_report,
    f1,
    f1_quadrature,
    f2,
    f2_quadrature,
    oracle_check,
    parse_fem_csv,
    run_scenario,
    solve_dirichlet,
)

__all__ = [
    "AnnulusMesh",
    "BemError",
    "ConfigError",
    "DomainError",
    "InputDataError",
    "NumericalError",
    "Solution",
    "System",
    "__version__",
    "coil_current",
    "convergence_study",
    "error_report",
    "f1",
    "f1_quadrature",
    "f2",
    "f2_quadrature",
    "oracle_check",
    "parse_fem_csv",
    "run_scenario",
    "solve_dirichlet",
]
