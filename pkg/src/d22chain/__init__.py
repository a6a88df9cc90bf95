"""Open D₂⁽²⁾ spin chain with non-diagonal boundaries: R/K-matrices, transfer
matrices, XXZ factorization, fusion constraints and the T-Q Bethe ansatz."""

from .d22 import BoundaryClass, D22Boundary, k_minus_d22, k_plus_d22, r_d22, r_d22_direct
from .fusion import TQModel, lambda_d22, lambda_staggered, tq_model
from .bae import SolveConfig, classify_roots, solve_bae
from .report import RunConfig, VerificationReport, run_solve, run_verify
from .transfer import ChainSpec, Pattern, factorization_residual, hamiltonian, transfer_d22
from .xxz import ParameterError, XxzBoundary, k_minus_xxz, k_plus_xxz, r_xxz

__all__ = [
    "BoundaryClass",
    "ChainSpec",
    "D22Boundary",
    "ParameterError",
    "Pattern",
    "RunConfig",
    "SolveConfig",
    "TQModel",
    "VerificationReport",
    "XxzBoundary",
    "classify_roots",
    "factorization_residual",
    "hamiltonian",
    "k_minus_d22",
    "k_minus_xxz",
    "k_plus_d22",
    "k_plus_xxz",
    "lambda_d22",
    "lambda_staggered",
    "r_d22",
    "r_d22_direct",
    "r_xxz",
    "run_solve",
    "run_verify",
    "solve_bae",
    "tq_model",
    "transfer_d22",
]
