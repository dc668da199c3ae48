"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-10  # norms, hermiticity, traces, unitarity
    convergence: float = 1e-12  # iterative solvers
    positivity: float = 1e-9  # slack on eigenvalues of a density matrix
    residual_flag: float = 1e-6  # residual entanglement below -this is reported
    degenerate: float = 1e-14  # contraction norm treated as zero


TOL = Tolerances()
