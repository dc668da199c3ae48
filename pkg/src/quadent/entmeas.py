"""Negativity-based entanglement: pairwise negativity and residual entanglement.

For a pure state the one-versus-rest squared negativity is ``2(1 - Tr rho_k^2)``
for the marginal of qubit ``k``.  The residual of qubit ``k`` subtracts the
squared pairwise negativities of every pair containing ``k``; three-qubit
residuals are averaged arithmetically, four-qubit ones geometrically.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BadDim, NegativeResidual, Unnormalized
from .qcore import DensityMatrix, PureState, check_subset, partial_trace, partial_transpose, trace_norm
from .tolerances import TOL

LABELS = "ABCD"


@dataclass(frozen=True)
class PiComponents:
    """Per-qubit residuals, before and after clamping to zero."""

    raw: tuple[float, ...]
    clamped: tuple[float, ...]
    clamp_applied: tuple[bool, ...]
    flagged: tuple[bool, ...]

    def as_dict(self) -> dict:
        return {
            f"pi_{LABELS[k].lower()}": {
                "raw": self.raw[k],
                "clamped": self.clamped[k],
                "clamp_applied": self.clamp_applied[k],
                "flagged": self.flagged[k],
            }
            for k in range(len(self.raw))
        }


@dataclass(frozen=True)
class NegativityReport:
    pairwise: dict  # (i, j) with i < j, 1-based -> N
    one_vs_rest_sq: dict  # k -> N^2

    def as_dict(self) -> dict:
        return {
            "pairwise": {f"{LABELS[i - 1]}{LABELS[j - 1]}": v for (i, j), v in self.pairwise.items()},
            "one_vs_rest_sq": {LABELS[k - 1]: v for k, v in self.one_vs_rest_sq.items()},
        }


def negativity(rho: DensityMatrix, transpose_side=(1,)) -> float:
    """Normalized two-qubit negativity, ``||rho^T||_1 - 1``."""
    if rho.transposed:
        raise ValueError("negativity needs a genuine state, not a partial transpose")
    if rho.dim != 4:
        raise BadDim(f"negativity needs a two-qubit state, got dim {rho.dim}")
    if abs(np.trace(rho.entries) - 1) > TOL.structural:
        raise Unnormalized("density matrix trace != 1")
    # the trace norm of a unit-trace matrix is at least one; anything below is roundoff
    return max(0.0, trace_norm(partial_transpose(rho, transpose_side).entries) - 1.0)


def vidal_werner_negativity(rho: DensityMatrix) -> float:
    """Negativity with the transpose taken on the first qubit."""
    return negativity(rho, (1,))


def one_vs_rest_negativity_sq(psi: PureState, qubit: int) -> float:
    psi.require_normalized()
    (q,) = check_subset([qubit], psi.n_qubits)
    purity = partial_trace(psi, [q]).purity()
    return 2.0 * (1.0 - purity)


def _clamp(raw: float) -> tuple[float, bool, bool]:
    # values within the structural tolerance of zero are numerical noise
    if abs(raw) <= TOL.structural:
        return 0.0, raw != 0.0, False
    if raw < 0:
        return 0.0, True, raw < -TOL.residual_flag
    return raw, False, False


def negativity_report(psi: PureState) -> NegativityReport:
    psi.require_normalized()
    n = psi.n_qubits
    pairwise = {(i, j): negativity(partial_trace(psi, [i, j])) for i, j in combinations(range(1, n + 1), 2)}
    ovr = {k: one_vs_rest_negativity_sq(psi, k) for k in range(1, n + 1)}
    return NegativityReport(pairwise, ovr)


def residual_components(psi: PureState, report: NegativityReport | None = None) -> PiComponents:
    """Residual ``N^2(k|rest) - sum_j N^2(k, j)`` for every qubit ``k``."""
    rep = report or negativity_report(psi)
    n = psi.n_qubits
    raw = []
    for k in range(1, n + 1):
        pairs = sum(v**2 for (i, j), v in rep.pairwise.items() if k in (i, j))
        raw.append(float(rep.one_vs_rest_sq[k] - pairs))
    clamped, applied, flagged = zip(*(_clamp(r) for r in raw))
    comps = PiComponents(tuple(raw), tuple(clamped), tuple(applied), tuple(flagged))
    if any(flagged):
        bad = ", ".join(f"{LABELS[k]}={raw[k]:.3g}" for k in range(n) if flagged[k])
        warnings.warn(f"negative residual entanglement: {bad}", NegativeResidual, stacklevel=2)
    return comps


def pi3(psi: PureState) -> tuple[float, PiComponents]:
    """Three-qubit residual entanglement, the arithmetic mean of raw residuals."""
    psi.require_normalized()
    if psi.n_qubits != 3:
        raise BadDim(f"pi3 needs 3 qubits, got {psi.n_qubits}")
    comps = residual_components(psi)
    return sum(comps.raw) / 3.0, comps


@dataclass(frozen=True)
class Pi4Result:
    value: float
    components: PiComponents
    negativities: NegativityReport

    def as_dict(self) -> dict:
        return {"pi4": self.value, "components": self.components.as_dict(), "negativities": self.negativities.as_dict()}


def pi4_full(psi: PureState) -> Pi4Result:
    psi.require_normalized()
    if psi.n_qubits != 4:
        raise BadDim(f"pi4 needs 4 qubits, got {psi.n_qubits}")
    rep = negativity_report(psi)
    comps = residual_components(psi, rep)
    value = float(np.prod(comps.clamped) ** 0.25)
    return Pi4Result(value, comps, rep)


def pi4(psi: PureState) -> float:
    """Four-qubit residual entanglement, geometric mean of clamped residuals."""
    return pi4_full(psi).value


def pairwise_negativity_oracle(rho: DensityMatrix) -> float:
    """Negativity via LAPACK eigenvalues of the partial transpose.

    Independent of :func:`negativity` (which uses the Jacobi solver and a
    trace norm): twice the magnitude of the negative eigenvalue sum.
    """
    pt = partial_transpose(rho, (1,)).entries
    w = np.linalg.eigvalsh(pt)
    return float(-2.0 * w[w < 0].sum())


__all__ = [
    "NegativityReport",
    "PiComponents",
    "Pi4Result",
    "negativity",
    "negativity_report",
    "one_vs_rest_negativity_sq",
    "pairwise_negativity_oracle",
    "pi3",
    "pi4",
    "pi4_full",
    "residual_components",
    "vidal_werner_negativity",
]
