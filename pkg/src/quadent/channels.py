"""A Bell pair whose halves each couple to a one-qubit environment.

Qubits are ordered (e1, A, B, e2).  The environments start in ``|0>``; the
coupling ``exp(i angle X (x) X)`` acts on (e1, A) with angle ``theta`` and on
(B, e2) with angle ``phi``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .entmeas import pi4, vidal_werner_negativity
from .qcore import PureState, apply_unitary, check_unitary, partial_trace, tensor_all
from .qcore.gates import PHI_PLUS, X, ZERO, kron

XX = kron(X, X)


@dataclass(frozen=True)
class ChannelAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not (np.isfinite(self.theta) and np.isfinite(self.phi)):
            raise ValueError("channel angles must be finite")


def xx_coupling(angle: float) -> np.ndarray:
    """``exp(i angle X (x) X) = cos(angle) I + i sin(angle) X (x) X``."""
    return check_unitary(np.cos(angle) * np.eye(4) + 1j * np.sin(angle) * XX)


def channel_state(a: ChannelAngles) -> PureState:
    psi = tensor_all([ZERO, PHI_PLUS, ZERO])
    psi = apply_unitary(psi, xx_coupling(a.theta), [1, 2])
    return apply_unitary(psi, xx_coupling(a.phi), [3, 4])


def channel_outputs(a: ChannelAngles) -> tuple[float, float]:
    """``(pi4 of the four-qubit state, negativity of the A-B marginal)``."""
    psi = channel_state(a)
    return pi4(psi), vidal_werner_negativity(partial_trace(psi, [2, 3]))


@dataclass(frozen=True)
class SweepRow:
    theta: float
    phi: float
    pi4: float
    negativity: float


def angle_grid(n_theta: int = 41, n_phi: int = 41, lo: float = 0.0, hi: float = np.pi / 2) -> tuple:
    if n_theta < 1 or n_phi < 1:
        raise ValueError("grid needs at least one point per axis")
    return np.linspace(lo, hi, n_theta), np.linspace(lo, hi, n_phi)


def channel_sweep(thetas, phis) -> list[SweepRow]:
    """Evaluate every (theta, phi) pair, theta-major."""
    thetas, phis = np.asarray(thetas, float), np.asarray(phis, float)
    for g in (thetas, phis):
        if np.any(np.diff(g) <= 0):
            raise ValueError("sweep grids must be strictly increasing")
    rows = []
    for t in thetas:
        for p in phis:
            q, n = channel_outputs(ChannelAngles(float(t), float(p)))
            rows.append(SweepRow(float(t), float(p), q, n))
    return rows


def diagonal_sweep(n: int = 21, hi: float = np.pi / 4) -> list[SweepRow]:
    """The ``theta = phi`` line from 0 to ``hi``."""
    rows = []
    for t in np.linspace(0.0, hi, n):
        q, neg = channel_outputs(ChannelAngles(float(t), float(t)))
        rows.append(SweepRow(float(t), float(t), q, neg))
    return rows


def sig6(x: float) -> str:
    """Six significant digits; tiny magnitudes print as zero."""
    if abs(x) < 5e-13:
        x = 0.0
    return f"{x:.6g}"


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theta", "phi", "pi4", "negativity"])
    for r in rows:
        w.writerow([sig6(r.theta), sig6(r.phi), sig6(r.pi4), sig6(r.negativity)])
    return buf.getvalue()
