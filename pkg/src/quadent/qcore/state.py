"""Pure states, density matrices and the operations between them.

Basis convention: qubit 1 is the most significant bit, so ``|q1 q2 ... qn>``
sits at index ``q1 * 2**(n-1) + ... + qn`` and printed kets read the same
as in hand-written formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..errors import BadTargets, NonUnitary, NotHermitian, ShapeMismatch, Unnormalized
from ..tolerances import TOL
from .linalg import hermitian_eigenvalues

MAX_QUBITS = 20


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def _n_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise ShapeMismatch(f"dimension {dim} is not a power of two >= 2")
    if n > MAX_QUBITS:
        raise ShapeMismatch(f"{n} qubits exceeds the {MAX_QUBITS}-qubit limit")
    return n


def check_subset(qubits: Iterable[int], n_qubits: int, ordered: bool = True) -> tuple[int, ...]:
    """Validate 1-based qubit indices against an ``n_qubits`` system.

    With ``ordered`` the indices must be strictly increasing; otherwise they
    only need to be distinct (gate targets may be given in any order).
    """
    q = tuple(int(i) for i in qubits)
    if not q:
        raise BadTargets("empty qubit subset")
    if len(set(q)) != len(q):
        raise BadTargets(f"repeated qubit index in {q}")
    if any(i < 1 or i > n_qubits for i in q):
        raise BadTargets(f"qubit index out of range 1..{n_qubits} in {q}")
    if ordered and list(q) != sorted(q):
        raise BadTargets(f"qubit subset {q} is not strictly increasing")
    return q


@dataclass(frozen=True, eq=False)
class PureState:
    """Amplitude vector over ``n_qubits`` qubits.

    The default constructor insists on unit norm.  Use :meth:`raw` for an
    unnormalized vector; such values carry ``normalized=False`` and every
    measure rejects them.
    """

    amps: np.ndarray
    normalized: bool = True
    n_qubits: int = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "n_qubits", _n_qubits_for(a.size))
        object.__setattr__(self, "amps", _frozen(a))
        if self.normalized and abs(np.linalg.norm(a) - 1.0) > TOL.structural:
            raise Unnormalized(f"state norm {np.linalg.norm(a):.12g} != 1")

    @classmethod
    def raw(cls, amps) -> "PureState":
        return cls(amps, normalized=False)

    @classmethod
    def from_vector(cls, amps) -> "PureState":
        """Normalize an arbitrary nonzero vector."""
        a = np.asarray(amps, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(a / nrm)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        a = np.zeros(2 ** len(bits), dtype=complex)
        a[int(bits, 2)] = 1.0
        return cls(a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    @property
    def dim(self) -> int:
        return self.amps.size

    def normalize(self) -> "PureState":
        return PureState.from_vector(self.amps)

    def tensor_view(self) -> np.ndarray:
        """Amplitudes as an ``(2,) * n`` array, axis ``k`` = qubit ``k + 1``."""
        return self.amps.reshape((2,) * self.n_qubits)

    def require_normalized(self) -> "PureState":
        if not self.normalized:
            raise Unnormalized("operation requires a normalized state")
        return self

    def amplitude(self, bits: str) -> complex:
        return complex(self.amps[int(bits, 2)])

    def __repr__(self):
        terms = [f"({a:.4g})|{i:0{self.n_qubits}b}>" for i, a in enumerate(self.amps) if abs(a) > 1e-12]
        return f"PureState({' + '.join(terms) or '0'})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix on qubits.

    ``transposed`` marks the output of :func:`partial_transpose`, which is
    exempt from the positivity check.
    """

    entries: np.ndarray
    transposed: bool = False
    check: bool = True
    n_qubits: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f"density matrix must be square, got {m.shape}")
        object.__setattr__(self, "n_qubits", _n_qubits_for(m.shape[0]))
        object.__setattr__(self, "entries", _frozen(m))
        if self.check:
            if np.max(np.abs(m - m.conj().T)) > TOL.structural:
                raise NotHermitian("density matrix is not Hermitian")
            if abs(np.trace(m) - 1.0) > TOL.structural:
                raise Unnormalized(f"density matrix trace {np.trace(m).real:.12g} != 1")
            if not self.transposed and hermitian_eigenvalues(m)[0] < -TOL.positivity:
                raise ValueError("density matrix has a negative eigenvalue")

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        psi.require_normalized()
        return cls(np.outer(psi.amps, psi.amps.conj()), check=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


def tensor(left: PureState, right: PureState) -> PureState:
    """Kronecker product; ``left`` supplies the leading qubits."""
    left.require_normalized()
    right.require_normalized()
    if left.n_qubits + right.n_qubits > MAX_QUBITS:
        raise ShapeMismatch("tensor product exceeds the qubit limit")
    return PureState(np.kron(left.amps, right.amps))


def tensor_all(states: Sequence[PureState]) -> PureState:
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def check_unitary(gate) -> np.ndarray:
    g = np.asarray(gate, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NonUnitary(f"gate must be square, got {g.shape}")
    if np.max(np.abs(g.conj().T @ g - np.eye(g.shape[0]))) > TOL.structural:
        raise NonUnitary("gate is not unitary within tolerance")
    return g


def apply_unitary(state: PureState, gate, targets: Sequence[int]) -> PureState:
    """Apply a ``2**k`` unitary to the ``k`` listed qubits (in the given order)."""
    g = check_unitary(gate)
    k = _n_qubits_for(g.shape[0]) if g.shape[0] > 1 else 0
    tg = check_subset(targets, state.n_qubits, ordered=False)
    if len(tg) != k:
        raise BadTargets(f"gate acts on {k} qubits but {len(tg)} targets given")
    axes = [t - 1 for t in tg]
    t = state.tensor_view()
    out = np.tensordot(g.reshape((2,) * (2 * k)), t, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return PureState(out.reshape(-1), normalized=state.normalized)


def permute_qubits(state: PureState, order: Sequence[int]) -> PureState:
    """New state whose qubit ``k`` is the old qubit ``order[k-1]``."""
    o = check_subset(order, state.n_qubits, ordered=False)
    if len(o) != state.n_qubits:
        raise BadTargets("permutation must list every qubit once")
    t = np.transpose(state.tensor_view(), [i - 1 for i in o])
    return PureState(t.reshape(-1), normalized=state.normalized)


def partial_trace(rho_or_pure, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on the qubits in ``keep`` (increasing order)."""
    if isinstance(rho_or_pure, PureState):
        psi = rho_or_pure.require_normalized()
        n = psi.n_qubits
        kp = check_subset(keep, n)
        rest = [i for i in range(n) if i + 1 not in kp]
        m = np.transpose(psi.tensor_view(), [i - 1 for i in kp] + rest).reshape(2 ** len(kp), -1)
        return DensityMatrix(m @ m.conj().T, check=False)
    rho = rho_or_pure
    n = rho.n_qubits
    kp = check_subset(keep, n)
    drop = [i for i in range(n) if i + 1 not in kp]
    t = rho.entries.reshape((2,) * (2 * n))
    # trace the highest axes first so remaining axis numbers stay valid
    for i in sorted(drop, reverse=True):
        cur = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + cur)
    d = 2 ** len(kp)
    return DensityMatrix(t.reshape(d, d), transposed=rho.transposed, check=False)


def partial_transpose(rho: DensityMatrix, subsystem: Sequence[int]) -> DensityMatrix:
    """Transpose the row and column indices of the qubits in ``subsystem``."""
    n = rho.n_qubits
    sub = check_subset(subsystem, n)
    t = rho.entries.reshape((2,) * (2 * n))
    perm = list(range(2 * n))
    for q in sub:
        perm[q - 1], perm[q - 1 + n] = q - 1 + n, q - 1
    out = np.transpose(t, perm).reshape(rho.dim, rho.dim)
    return DensityMatrix(out, transposed=not rho.transposed, check=False)


def inner(a: PureState, b: PureState) -> complex:
    """``<a|b>``."""
    if a.n_qubits != b.n_qubits:
        raise ShapeMismatch("states have different qubit counts")
    return complex(np.vdot(a.amps, b.amps))


def fidelity(a: PureState, b: PureState) -> float:
    return abs(inner(a, b)) ** 2


def equal_up_to_global_phase(a: PureState, b: PureState, tol: float = TOL.structural) -> tuple[bool, float]:
    """Compare two states ignoring a global phase.

    The phase ``gamma`` is read off the largest-magnitude amplitude of ``b``
    so that ``a ~ e^{i gamma} b``.  Returns ``(equal, gamma)``.
    """
    if a.n_qubits != b.n_qubits:
        raise ShapeMismatch(f"{a.n_qubits} vs {b.n_qubits} qubits")
    k = int(np.argmax(np.abs(b.amps)))
    if abs(b.amps[k]) == 0 or abs(a.amps[k]) == 0:
        gamma = 0.0
    else:
        gamma = float(np.angle(a.amps[k] / b.amps[k]))
    diff = np.max(np.abs(a.amps - np.exp(1j * gamma) * b.amps))
    return bool(diff <= tol), gamma
