"""Standard gate matrices and a few named states used throughout."""

import numpy as np

from .state import PureState

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

CZ = np.diag([1, 1, 1, -1]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron(*ms) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in ms:
        out = np.kron(out, m)
    return out


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase fix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(n_qubits: int, rng: np.random.Generator) -> PureState:
    v = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return PureState.from_vector(v)


ZERO = PureState.basis("0")
ONE = PureState.basis("1")
PLUS = PureState(np.array([1, 1]) / np.sqrt(2))
MINUS = PureState(np.array([1, -1]) / np.sqrt(2))
PHI_PLUS = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2))
