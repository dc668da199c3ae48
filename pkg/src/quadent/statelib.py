"""Named states, graph states and the reference table of four-qubit states."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .entmeas import pi4
from .errors import BadArity
from .qcore import PureState, apply_unitary, tensor, tensor_all
from .qcore.gates import CZ, PLUS

EDGE_ORDER = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def from_terms(terms: dict, n_qubits: Optional[int] = None) -> PureState:
    """Normalized state from ``{bitstring: coefficient}``."""
    n = n_qubits or len(next(iter(terms)))
    a = np.zeros(2**n, dtype=complex)
    for bits, c in terms.items():
        a[int(bits, 2)] += c
    return PureState.from_vector(a)


def w_state(n: int) -> PureState:
    """Equal superposition of the ``n`` one-hot strings, amplitude ``1/sqrt(n)``."""
    if n < 2:
        raise BadArity(f"W state needs n >= 2, got {n}")
    a = np.zeros(2**n, dtype=complex)
    for k in range(n):
        a[1 << k] = 1.0 / np.sqrt(n)
    return PureState(a)


def ghz_state(n: int) -> PureState:
    if n < 2:
        raise BadArity(f"GHZ state needs n >= 2, got {n}")
    a = np.zeros(2**n, dtype=complex)
    a[0] = a[-1] = 1.0 / np.sqrt(2)
    return PureState(a)


def chi_state_raw(theta: float, phi: float) -> PureState:
    """The chi family exactly as written, before normalization (norm sqrt(2))."""
    c, s = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    a = np.zeros(16, dtype=complex)
    a[0b0000], a[0b0011], a[0b0101], a[0b0110] = c, -s, -sp, cp
    a[0b1001], a[0b1010], a[0b1100], a[0b1111] = cp, sp, s, c
    return PureState.raw(a / np.sqrt(2))


def chi_state(theta: float, phi: float) -> PureState:
    return chi_state_raw(theta, phi).normalize()


@dataclass(frozen=True)
class GraphSpec:
    """Six edge bits in the order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)."""

    bits: tuple

    def __post_init__(self):
        b = tuple(int(x) for x in self.bits)
        if len(b) != 6 or any(x not in (0, 1) for x in b):
            raise ValueError(f"graph spec needs six 0/1 bits, got {self.bits}")
        object.__setattr__(self, "bits", b)

    @classmethod
    def from_edges(cls, edges) -> "GraphSpec":
        es = {tuple(sorted(e)) for e in edges}
        unknown = es - set(EDGE_ORDER)
        if unknown:
            raise ValueError(f"not an edge of the 4-vertex graph: {sorted(unknown)}")
        return cls(tuple(int(e in es) for e in EDGE_ORDER))

    @classmethod
    def from_index(cls, k: int) -> "GraphSpec":
        """Spec whose bits ``b0..b5`` are the binary digits of ``k`` (b0 first)."""
        return cls(tuple((k >> (5 - i)) & 1 for i in range(6)))

    @property
    def edges(self) -> list:
        return [e for e, b in zip(EDGE_ORDER, self.bits) if b]

    @property
    def label(self) -> str:
        return "".join(map(str, self.bits))


def graph_state(g: GraphSpec) -> PureState:
    """Controlled-Z on every edge applied to ``|+>^4``."""
    s = tensor_all([PLUS] * 4)
    for i, j in g.edges:
        s = apply_unitary(s, CZ, [i, j])
    return s


def is_connected(g: GraphSpec) -> bool:
    parent = list(range(5))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in g.edges:
        parent[find(i)] = find(j)
    return len({find(v) for v in range(1, 5)}) == 1


@dataclass(frozen=True)
class GraphRecord:
    spec: GraphSpec
    connected: bool
    pi4: float


def enumerate_graphs() -> list[GraphRecord]:
    return [
        GraphRecord(g, is_connected(g), pi4(graph_state(g)))
        for g in (GraphSpec.from_index(k) for k in range(64))
    ]


@dataclass(frozen=True)
class NamedState:
    id: str
    label: str
    ket: str  # ASCII bra-ket text as printed in the table
    build: Callable[[], PureState]
    expected_eg: Optional[float] = None
    expected_pi4: Optional[float] = None
    row: Optional[int] = None

    def state(self) -> PureState:
        return self.build()


def _bell(bits_a: str, bits_b: str, sign: int = 1) -> PureState:
    return from_terms({bits_a: 1, bits_b: sign})


_ROWS = [
    ("psi1", "|psi1>", "(|01>+|10>)/2^(1/2) (x) (|0>+|1>)/2^(1/2) (x) (|0>+|1>)/2^(1/2)",
     lambda: tensor_all([_bell("01", "10"), PLUS, PLUS]), 0.707, 0.0),
    ("psi2", "|psi2>", "(|00>+|11>)/2^(1/2) (x) (|00>+|11>)/2^(1/2)",
     lambda: tensor(_bell("00", "11"), _bell("00", "11")), 0.866, 0.0),
    ("psi3", "|psi3>", "(|000>+|111>)/2^(1/2) (x) (|0>+|1>)/2^(1/2)",
     lambda: tensor(ghz_state(3), PLUS), 0.707, 0.0),
    ("psi4", "|psi4>", "(|001>+|010>+|100>)/3^(1/2) (x) (|0>+|1>)/2^(1/2)",
     lambda: tensor(w_state(3), PLUS), 0.745, 0.0),
    ("zeta0", "|zeta0>", "(|0000>-|0011>-|0101>+|0110>)/2",
     lambda: from_terms({"0000": 1, "0011": -1, "0101": -1, "0110": 1}), 0.707, 0.0),
    ("zeta1", "|zeta1>", "(|1001>+|1010>+|1100>+|1111>)/2",
     lambda: from_terms({"1001": 1, "1010": 1, "1100": 1, "1111": 1}), 0.707, 0.0),
    ("psi5", "|psi5> = |chi00>", "((|0000>-|0011>-|0101>+|0110>)/2 + (|1001>+|1010>+|1100>+|1111>)/2)/2^(1/2)",
     lambda: from_terms({"0000": 1, "0011": -1, "0101": -1, "0110": 1, "1001": 1, "1010": 1, "1100": 1, "1111": 1}),
     0.866, 1.0),
    ("psi6", "|psi6>", "(|0000>+|1111>)/2^(1/2)", lambda: ghz_state(4), 0.707, 1.0),
    ("psi7", "|psi7>", "(|0001>+|0010>+|0100>+|1000>)/2", lambda: w_state(4), 0.76, 0.14903),
    ("psi8", "|psi8>", "(|0000>+|0101>+|1000>+|1110>)/2",
     lambda: from_terms({"0000": 1, "0101": 1, "1000": 1, "1110": 1}), 0.707, 0.25993),
    ("psi9", "|psi9>", "(|0000>+|1011>+|1101>+|1110>)/2",
     lambda: from_terms({"0000": 1, "1011": 1, "1101": 1, "1110": 1}), 0.81, 0.75),
    ("psi10", "|psi10>", "(|0001>+|0110>+|1000>)/3^(1/2)",
     lambda: from_terms({"0001": 1, "0110": 1, "1000": 1}), 0.81, 0.40861),
    # the table repeats the labels psi8 and psi9 for its last two rows
    ("psi8b", "|psi8> (second)", "(|0000>+|0111>+|1011>+|1100>)/2",
     lambda: from_terms({"0000": 1, "0111": 1, "1011": 1, "1100": 1}), 0.866, 1.0),
    ("psi9b", "|psi9> (second)", "(|0000>-|0101>+|1010>+|1111>)/2",
     lambda: from_terms({"0000": 1, "0101": -1, "1010": 1, "1111": 1}), 0.866, 1.0),
]


def reference_registry() -> list[NamedState]:
    return [
        NamedState(id_, label, ket, build, eg, p4, row)
        for row, (id_, label, ket, build, eg, p4) in enumerate(_ROWS, start=1)
    ]


def chi11() -> PureState:
    """(xi0 + xi1)/sqrt(2) with xi0, xi1 the odd-parity halves."""
    return from_terms({b: 1 for b in ("0001", "0010", "0100", "0111", "1000", "1011", "1101", "1110")})


_EXTRA = {
    "ghz4": ("GHZ4", "(|0000>+|1111>)/2^(1/2)", lambda: ghz_state(4)),
    "w4": ("W4", "(|0001>+|0010>+|0100>+|1000>)/2", lambda: w_state(4)),
    "chi00": ("chi00", "((|0000>-|0011>-|0101>+|0110>)/2 + (|1001>+|1010>+|1100>+|1111>)/2)/2^(1/2)", lambda: chi_state(np.pi / 4, np.pi / 4)),
    "chi11": ("chi11", "(|0001>+|0010>+|0100>+|0111>+|1000>+|1011>+|1101>+|1110>)/8^(1/2)", chi11),
    "bipartite_resource": ("bipartite-teleportation resource", "(|0000>-|0111>+|1000>+|1111>)/2",
                           lambda: from_terms({"0000": 1, "0111": -1, "1000": 1, "1111": 1})),
}


def named_states() -> dict[str, NamedState]:
    """Every state reachable by id: the table rows plus common aliases."""
    out = {s.id: s for s in reference_registry()}
    out["cnot_resource"] = out["psi8b"]
    out["gate_resource"] = out["psi9b"]
    for key, (label, ket, build) in _EXTRA.items():
        out[key] = NamedState(key, label, ket, build)
    return out


def get_state(name: str) -> PureState:
    try:
        return named_states()[name].state()
    except KeyError:
        raise KeyError(f"unknown state id {name!r}; known: {', '.join(sorted(named_states()))}") from None
