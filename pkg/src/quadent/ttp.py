"""Teleportation between Bob and Charlie gated by a trusted third party.

Alice prepares the four-qubit state ``chi00`` on (A, B, C, D), keeps A and B,
and hands C to Bob and D to Charlie.  Her computational-basis outcome on
(A, B) decides which Bell pair Bob and Charlie share, so Charlie's
correction can only be fixed once she discloses it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import NoCorrectionExists
from .qcore import PureState, apply_unitary, tensor
from .qcore.gates import CNOT, H, random_state
from .statelib import chi_state
from .teleport import LETTERS, PauliWord

BITS2 = ("00", "01", "10", "11")


def chi00() -> PureState:
    return chi_state(np.pi / 4, np.pi / 4)


def conditional_bell_map() -> dict:
    """Alice's outcome on (A, B) to the normalized state left on (C, D)."""
    t = chi00().tensor_view()
    out = {}
    for bits in BITS2:
        v = t[int(bits[0]), int(bits[1])].reshape(4)
        out[bits] = PureState(v / np.linalg.norm(v))
    return out


def alice_probabilities() -> dict:
    t = chi00().tensor_view()
    return {b: float(np.sum(np.abs(t[int(b[0]), int(b[1])]) ** 2)) for b in BITS2}


def _after_bob(payload: PureState) -> np.ndarray:
    """Five-qubit tensor (P, A, B, C, D) after Bob's CNOT(P -> C) and H(P)."""
    joint = tensor(payload, chi00())
    joint = apply_unitary(joint, CNOT, [1, 4])
    joint = apply_unitary(joint, H, [1])
    return joint.tensor_view()


def _charlie_state(t: np.ndarray, alice: str, bob: str) -> np.ndarray:
    """Unnormalized qubit-D amplitudes for the given outcomes."""
    return t[int(bob[0]), int(alice[0]), int(alice[1]), int(bob[1])].copy()


@lru_cache(maxsize=None)
def correction_catalog(n_payloads: int = 20, seed: int = 2009) -> dict:
    """``(alice_bits, bob_bits)`` to the Pauli word Charlie applies.

    Each entry is the first single-qubit word that restores every one of
    ``n_payloads`` random payloads exactly.
    """
    rng = np.random.default_rng(seed)
    payloads = [random_state(1, rng) for _ in range(n_payloads)]
    tensors = [_after_bob(p) for p in payloads]
    catalog, missing = {}, []
    for alice, bob in itertools.product(BITS2, BITS2):
        for letter in LETTERS:
            w = PauliWord((letter,)).matrix()
            ok = True
            for p, t in zip(payloads, tensors):
                v = _charlie_state(t, alice, bob)
                v = w @ (v / np.linalg.norm(v))
                if abs(abs(np.vdot(p.amps, v)) ** 2 - 1) > 1e-10:
                    ok = False
                    break
            if ok:
                catalog[(alice, bob)] = PauliWord((letter,))
                break
        else:
            missing.append((alice, bob))
    if missing:
        raise NoCorrectionExists(f"no single-qubit correction for {missing}")
    return catalog


@dataclass(frozen=True)
class Event:
    seq: int
    step: int  # protocol step 1..4
    kind: str
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Transcript:
    events: tuple
    fidelity: float

    def kinds(self) -> list[str]:
        return [e.kind for e in self.events]

    def index(self, kind: str) -> int:
        return self.kinds().index(kind)

    def ordered(self) -> bool:
        seqs = [e.seq for e in self.events]
        steps = [e.step for e in self.events]
        return (
            seqs == sorted(seqs)
            and len(set(seqs)) == len(seqs)
            and steps == sorted(steps)
            and self.index("disclosure") < self.index("correction")
        )

    def to_jsonl(self) -> str:
        return "".join(json.dumps(asdict(e), sort_keys=True) + "\n" for e in self.events)


def _amps_json(v) -> list:
    return [[float(np.real(a)), float(np.imag(a))] for a in np.asarray(v).reshape(-1)]


def run_protocol(
    payload: PureState,
    seed: int = 0,
    alice_outcome: Optional[str] = None,
    disclosed: Optional[str] = None,
) -> Transcript:
    """Simulate one run and log every step.

    ``alice_outcome`` forces Alice's result instead of sampling it;
    ``disclosed`` makes her announce different bits than she measured.
    """
    payload.require_normalized()
    if payload.n_qubits != 1:
        raise ValueError("payload must be a single qubit")
    rng = np.random.default_rng(seed)
    events = []

    def log(step, kind, **data):
        events.append(Event(len(events), step, kind, data))

    log(1, "prepare", state="chi00", payload=_amps_json(payload.amps))
    log(1, "distribute", alice=["A", "B"], bob=["C"], charlie=["D"])

    p_alice = alice_probabilities()
    alice = alice_outcome or BITS2[rng.choice(4, p=[p_alice[b] for b in BITS2])]
    log(2, "alice_measurement", outcome=alice, probability=p_alice[alice])

    t = _after_bob(payload)
    weights = {b: float(np.sum(np.abs(_charlie_state(t, alice, b)) ** 2)) for b in BITS2}
    total = sum(weights.values())
    p_bob = [weights[b] / total for b in BITS2]
    bob = BITS2[rng.choice(4, p=p_bob)]
    log(3, "bob_measurement", outcome=bob, probability=p_bob[BITS2.index(bob)])

    announced = disclosed or alice
    log(4, "disclosure", bits=announced)
    word = correction_catalog()[(announced, bob)]
    v = _charlie_state(t, alice, bob)
    out = word.matrix() @ (v / np.linalg.norm(v))
    log(4, "correction", pauli=str(word))
    fid = float(abs(np.vdot(payload.amps, out)) ** 2)
    log(4, "result", fidelity=fid, output=_amps_json(out))
    return Transcript(tuple(events), fid)


def wrong_disclosure_fidelity(n_payloads: int = 100, seed: int = 1) -> float:
    """Mean fidelity when Charlie corrects with bits Alice did not measure."""
    rng = np.random.default_rng(seed)
    fids = []
    for k in range(n_payloads):
        payload = random_state(1, rng)
        actual = BITS2[k % 4]
        wrong = BITS2[(k + 1 + (k // 4) % 3) % 4]
        fids.append(run_protocol(payload, seed=k, alice_outcome=actual, disclosed=wrong).fidelity)
    return float(np.mean(fids))
