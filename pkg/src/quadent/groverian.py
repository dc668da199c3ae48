"""Groverian entanglement: the largest squared overlap with a product state.

``P_max(psi) = max |<e_1 ... e_n|psi>|^2`` over single-qubit states
``|e_k> = cos(theta_k)|0> + exp(i phi_k) sin(theta_k)|1>`` and
``E_G = sqrt(1 - P_max)``.

Two maximizers are provided.  :func:`coordinate_ascent` sweeps the qubits and
replaces each ``|e_k>`` by the normalized contraction of ``psi`` with all the
other factors, which is the exact maximizer of that coordinate block, so the
overlap never decreases.  :func:`ga_maximize` is a real-coded genetic
algorithm over the ``2n`` angles whose champion is polished by coordinate
ascent.  :func:`groverian_measure` runs both and keeps the better one.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ArityMismatch, BadArity, DegenerateContraction
from .qcore import PureState
from .tolerances import TOL

HALF_PI = np.pi / 2
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class GAConfig:
    population: int = 64
    generations: int = 200
    elite_count: int = 2
    tournament_size: int = 3
    mutation_sigma_initial: float = 0.3
    mutation_decay: float = 0.985
    crossover_rate: float = 0.8

    def __post_init__(self):
        if self.population < 4:
            raise ValueError("GA population must be at least 4")
        if not 0 <= self.elite_count < self.population:
            raise ValueError("elite_count must be in [0, population)")


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 50
    max_iterations: int = 10_000  # single-qubit updates per restart
    convergence_delta: float = TOL.convergence
    rng_seed: int = 20090101
    ga: GAConfig = field(default_factory=GAConfig)

    def __post_init__(self):
        if self.convergence_delta <= 0:
            raise ValueError("convergence_delta must be positive")
        if self.restarts < 1:
            raise ValueError("need at least one restart")


@dataclass(frozen=True)
class ProductAnsatz:
    """Angles of a product state; ``theta`` in [0, pi/2], ``phi`` in [0, 2 pi)."""

    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float).reshape(-1)
        p = np.asarray(self.phi, dtype=float).reshape(-1)
        if t.shape != p.shape:
            raise ArityMismatch("theta and phi lengths differ")
        object.__setattr__(self, "theta", t)
        object.__setattr__(self, "phi", p)

    @property
    def n_qubits(self) -> int:
        return self.theta.size

    def vectors(self) -> np.ndarray:
        """``(n, 2)`` array of single-qubit amplitudes."""
        return np.stack([np.cos(self.theta), np.exp(1j * self.phi) * np.sin(self.theta)], axis=1)

    @classmethod
    def from_vectors(cls, vecs) -> "ProductAnsatz":
        t, p = _angles_from_vectors(np.asarray(vecs, dtype=complex))
        return cls(t, p)

    def canonical(self) -> "ProductAnsatz":
        return ProductAnsatz.from_vectors(self.vectors())

    def state(self) -> PureState:
        out = np.ones(1, dtype=complex)
        for v in self.vectors():
            out = np.kron(out, v)
        return PureState(out)


def _angles_from_vectors(v: np.ndarray):
    """Canonical angles for rows ``(a, b)`` up to a global phase per row."""
    a, b = v[..., 0], v[..., 1]
    theta = np.arctan2(np.abs(b), np.abs(a))
    phi = np.where((np.abs(a) > 0) & (np.abs(b) > 0), np.angle(b) - np.angle(a), 0.0)
    return theta, np.mod(phi, TWO_PI)


def _canonical_angles(genes: np.ndarray) -> np.ndarray:
    """Wrap a ``(..., 2n)`` angle array [theta..., phi...] into canonical ranges."""
    n = genes.shape[-1] // 2
    t, p = genes[..., :n], genes[..., n:]
    v = np.stack([np.cos(t), np.exp(1j * p) * np.sin(t)], axis=-1)
    t2, p2 = _angles_from_vectors(v)
    return np.concatenate([t2, p2], axis=-1)


@dataclass
class OptimizationResult:
    p_max: float
    best_ansatz: ProductAnsatz
    iterations_used: int = 0
    restarts_used: int = 0
    restart_trace: list = field(default_factory=list)  # best P reached by each restart
    method: str = ""

    @property
    def e_g(self) -> float:
        return float(np.sqrt(max(0.0, 1.0 - self.p_max)))


def _contract_except(t: np.ndarray, vecs: np.ndarray, skip: int) -> np.ndarray:
    for j in range(len(vecs) - 1, -1, -1):
        if j != skip:
            t = np.tensordot(t, vecs[j].conj(), axes=([j], [0]))
    return t


def overlap_probability(psi: PureState, ansatz: ProductAnsatz) -> float:
    psi.require_normalized()
    if ansatz.n_qubits != psi.n_qubits:
        raise ArityMismatch(f"ansatz has {ansatz.n_qubits} qubits, state has {psi.n_qubits}")
    t = psi.tensor_view()
    vecs = ansatz.vectors()
    for j in range(len(vecs) - 1, -1, -1):
        t = np.tensordot(t, vecs[j].conj(), axes=([j], [0]))
    return float(abs(complex(t)) ** 2)


def _ascend(psi: PureState, vecs: np.ndarray, cfg: OptimizerConfig, history: list | None = None):
    """Block-coordinate ascent from ``vecs`` in place; returns (P, updates, degenerate)."""
    t = psi.tensor_view()
    n = psi.n_qubits
    p = overlap_probability(psi, ProductAnsatz.from_vectors(vecs))
    updates = degenerate = 0
    while updates < cfg.max_iterations:
        p_sweep_start = p
        for i in range(n):
            v = _contract_except(t, vecs, i)
            nv = float(np.linalg.norm(v))
            updates += 1
            if nv < TOL.degenerate:
                degenerate += 1
                continue
            vecs[i] = v / nv
            new_p = nv * nv
            # the block update is an exact maximizer, so P cannot drop
            assert new_p >= p - 1e-12, (new_p, p)
            p = max(p, new_p)
            if history is not None:
                history.append(p)
            if updates >= cfg.max_iterations:
                break
        if p - p_sweep_start < cfg.convergence_delta:
            break
    return p, updates, degenerate


def coordinate_ascent(psi: PureState, start: ProductAnsatz, cfg: OptimizerConfig = OptimizerConfig(),
                      history: list | None = None) -> OptimizationResult:
    """Maximize the product overlap from one starting point.

    Pass a list as ``history`` to collect P after every single-qubit update.
    """
    psi.require_normalized()
    if start.n_qubits != psi.n_qubits:
        raise ArityMismatch(f"ansatz has {start.n_qubits} qubits, state has {psi.n_qubits}")
    vecs = start.vectors().astype(complex)
    p, updates, degenerate = _ascend(psi, vecs, cfg, history)
    if degenerate:
        warnings.warn(f"{degenerate} degenerate contraction(s) skipped", DegenerateContraction, stacklevel=2)
    return OptimizationResult(p, ProductAnsatz.from_vectors(vecs), updates, 1, [p], "coordinate_ascent")


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for restart/individual ``index`` of a seeded run."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) & (2**64 - 1), int(index)]))


def random_ansatz(n: int, rng: np.random.Generator) -> ProductAnsatz:
    """Product state uniform over each Bloch sphere."""
    theta = np.arccos(np.sqrt(rng.uniform(size=n)))
    phi = rng.uniform(0, TWO_PI, size=n)
    return ProductAnsatz(theta, phi)


def multistart_ascent(psi: PureState, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Best coordinate ascent over ``cfg.restarts`` random starts."""
    psi.require_normalized()
    best = None
    trace = []
    total = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateContraction)
        for r in range(cfg.restarts):
            res = coordinate_ascent(psi, random_ansatz(psi.n_qubits, restart_rng(cfg.rng_seed, r)), cfg)
            trace.append(res.p_max)
            total += res.iterations_used
            if best is None or res.p_max > best.p_max:
                best = res
    return OptimizationResult(best.p_max, best.best_ansatz, total, cfg.restarts, trace, "coordinate_ascent")


def _population_fitness(t_flat: np.ndarray, genes: np.ndarray, n: int) -> np.ndarray:
    theta, phi = genes[:, :n], genes[:, n:]
    prod = np.ones((genes.shape[0], 1), dtype=complex)
    for k in range(n):
        e = np.stack([np.cos(theta[:, k]), np.exp(1j * phi[:, k]) * np.sin(theta[:, k])], axis=1)
        prod = (prod[:, :, None] * e[:, None, :]).reshape(genes.shape[0], -1)
    return np.abs(prod.conj() @ t_flat) ** 2


def ga_maximize(psi: PureState, cfg: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Genetic search over product-state angles, champion polished by ascent.

    Tournament selection, per-gene blend crossover, Gaussian mutation with a
    geometrically decaying width and elitism.  Deterministic for a fixed
    ``cfg.rng_seed``.
    """
    psi.require_normalized()
    ga = cfg.ga
    n = psi.n_qubits
    flat = psi.amps
    rng = restart_rng(cfg.rng_seed, 2**32)  # stream disjoint from the restarts
    pop = np.concatenate([np.arccos(np.sqrt(rng.uniform(size=(ga.population, n)))),
                          rng.uniform(0, TWO_PI, size=(ga.population, n))], axis=1)
    fit = _population_fitness(flat, pop, n)
    sigma = ga.mutation_sigma_initial
    trace = []
    for _ in range(ga.generations):
        order = np.argsort(-fit, kind="stable")
        elite = pop[order[: ga.elite_count]]
        n_children = ga.population - ga.elite_count

        def tournament(size):
            picks = rng.integers(0, ga.population, size=(size, ga.tournament_size))
            return pop[picks[np.arange(size), np.argmax(fit[picks], axis=1)]]

        mothers, fathers = tournament(n_children), tournament(n_children)
        u = rng.uniform(size=mothers.shape)
        blend = u * mothers + (1 - u) * fathers
        cross = rng.uniform(size=(n_children, 1)) < ga.crossover_rate
        children = np.where(cross, blend, mothers)
        children = children + rng.normal(0.0, sigma, size=children.shape)
        pop = np.concatenate([elite, _canonical_angles(children)], axis=0)
        fit = _population_fitness(flat, pop, n)
        trace.append(float(fit.max()))
        sigma *= ga.mutation_decay
    champ = pop[int(np.argmax(fit))]
    start = ProductAnsatz(champ[:n], champ[n:])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateContraction)
        polished = coordinate_ascent(psi, start, cfg)
    p = max(polished.p_max, float(fit.max()))
    best = polished.best_ansatz if polished.p_max >= fit.max() else start.canonical()
    trace.append(polished.p_max)
    return OptimizationResult(p, best, polished.iterations_used, 1, trace, "genetic")


@dataclass
class GroverianResult:
    e_g: float
    p_max: float
    ascent: OptimizationResult
    genetic: OptimizationResult

    @property
    def best(self) -> OptimizationResult:
        return self.ascent if self.ascent.p_max >= self.genetic.p_max else self.genetic


def groverian_full(psi: PureState, cfg: OptimizerConfig = OptimizerConfig()) -> GroverianResult:
    a = multistart_ascent(psi, cfg)
    g = ga_maximize(psi, cfg)
    p = min(1.0, max(a.p_max, g.p_max))
    return GroverianResult(float(np.sqrt(max(0.0, 1.0 - p))), p, a, g)


def groverian_measure(psi: PureState, cfg: OptimizerConfig = OptimizerConfig()) -> float:
    """``sqrt(1 - P_max)`` with P_max the better of both optimizers."""
    return groverian_full(psi, cfg).e_g


def w_analytic_pmax(n: int) -> float:
    if n < 2:
        raise BadArity(f"n must be >= 2, got {n}")
    return ((n - 1) / n) ** (n - 1)


def groverian_w_analytic(n: int) -> float:
    """Closed-form Groverian entanglement of the ``n``-qubit W state."""
    return float(np.sqrt(1.0 - w_analytic_pmax(n)))
