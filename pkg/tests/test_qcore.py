import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadent.errors import BadTargets, NonUnitary, NotHermitian, ShapeMismatch, Unnormalized
from quadent.qcore import (
    DensityMatrix,
    PureState,
    apply_unitary,
    equal_up_to_global_phase,
    hermitian_eigenvalues,
    partial_trace,
    partial_transpose,
    tensor,
    trace_norm,
)
from quadent.qcore.gates import CZ, H, PHI_PLUS, PLUS, X, Z, kron, random_state, random_unitary

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def ghz(n):
    a = np.zeros(2**n)
    a[0] = a[-1] = 1 / np.sqrt(2)
    return PureState(a)


def w4():
    a = np.zeros(16)
    a[[1, 2, 4, 8]] = 0.5
    return PureState(a)


def brute_partial_trace(psi, keep):
    """Reference reduced state by explicit summation over basis labels."""
    n = psi.n_qubits
    drop = [q for q in range(1, n + 1) if q not in keep]
    d = 2 ** len(keep)
    rho = np.zeros((d, d), dtype=complex)
    for x in itertools.product("01", repeat=n):
        for y in itertools.product("01", repeat=n):
            if any(x[q - 1] != y[q - 1] for q in drop):
                continue
            i = int("".join(x[q - 1] for q in keep), 2)
            j = int("".join(y[q - 1] for q in keep), 2)
            rho[i, j] += psi.amps[int("".join(x), 2)] * np.conj(psi.amps[int("".join(y), 2)])
    return rho


class TestPureState:
    def test_norm_enforced(self):
        with pytest.raises(Unnormalized):
            PureState([1, 1])
        raw = PureState.raw([1, 1])
        assert not raw.normalized
        assert raw.norm == pytest.approx(np.sqrt(2))
        assert raw.normalize().normalized

    def test_bad_length(self):
        with pytest.raises(ShapeMismatch):
            PureState([1, 0, 0])

    def test_immutable(self):
        s = PureState.basis("01")
        with pytest.raises(ValueError):
            s.amps[0] = 1

    def test_msb_convention(self):
        s = PureState.basis("1000")
        assert s.amps[8] == 1


class TestTensor:
    def test_basis_product(self):
        s = tensor(PureState.basis("0"), PureState.basis("1"))
        assert s.n_qubits == 2
        assert s.amps[1] == 1

    def test_bell_times_plus(self):
        s = tensor(PHI_PLUS, PLUS)
        expect = np.zeros(8)
        expect[[0b000, 0b001, 0b110, 0b111]] = 0.5
        np.testing.assert_allclose(s.amps, expect, atol=1e-15)

    def test_ghz3_plus_is_psi3(self):
        s = tensor(ghz(3), PLUS)
        nz = np.flatnonzero(np.abs(s.amps) > 1e-12)
        assert len(nz) == 4
        np.testing.assert_allclose(s.amps[nz], 0.5)

    def test_rejects_unnormalized(self):
        with pytest.raises(Unnormalized):
            tensor(PureState.raw([1, 1]), PLUS)


class TestApplyUnitary:
    def test_x_on_first_qubit(self):
        s = apply_unitary(PureState.basis("0000"), X, [1])
        assert s.amplitude("1000") == 1

    def test_cz(self):
        s = apply_unitary(PureState.basis("11"), CZ, [1, 2])
        assert s.amplitude("11") == -1

    def test_star_graph_phases(self):
        s = PureState(np.full(16, 0.25))
        for t in (2, 3, 4):
            s = apply_unitary(s, CZ, [1, t])
        for x in range(16):
            b = [(x >> (3 - k)) & 1 for k in range(4)]
            sign = (-1) ** (b[0] * b[1] + b[0] * b[2] + b[0] * b[3])
            assert s.amps[x] == pytest.approx(sign / 4)

    def test_target_order_matters(self):
        from quadent.qcore.gates import CNOT

        s = apply_unitary(PureState.basis("10"), CNOT, [1, 2])
        assert s.amplitude("11") == 1
        s = apply_unitary(PureState.basis("10"), CNOT, [2, 1])
        assert s.amplitude("10") == 1

    def test_errors(self):
        s = PureState.basis("00")
        with pytest.raises(NonUnitary):
            apply_unitary(s, [[1, 1], [0, 1]], [1])
        with pytest.raises(BadTargets):
            apply_unitary(s, CZ, [1, 1])
        with pytest.raises(BadTargets):
            apply_unitary(s, X, [3])
        with pytest.raises(BadTargets):
            apply_unitary(s, CZ, [1])

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_norm_preserved(self, seed):
        rng = np.random.default_rng(seed)
        s = random_state(4, rng)
        u = random_unitary(4, rng)
        t = sorted(rng.choice(4, size=2, replace=False) + 1)
        out = apply_unitary(s, u, t)
        assert abs(out.norm - 1) <= 1e-12


class TestPartialTrace:
    def test_ghz4(self):
        rho = partial_trace(ghz(4), [1, 2])
        np.testing.assert_allclose(rho.entries, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)

    def test_w4_pair(self):
        rho = partial_trace(w4(), [1, 2])
        psi_plus = np.array([0, 1, 1, 0]) / np.sqrt(2)
        expect = 0.5 * np.diag([1, 0, 0, 0]) + 0.5 * np.outer(psi_plus, psi_plus)
        np.testing.assert_allclose(rho.entries, expect, atol=1e-15)
        np.testing.assert_allclose(rho.entries, brute_partial_trace(w4(), [1, 2]), atol=1e-15)

    def test_product_marginal_pure(self):
        rng = np.random.default_rng(5)
        e1 = random_state(1, rng)
        s = tensor(e1, random_state(3, rng))
        rho = partial_trace(s, [1])
        assert rho.purity() == pytest.approx(1, abs=1e-12)
        np.testing.assert_allclose(rho.entries, np.outer(e1.amps, e1.amps.conj()), atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seeds, st.sampled_from([(1,), (2, 4), (1, 3, 4), (2, 3)]))
    def test_matches_brute_force(self, seed, keep):
        s = random_state(4, np.random.default_rng(seed))
        np.testing.assert_allclose(partial_trace(s, keep).entries, brute_partial_trace(s, keep), atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_two_step_consistency(self, seed):
        s = random_state(4, np.random.default_rng(seed))
        full = DensityMatrix.from_pure(s)
        step = partial_trace(partial_trace(full, [1, 2, 3]), [1, 2])
        once = partial_trace(s, [1, 2])
        assert abs(np.trace(once.entries) - 1) <= 1e-10
        np.testing.assert_allclose(step.entries, once.entries, atol=1e-12)

    def test_bad_keep(self):
        with pytest.raises(BadTargets):
            partial_trace(ghz(4), [])
        with pytest.raises(BadTargets):
            partial_trace(ghz(4), [2, 1])


class TestPartialTranspose:
    def test_diagonal_invariant(self):
        rho = DensityMatrix(np.diag([0.1, 0.2, 0.3, 0.4]))
        np.testing.assert_array_equal(partial_transpose(rho, [1]).entries, rho.entries)

    def test_bell_eigenvalues(self):
        rho = DensityMatrix.from_pure(PHI_PLUS)
        pt = partial_transpose(rho, [1])
        assert pt.transposed
        # oracle: LAPACK on the same matrix
        np.testing.assert_allclose(np.linalg.eigvalsh(pt.entries), [-0.5, 0.5, 0.5, 0.5], atol=1e-14)
        np.testing.assert_allclose(hermitian_eigenvalues(pt.entries), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    def test_entry_rule(self):
        m = np.arange(16).reshape(4, 4).astype(complex)
        rho = DensityMatrix(m, check=False)
        pt = partial_transpose(rho, [1]).entries
        for ia, ib, ja, jb in itertools.product(range(2), repeat=4):
            assert pt[2 * ia + ib, 2 * ja + jb] == m[2 * ja + ib, 2 * ia + jb]

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_involution_exact(self, seed):
        rho = partial_trace(random_state(4, np.random.default_rng(seed)), [1, 3, 4])
        twice = partial_transpose(partial_transpose(rho, [2]), [2])
        np.testing.assert_array_equal(twice.entries, rho.entries)
        assert not twice.transposed

    @settings(max_examples=25, deadline=None)
    @given(seeds)
    def test_trace_norm_symmetry(self, seed):
        rho = partial_trace(random_state(4, np.random.default_rng(seed)), [2, 3])
        a = trace_norm(partial_transpose(rho, [1]).entries)
        b = trace_norm(partial_transpose(rho, [2]).entries)
        assert abs(a - b) <= 1e-10


class TestEigen:
    def test_identity(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.eye(4)), [1, 1, 1, 1])

    def test_quadratic(self):
        # (0.5 +- sqrt(0.5)) / 2
        np.testing.assert_allclose(
            hermitian_eigenvalues([[0.5, 0.25], [0.25, 0]]),
            [(0.5 - np.sqrt(0.5)) / 2, (0.5 + np.sqrt(0.5)) / 2],
            atol=1e-14,
        )
        assert (0.5 - np.sqrt(0.5)) / 2 == pytest.approx(-0.103553, abs=1e-6)

    def test_pauli_x(self):
        np.testing.assert_allclose(hermitian_eigenvalues(X), [-1, 1], atol=1e-15)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            hermitian_eigenvalues([[0, 1], [0, 0]])

    @settings(max_examples=40, deadline=None)
    @given(seeds, st.sampled_from([2, 4, 8, 16]))
    def test_characteristic_sums(self, seed, dim):
        rng = np.random.default_rng(seed)
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        a = a + a.conj().T
        w = hermitian_eigenvalues(a)
        assert np.all(np.diff(w) >= 0)
        assert abs(w.sum() - np.trace(a).real) <= 1e-10 * max(1, np.abs(a).max())
        assert abs((w**2).sum() - np.sum(np.abs(a) ** 2)) <= 1e-9 * max(1, np.sum(np.abs(a) ** 2))
        np.testing.assert_allclose(w, np.linalg.eigvalsh(a), atol=1e-10)

    def test_dim64(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
        a = a + a.conj().T
        np.testing.assert_allclose(hermitian_eigenvalues(a), np.linalg.eigvalsh(a), atol=1e-10)


class TestTraceNorm:
    def test_density_is_one(self):
        rho = partial_trace(random_state(4, np.random.default_rng(1)), [1, 2])
        assert trace_norm(rho.entries) == pytest.approx(1, abs=1e-10)

    def test_pt_bell(self):
        pt = partial_transpose(DensityMatrix.from_pure(PHI_PLUS), [1])
        assert trace_norm(pt.entries) == pytest.approx(2, abs=1e-12)

    def test_zero(self):
        assert trace_norm(np.zeros((4, 4))) == 0


class TestGlobalPhase:
    def test_negation(self):
        s = random_state(3, np.random.default_rng(2))
        ok, gamma = equal_up_to_global_phase(s, PureState(-s.amps))
        assert ok
        assert abs(abs(gamma) - np.pi) < 1e-12

    def test_different(self):
        ok, _ = equal_up_to_global_phase(PureState.basis("00"), PureState.basis("01"))
        assert not ok

    def test_chi11_hadamard_side(self):
        odd = [x for x in range(16) if bin(x).count("1") % 2 == 1]
        a = np.zeros(16)
        a[odd] = 1 / (2 * np.sqrt(2))
        chi11 = PureState(a)
        r = np.zeros(16)
        r[[0b0000, 0b1000, 0b1111]] = 0.5
        r[0b0111] = -0.5
        rhs = apply_unitary(PureState(r), kron(H, H, H), [2, 3, 4])
        ok, _ = equal_up_to_global_phase(chi11, rhs)
        assert ok

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            equal_up_to_global_phase(PureState.basis("0"), PureState.basis("00"))


def test_density_validation():
    with pytest.raises(NotHermitian):
        DensityMatrix([[0.5, 0.1], [0.2, 0.5]])
    with pytest.raises(Unnormalized):
        DensityMatrix(np.eye(2))
    with pytest.raises(ValueError):
        DensityMatrix([[1.5, 0], [0, -0.5]])
    DensityMatrix(kron(Z, Z) * 0, check=False)
