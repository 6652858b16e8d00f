import numpy as np
import pytest

from postulate_sim.errors import DimensionMismatch, NotHermitian, PostulateSimError
from postulate_sim.hilbert import (
    Observable,
    StateVector,
    phase_equal,
    spectral_decompose,
    tensor_op,
    tensor_state,
)

INV_SQRT2 = 1 / np.sqrt(2)

KET0 = StateVector([1, 0])
KET1 = StateVector([0, 1])
PLUS = StateVector([INV_SQRT2, INV_SQRT2])

SIGMA3 = Observable([[1, 0], [0, -1]])
IDENTITY2 = Observable(np.eye(2))


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Observable((m + m.conj().T) / 2)


def random_state(rng, dim, dims=None):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(v / np.linalg.norm(v), dims)


def bell_phi_plus():
    return StateVector(np.array([1, 0, 0, 1]) * INV_SQRT2, (2, 2))


class TestStateVector:
    def test_rejects_unnormalized(self):
        with pytest.raises(PostulateSimError):
            StateVector([1, 1])

    def test_rejects_bad_dims(self):
        with pytest.raises(DimensionMismatch):
            StateVector([1, 0, 0], (2, 2))

    def test_immutable(self):
        with pytest.raises(AttributeError):
            KET0.amplitudes = np.array([0, 1])
        with pytest.raises(ValueError):
            KET0.amplitudes[0] = 0

    def test_basis(self):
        s = StateVector.basis(2, (2, 2))
        np.testing.assert_array_equal(s.amplitudes, [0, 0, 1, 0])


class TestTensorState:
    def test_basis_case(self):
        s = tensor_state(KET0, KET0)
        np.testing.assert_allclose(s.amplitudes, [1, 0, 0, 0])
        assert s.dims == (2, 2)

    def test_input_times_bell_pair(self):
        # 8-amplitude pre-measurement state: (a|0>+b|1>) x (|00>+|11>)/sqrt2
        a, b = 0.6, 0.8j
        psi = StateVector([a, b])
        s = tensor_state(psi, bell_phi_plus())
        expected = np.array([a, 0, 0, a, b, 0, 0, b]) * INV_SQRT2
        np.testing.assert_allclose(s.amplitudes, expected, atol=1e-12)
        assert s.dims == (2, 2, 2)

    def test_plus_plus(self):
        s = tensor_state(PLUS, PLUS)
        np.testing.assert_allclose(s.amplitudes, [0.5] * 4, atol=1e-12)

    def test_norm_multiplicative(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            a = random_state(rng, 3)
            b = random_state(rng, 4)
            s = tensor_state(a, b)
            assert abs(np.linalg.norm(s.amplitudes) - 1.0) < 1e-12


class TestTensorOp:
    def test_sigma3_tensor_identity(self):
        op = tensor_op(SIGMA3, IDENTITY2)
        np.testing.assert_allclose(op.matrix, np.diag([1, 1, -1, -1]))
        dec = op.decomposition
        np.testing.assert_allclose(dec.eigenvalues, [-1, 1])
        assert dec.multiplicities == (2, 2)
        assert dec.degenerate

    def test_identity_tensor_identity(self):
        dec = tensor_op(IDENTITY2, IDENTITY2).decomposition
        np.testing.assert_allclose(dec.eigenvalues, [1])
        assert dec.multiplicities == (4,)

    def test_sigma3_tensor_sigma3(self):
        op = tensor_op(SIGMA3, SIGMA3)
        np.testing.assert_allclose(op.matrix, np.diag([1, -1, -1, 1]))

    def test_spectrum_multiplicity_scaling(self):
        # independent oracle: full eigensolve of the kron product
        rng = np.random.default_rng(11)
        for dim, m in [(2, 3), (3, 2), (4, 4)]:
            a = random_hermitian(rng, dim)
            lifted = tensor_op(a, Observable(np.eye(m)))
            expected = np.sort(np.repeat(np.linalg.eigvalsh(a.matrix), m))
            actual = np.sort(np.linalg.eigvalsh(lifted.matrix))
            np.testing.assert_allclose(actual, expected, atol=1e-9)
            dec = lifted.decomposition
            base = a.decomposition
            np.testing.assert_allclose(dec.eigenvalues, base.eigenvalues, atol=1e-9)
            assert dec.multiplicities == tuple(mm * m for mm in base.multiplicities)


class TestSpectralDecompose:
    def test_sigma3(self):
        dec = SIGMA3.decomposition
        np.testing.assert_allclose(dec.eigenvalues, [-1, 1])
        np.testing.assert_allclose(dec.projectors[0], [[0, 0], [0, 1]], atol=1e-12)
        np.testing.assert_allclose(dec.projectors[1], [[1, 0], [0, 0]], atol=1e-12)
        assert dec.multiplicities == (1, 1)
        assert not dec.degenerate

    def test_bell_observable_rank_one(self):
        from postulate_sim.protocols import bell_basis_observable
        dec = bell_basis_observable().decomposition
        np.testing.assert_allclose(dec.eigenvalues, [0, 1, 2, 3], atol=1e-12)
        assert dec.multiplicities == (1, 1, 1, 1)
        recon = sum(ev * p for ev, p in zip(dec.eigenvalues, dec.projectors))
        np.testing.assert_allclose(recon, bell_basis_observable().matrix, atol=1e-9)

    def test_bell_observable_lifted_degenerate(self):
        from postulate_sim.protocols import bell_basis_observable
        lifted = tensor_op(bell_basis_observable(), IDENTITY2)
        dec = lifted.decomposition
        np.testing.assert_allclose(dec.eigenvalues, [0, 1, 2, 3], atol=1e-9)
        assert dec.multiplicities == (2, 2, 2, 2)
        assert dec.degenerate

    def test_not_hermitian_rejected(self):
        with pytest.raises(NotHermitian):
            Observable([[0, 1], [0, 0]])

    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_random_hermitian_invariants(self, dim):
        rng = np.random.default_rng(dim)
        for _ in range(10):
            a = random_hermitian(rng, dim)
            dec = spectral_decompose(a)
            projs = dec.projectors
            total = sum(projs)
            np.testing.assert_allclose(total, np.eye(dim), atol=1e-9)
            recon = sum(ev * p for ev, p in zip(dec.eigenvalues, projs))
            np.testing.assert_allclose(recon, a.matrix, atol=1e-9)
            for i, p in enumerate(projs):
                np.testing.assert_allclose(p, p.conj().T, atol=1e-9)
                np.testing.assert_allclose(p @ p, p, atol=1e-9)
                for j in range(i):
                    np.testing.assert_allclose(p @ projs[j], 0, atol=1e-9)
            assert list(dec.eigenvalues) == sorted(dec.eigenvalues)


class TestPhaseEqual:
    def test_global_phase(self):
        rotated = StateVector(np.exp(1j * np.pi / 3) * KET0.amplitudes)
        assert phase_equal(KET0, rotated, 1e-10)

    def test_orthogonal(self):
        assert not phase_equal(KET0, KET1, 1e-10)

    def test_sign_flip(self):
        assert phase_equal(PLUS, StateVector(-PLUS.amplitudes), 1e-10)

    def test_dims_mismatch(self):
        with pytest.raises(DimensionMismatch):
            phase_equal(KET0, bell_phi_plus(), 1e-10)
