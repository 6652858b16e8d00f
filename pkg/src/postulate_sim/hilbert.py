"""Finite-dimensional Hilbert-space primitives.

States are dense complex amplitude vectors over a composite space with
declared subsystem dimensions (big-endian: leftmost factor is the most
significant index).  Observables are Hermitian matrices carrying a cached
spectral decomposition in which near-equal eigenvalues are merged, so
degeneracy is an explicit, queryable property.
"""
from __future__ import annotations

import math
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, NotHermitian, PostulateSimError

NORM_TOL = 1e-10
HERM_TOL = 1e-10
DEGEN_TOL = 1e-9
# Simon at n=8 lives on 2n = 16 qubits, so the dense cap sits at 2^16
MAX_DIM = 2 ** 16


def _as_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatch(f"invalid subsystem dimensions {dims}")
    return dims


class StateVector:
    """Normalized pure state over subsystems of the given dimensions."""

    __slots__ = ("amplitudes", "dims")

    def __init__(self, amplitudes, dims=None):
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
        if dims is None:
            dims = (amps.size,)
        dims = _as_dims(dims)
        if math.prod(dims) != amps.size:
            raise DimensionMismatch(
                f"dims {dims} imply dimension {math.prod(dims)}, got {amps.size} amplitudes"
            )
        if amps.size > MAX_DIM:
            raise DimensionMismatch(f"total dimension {amps.size} exceeds cap {MAX_DIM}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise PostulateSimError(f"state not normalized: |psi| = {norm!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def from_unnormalized(cls, amplitudes, dims=None) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise PostulateSimError("cannot normalize the zero vector")
        return cls(amps / norm, dims)

    @classmethod
    def basis(cls, index: int, dims) -> "StateVector":
        dims = _as_dims(dims)
        amps = np.zeros(math.prod(dims), dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, dims)

    def reshaped(self, dims) -> "StateVector":
        """Same amplitudes under a different subsystem grouping."""
        return StateVector(self.amplitudes, dims)

    def overlap(self, other: "StateVector") -> complex:
        if self.dims != other.dims:
            raise DimensionMismatch(f"dims {self.dims} != {other.dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return f"StateVector(dim={self.dim}, dims={self.dims})"


class SpectralDecomposition:
    """Distinct sorted eigenvalues with orthonormal eigenbasis blocks.

    Eigenvalues closer than DEGEN_TOL are merged (mean value, combined
    eigenspace).  Blocks hold orthonormal eigenvectors column-wise; the dense
    projectors are derived lazily since they are quadratic in the dimension.
    """

    def __init__(self, eigenvalues: np.ndarray, blocks: list[np.ndarray]):
        self.eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        self.blocks = blocks
        self.multiplicities = tuple(b.shape[1] for b in blocks)
        self._projectors = None

    @property
    def projectors(self) -> list[np.ndarray]:
        if self._projectors is None:
            self._projectors = [b @ b.conj().T for b in self.blocks]
        return self._projectors

    @property
    def degenerate(self) -> bool:
        return any(m > 1 for m in self.multiplicities)

    def projection_norms_sq(self, amplitudes: np.ndarray) -> np.ndarray:
        """|P_i psi|^2 for every eigenvalue, via the eigenbasis blocks."""
        return np.array(
            [float(np.sum(np.abs(b.conj().T @ amplitudes) ** 2)) for b in self.blocks]
        )

    def project(self, amplitudes: np.ndarray, index: int) -> np.ndarray:
        b = self.blocks[index]
        return b @ (b.conj().T @ amplitudes)


class Observable:
    """Hermitian operator over a composite space, with cached decomposition."""

    def __init__(self, matrix, dims=None):
        mat = np.asarray(matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {mat.shape}")
        if dims is None:
            dims = (mat.shape[0],)
        dims = _as_dims(dims)
        if math.prod(dims) != mat.shape[0]:
            raise DimensionMismatch(
                f"dims {dims} imply dimension {math.prod(dims)}, got {mat.shape[0]}x{mat.shape[0]}"
            )
        herm_defect = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
        if herm_defect > HERM_TOL:
            raise NotHermitian(f"max |M - M^dag| = {herm_defect!r} exceeds {HERM_TOL}")
        self.matrix = mat
        self.dims = dims
        self._decomposition: SpectralDecomposition | None = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def decomposition(self) -> SpectralDecomposition:
        if self._decomposition is None:
            self._decomposition = spectral_decompose(self)
        return self._decomposition

    def __repr__(self):
        return f"Observable(dim={self.dim}, dims={self.dims})"


def tensor_state(a: StateVector, b: StateVector) -> StateVector:
    """Kronecker product of two states; subsystem dims concatenate."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)


def tensor_many(states) -> StateVector:
    return reduce(tensor_state, states)


def tensor_op(a: Observable, b: Observable) -> Observable:
    """Kronecker product of two Hermitian operators."""
    return Observable(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def spectral_decompose(a: Observable) -> SpectralDecomposition:
    """Eigendecomposition with near-degenerate eigenvalues merged.

    A diagonal matrix short-circuits the dense eigensolver: its eigenvalues
    are the diagonal and its eigenvectors are basis vectors.
    """
    mat = a.matrix
    diag = np.diagonal(mat)
    if np.count_nonzero(mat - np.diag(diag)) == 0 and np.max(np.abs(diag.imag), initial=0.0) == 0:
        order = np.argsort(diag.real, kind="stable")
        values = diag.real[order]
        vectors = np.eye(mat.shape[0], dtype=np.complex128)[:, order]
    else:
        values, vectors = np.linalg.eigh(mat)

    eigenvalues = []
    blocks = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > DEGEN_TOL:
            eigenvalues.append(float(np.mean(values[start:i])))
            blocks.append(np.ascontiguousarray(vectors[:, start:i]))
            start = i
    return SpectralDecomposition(np.array(eigenvalues), blocks)


def phase_equal(a: StateVector, b: StateVector, tol: float = 1e-10) -> bool:
    """True iff the states coincide up to a global phase: |<a|b>| >= 1 - tol."""
    return abs(a.overlap(b)) >= 1.0 - tol


def phase_normalize(amplitudes: np.ndarray, cutoff: float = 1e-12) -> np.ndarray:
    """Rotate a global phase so the first non-negligible amplitude is positive real."""
    amps = np.asarray(amplitudes, dtype=np.complex128)
    for c in amps:
        if abs(c) > cutoff:
            return amps * (abs(c) / c)
    return amps.copy()
