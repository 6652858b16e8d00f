"""Measurement semantics engine.

Two collapse rules are implemented side by side:

* Lueders: the post-state is the renormalized projection of the input onto
  the outcome eigenspace, degenerate or not.
* Strict von Neumann: a nondegenerate outcome collapses to the eigenvector;
  a degenerate outcome leaves the post-state undetermined (the outcome still
  carries the eigenprojector, and the Lueders state as a diagnostic, so the
  two semantics can be contrasted in reports).

Partial measurement of a locally nondegenerate observable follows the
composite-space Born rule for probabilities and always pins the measured
subsystem to the outcome eigenstate.
"""
from __future__ import annotations

import enum
import math
from typing import Callable, Optional

import numpy as np

from .errors import (
    DegenerateLocalObservable,
    DimensionMismatch,
    IndexOutOfRange,
    NotHermitian,
)
from .hilbert import (
    Observable,
    SpectralDecomposition,
    StateVector,
    phase_normalize,
)

COMMUTATOR_TOL = 1e-9


class SemanticsMode(enum.Enum):
    STRICT_VON_NEUMANN = "von-neumann"
    LUEDERS = "lueders"

    @classmethod
    def from_string(cls, s: str) -> "SemanticsMode":
        for mode in cls:
            if mode.value == s:
                return mode
        raise ValueError(f"unknown semantics mode {s!r}; expected 'von-neumann' or 'lueders'")

    def __str__(self):
        return self.value


class MeasurementOutcome:
    """One sampled measurement result.

    `determined` is False only in strict von Neumann mode on a degenerate
    outcome, in which case `post_state` is None and `lueders_post_state`
    records what the other semantics would have claimed.
    """

    def __init__(
        self,
        eigenvalue: float,
        probability: float,
        determined: bool,
        mode: SemanticsMode,
        post_state: Optional[StateVector],
        projector_fn: Callable[[], np.ndarray],
        projector_rank: int,
        lueders_post_state: Optional[StateVector] = None,
        subsystem_post_state: Optional[StateVector] = None,
    ):
        self.eigenvalue = eigenvalue
        self.probability = probability
        self.determined = determined
        self.mode = mode
        self.post_state = post_state
        self.projector_rank = projector_rank
        self.lueders_post_state = lueders_post_state
        self.subsystem_post_state = subsystem_post_state
        self._projector_fn = projector_fn
        self._projector = None

    @property
    def eigenprojector(self) -> np.ndarray:
        if self._projector is None:
            self._projector = self._projector_fn()
        return self._projector

    def __repr__(self):
        return (
            f"MeasurementOutcome(eigenvalue={self.eigenvalue}, "
            f"probability={self.probability:.6g}, determined={self.determined})"
        )


class RefinementObservable:
    """Nondegenerate C with a value map f such that f(C) reconstructs A."""

    def __init__(self, refined: Observable, value_map: dict[int, float]):
        self.refined = refined
        self.value_map = dict(value_map)

    def apply_map(self) -> np.ndarray:
        """Assemble f(C) from C's spectral decomposition."""
        dec = self.refined.decomposition
        mat = np.zeros_like(self.refined.matrix)
        for i, ev in enumerate(dec.eigenvalues):
            mat += self.value_map[int(round(ev))] * dec.projectors[i]
        return mat


def _check_state(a: Observable, psi: StateVector):
    if a.dim != psi.dim:
        raise DimensionMismatch(f"operator dim {a.dim} != state dim {psi.dim}")


def born_probability(a: Observable, eigenvalue_index: int, psi: StateVector) -> float:
    """Probability of the eigenvalue at the given index: |P_i psi|^2."""
    _check_state(a, psi)
    dec = a.decomposition
    if not 0 <= eigenvalue_index < len(dec.eigenvalues):
        raise IndexOutOfRange(
            f"eigenvalue index {eigenvalue_index} out of range [0, {len(dec.eigenvalues)})"
        )
    b = dec.blocks[eigenvalue_index]
    return float(np.sum(np.abs(b.conj().T @ psi.amplitudes) ** 2))


def born_probabilities(a: Observable, psi: StateVector) -> np.ndarray:
    _check_state(a, psi)
    return a.decomposition.projection_norms_sq(psi.amplitudes)


def sample_index(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    """Draw an index with the given probabilities; never a zero-probability one."""
    r = rng.random() * float(np.sum(probabilities))
    acc = 0.0
    last_nonzero = 0
    for i, p in enumerate(probabilities):
        if p > 0.0:
            last_nonzero = i
            acc += p
            if r < acc:
                return i
    return last_nonzero


def measure(
    a: Observable,
    psi: StateVector,
    mode: SemanticsMode,
    rng: np.random.Generator,
    force_index: Optional[int] = None,
) -> MeasurementOutcome:
    """Sample one outcome of measuring `a` on `psi` under the given semantics.

    `force_index` selects an eigenvalue deterministically (must have nonzero
    probability); used for exhaustive branch coverage in tests and protocols.
    """
    _check_state(a, psi)
    dec = a.decomposition
    probs = dec.projection_norms_sq(psi.amplitudes)
    if force_index is not None:
        if not 0 <= force_index < len(probs):
            raise IndexOutOfRange(f"forced index {force_index} out of range")
        idx = force_index
    else:
        idx = sample_index(probs, rng)
    return _build_outcome(dec, psi, mode, idx, probs[idx])


def _build_outcome(
    dec: SpectralDecomposition,
    psi: StateVector,
    mode: SemanticsMode,
    idx: int,
    prob: float,
) -> MeasurementOutcome:
    block = dec.blocks[idx]
    mult = block.shape[1]
    projected = dec.project(psi.amplitudes, idx)
    norm = np.linalg.norm(projected)
    lueders = StateVector(projected / norm, psi.dims) if norm > 0 else None

    if mode is SemanticsMode.LUEDERS:
        post, determined = lueders, True
    elif mult == 1:
        post = StateVector(phase_normalize(block[:, 0]), psi.dims)
        determined = True
    else:
        post, determined = None, False

    return MeasurementOutcome(
        eigenvalue=float(dec.eigenvalues[idx]),
        probability=float(prob),
        determined=determined,
        mode=mode,
        post_state=post,
        projector_fn=lambda: block @ block.conj().T,
        projector_rank=mult,
        lueders_post_state=None if determined else lueders,
    )


def lift(a: Observable, subsystem: int, dims) -> Observable:
    """Embed a local observable as I x ... x a x ... x I on the composite space."""
    dims = tuple(int(d) for d in dims)
    if not 0 <= subsystem < len(dims):
        raise IndexOutOfRange(f"subsystem {subsystem} out of range for dims {dims}")
    if a.dim != dims[subsystem]:
        raise DimensionMismatch(
            f"operator dim {a.dim} != subsystem dim {dims[subsystem]}"
        )
    before = math.prod(dims[:subsystem])
    after = math.prod(dims[subsystem + 1:])
    mat = np.kron(np.kron(np.eye(before), a.matrix), np.eye(after))
    return Observable(mat, dims)


def partial_probabilities(a: Observable, subsystem: int, psi: StateVector) -> np.ndarray:
    """Born probabilities of a local measurement: |(E_j x I) psi|^2 per eigenvalue."""
    dec, mat = _local_context(a, subsystem, psi)
    return _local_probs(dec, mat)


def _local_context(a: Observable, subsystem: int, psi: StateVector):
    dims = psi.dims
    if not 0 <= subsystem < len(dims):
        raise IndexOutOfRange(f"subsystem {subsystem} out of range for dims {dims}")
    if a.dim != dims[subsystem]:
        raise DimensionMismatch(
            f"operator dim {a.dim} != subsystem dim {dims[subsystem]}"
        )
    dec = a.decomposition
    if dec.degenerate:
        raise DegenerateLocalObservable(
            "local observable is degenerate on its own subsystem; "
            "measure the lifted operator instead"
        )
    before = math.prod(dims[:subsystem])
    after = math.prod(dims[subsystem + 1:])
    # (before, d, after) with the measured factor on its own axis
    mat = psi.amplitudes.reshape(before, a.dim, after)
    return dec, mat


def _local_probs(dec: SpectralDecomposition, mat: np.ndarray) -> np.ndarray:
    # vectors of the nondegenerate local basis, columns -> (d, d)
    basis = np.hstack(dec.blocks)
    comps = np.einsum("dj,bda->jba", basis.conj(), mat)
    return np.sum(np.abs(comps) ** 2, axis=(1, 2))


def partial_measure(
    a: Observable,
    subsystem: int,
    psi: StateVector,
    mode: SemanticsMode,
    rng: np.random.Generator,
    force_index: Optional[int] = None,
) -> MeasurementOutcome:
    """Measure a locally nondegenerate observable on one subsystem.

    Probabilities follow the composite-space Born rule. The composite
    Lueders post-state factorizes with the measured subsystem in the outcome
    eigenstate; that subsystem eigenstate is reported in every mode. Under
    strict von Neumann semantics the lifted operator is degenerate whenever
    the rest of the system is nontrivial, so the composite post-state is then
    left undetermined.
    """
    dec, mat = _local_context(a, subsystem, psi)
    basis = np.hstack(dec.blocks)
    comps = np.einsum("dj,bda->jba", basis.conj(), mat)
    probs = np.sum(np.abs(comps) ** 2, axis=(1, 2))
    if force_index is not None:
        if not 0 <= force_index < len(probs):
            raise IndexOutOfRange(f"forced index {force_index} out of range")
        idx = force_index
    else:
        idx = sample_index(probs, rng)

    rest_dim = psi.dim // a.dim
    local_vec = phase_normalize(basis[:, idx])
    local_state = StateVector(local_vec, (a.dim,))

    # |alpha_j> x phi, reassembled in the original axis order
    projected = np.einsum("d,ba->bda", basis[:, idx], comps[idx]).reshape(-1)
    norm = np.linalg.norm(projected)
    lueders = StateVector(projected / norm, psi.dims) if norm > 0 else None

    if mode is SemanticsMode.LUEDERS:
        post, determined = lueders, True
    elif rest_dim == 1:
        post = StateVector(phase_normalize(projected / norm), psi.dims)
        determined = True
    else:
        post, determined = None, False

    dims = psi.dims

    def lifted_projector():
        p_local = np.outer(basis[:, idx], basis[:, idx].conj())
        before = math.prod(dims[:subsystem])
        after = math.prod(dims[subsystem + 1:])
        return np.kron(np.kron(np.eye(before), p_local), np.eye(after))

    return MeasurementOutcome(
        eigenvalue=float(dec.eigenvalues[idx]),
        probability=float(probs[idx]),
        determined=determined,
        mode=mode,
        post_state=post,
        projector_fn=lifted_projector,
        projector_rank=rest_dim,
        lueders_post_state=None if determined else lueders,
        subsystem_post_state=local_state,
    )


def build_refinement(a: Observable) -> RefinementObservable:
    """Construct a nondegenerate compatible C and the map f with f(C) = A.

    Within every eigenspace the eigensolver's orthonormal vectors are kept in
    index order (re-orthonormalized defensively); the refined observable
    assigns the plain labels 0..N-1 across that basis.
    """
    dec = a.decomposition
    mat = np.zeros_like(a.matrix)
    value_map: dict[int, float] = {}
    label = 0
    for ev, block in zip(dec.eigenvalues, dec.blocks):
        block = _gram_schmidt(block)
        for k in range(block.shape[1]):
            v = block[:, k]
            mat += label * np.outer(v, v.conj())
            value_map[label] = float(ev)
            label += 1
    refined = Observable((mat + mat.conj().T) / 2, a.dims)
    return RefinementObservable(refined, value_map)


def _gram_schmidt(block: np.ndarray) -> np.ndarray:
    out = np.array(block, dtype=np.complex128)
    for k in range(out.shape[1]):
        for j in range(k):
            out[:, k] -= np.vdot(out[:, j], out[:, k]) * out[:, j]
        out[:, k] /= np.linalg.norm(out[:, k])
    return out
