"""Teleportation of one qubit through a shared Bell pair.

The sender measures her two qubits in the Bell basis; the receiver applies
a Pauli correction keyed by two classical bits. Under Lueders semantics the
protocol succeeds exactly. Under strict von Neumann semantics the Bell
observable, lifted to the three-qubit space, is degenerate (every
eigenvalue has multiplicity two), so the measurement determines no
post-state and the protocol reports itself blocked.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .hilbert import Observable, StateVector, phase_normalize, tensor_state
from .measurement import MeasurementOutcome, SemanticsMode, lift, measure

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class BellKind(enum.Enum):
    PHI_PLUS = 0
    PHI_MINUS = 1
    PSI_PLUS = 2
    PSI_MINUS = 3

    @property
    def label(self) -> str:
        return {0: "phi+", 1: "phi-", 2: "psi+", 3: "psi-"}[self.value]

    @property
    def classical_bits(self) -> tuple[int, int]:
        return (self.value >> 1, self.value & 1)


@dataclass
class DegeneracyReport:
    dimension: int
    distinct_eigenvalues: int
    multiplicities: list[int]


@dataclass
class TeleportResult:
    outcome_kind: BellKind
    classical_bits: tuple[int, int]
    bob_state_before_correction: Optional[StateVector]
    correction: str
    bob_state_after_correction: Optional[StateVector]
    blocked: Optional[DegeneracyReport]
    probability: float


def bell_state(kind: BellKind) -> StateVector:
    amps = {
        BellKind.PHI_PLUS: [1, 0, 0, 1],
        BellKind.PHI_MINUS: [1, 0, 0, -1],
        BellKind.PSI_PLUS: [0, 1, 1, 0],
        BellKind.PSI_MINUS: [0, 1, -1, 0],
    }[kind]
    return StateVector(np.array(amps, dtype=np.complex128) * _INV_SQRT2, (2, 2))


@lru_cache(maxsize=1)
def bell_basis_observable() -> Observable:
    """Eigenvalue k on the k-th Bell state; nondegenerate on two qubits."""
    mat = np.zeros((4, 4), dtype=np.complex128)
    for kind in BellKind:
        v = bell_state(kind).amplitudes
        mat += kind.value * np.outer(v, v.conj())
    return Observable(mat, (2, 2))


_CORRECTIONS = {
    BellKind.PHI_PLUS: ("I", np.eye(2, dtype=np.complex128)),
    BellKind.PHI_MINUS: ("sigma3", np.array([[1, 0], [0, -1]], dtype=np.complex128)),
    BellKind.PSI_PLUS: ("sigma1", np.array([[0, 1], [1, 0]], dtype=np.complex128)),
    BellKind.PSI_MINUS: ("sigma3*sigma1", np.array([[0, 1], [-1, 0]], dtype=np.complex128)),
}


def correction_gate(kind: BellKind) -> np.ndarray:
    return _CORRECTIONS[kind][1].copy()


@lru_cache(maxsize=1)
def lifted_bell_observable() -> Observable:
    return lift(bell_basis_observable(), 0, (4, 2))


def teleport(
    psi_in: StateVector,
    mode: SemanticsMode,
    rng: Optional[np.random.Generator] = None,
    force_outcome: Optional[BellKind] = None,
) -> TeleportResult:
    """Run one teleportation trial; `force_outcome` pins the Bell branch."""
    if psi_in.dim != 2:
        raise ValueError("teleport expects a single-qubit input state")
    total = tensor_state(psi_in.reshaped((2,)), bell_state(BellKind.PHI_PLUS))
    # sender's two qubits grouped into one 4-dim factor, receiver keeps the last
    total = total.reshaped((4, 2))

    observable = lifted_bell_observable()
    force_index = None if force_outcome is None else force_outcome.value
    outcome = measure(observable, total, mode, rng, force_index=force_index)
    kind = BellKind(int(round(outcome.eigenvalue)))
    label, gate = _CORRECTIONS[kind]

    if mode is SemanticsMode.STRICT_VON_NEUMANN:
        dec = observable.decomposition
        report = DegeneracyReport(
            dimension=observable.dim,
            distinct_eigenvalues=len(dec.eigenvalues),
            multiplicities=list(dec.multiplicities),
        )
        return TeleportResult(
            outcome_kind=kind,
            classical_bits=kind.classical_bits,
            bob_state_before_correction=None,
            correction=label,
            bob_state_after_correction=None,
            blocked=report,
            probability=outcome.probability,
        )

    bob_before = _extract_receiver_state(outcome, kind)
    bob_after = StateVector(phase_normalize(gate @ bob_before.amplitudes), (2,))
    return TeleportResult(
        outcome_kind=kind,
        classical_bits=kind.classical_bits,
        bob_state_before_correction=bob_before,
        correction=label,
        bob_state_after_correction=bob_after,
        blocked=None,
        probability=outcome.probability,
    )


def _extract_receiver_state(outcome: MeasurementOutcome, kind: BellKind) -> StateVector:
    # post-state is |B_k> x phi; contract out the Bell factor
    post = outcome.post_state.amplitudes.reshape(4, 2)
    bell = bell_state(kind).amplitudes
    phi = bell.conj() @ post
    return StateVector(phase_normalize(phi / np.linalg.norm(phi)), (2,))
