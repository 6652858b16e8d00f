"""Oracle-based quantum algorithms read out through the semantics engine.

Deutsch-Jozsa and Simon are implemented from their final superposition
states (the preceding gate sequence is irrelevant to the measurement
analysis); Grover runs the standard phase-flip/diffusion iteration. All
final readouts use the diagonal argument-register observable, which is
nondegenerate on the register it measures, so every algorithm behaves
identically under both collapse semantics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .errors import FullRank, InvalidMarkedSet, InvalidOracle, RankDeficient
from .hilbert import Observable, StateVector
from .measurement import SemanticsMode, measure, partial_measure, partial_probabilities

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class BooleanOracle:
    """Explicit truth table of f over all 2^n inputs.

    Deutsch-Jozsa oracles map to {0, 1} and must be constant or balanced.
    Simon oracles map to n-bit strings and must be exactly 2-to-1 with
    f(x) = f(y) iff y = x ^ s for a nonzero hidden period s.
    """

    def __init__(self, n: int, table, kind: str, hidden_period: Optional[int] = None):
        self.n = int(n)
        self.table = np.asarray(table, dtype=np.int64)
        self.kind = kind
        self.hidden_period = hidden_period
        if self.table.shape != (2 ** self.n,):
            raise InvalidOracle(
                f"expected {2 ** self.n} table entries for n={self.n}, got {self.table.shape}"
            )

    @classmethod
    def deutsch_jozsa(cls, n: int, table) -> "BooleanOracle":
        oracle = cls(n, table, "dj")
        t = oracle.table
        if np.any((t != 0) & (t != 1)):
            raise InvalidOracle("DJ oracle outputs must be 0 or 1")
        ones = int(t.sum())
        if ones not in (0, t.size, t.size // 2):
            raise InvalidOracle(
                f"DJ oracle is neither constant nor balanced ({ones}/{t.size} ones)"
            )
        return oracle

    @classmethod
    def simon(cls, n: int, table) -> "BooleanOracle":
        oracle = cls(n, table, "simon")
        t = oracle.table
        if np.any(t < 0) or np.any(t >= 2 ** n):
            raise InvalidOracle(f"Simon oracle outputs must fit in {n} bits")
        s = 0
        for y in range(1, t.size):
            if t[y] == t[0]:
                s = y
                break
        if s == 0:
            raise InvalidOracle("Simon oracle has no collision with input 0 (s would be 0)")
        for x in range(t.size):
            if t[x] != t[x ^ s]:
                raise InvalidOracle(f"f({x}) != f({x}^s) for derived s={s:0{n}b}")
        if len(set(t.tolist())) != t.size // 2:
            raise InvalidOracle("Simon oracle is not exactly 2-to-1")
        oracle.hidden_period = s
        return oracle

    @property
    def is_constant(self) -> bool:
        if self.kind != "dj":
            raise InvalidOracle("is_constant only applies to DJ oracles")
        return bool(np.all(self.table == self.table[0]))


def constant_oracle(n: int, value: int = 0) -> BooleanOracle:
    return BooleanOracle.deutsch_jozsa(n, np.full(2 ** n, value, dtype=np.int64))


def balanced_oracle(n: int, rng: np.random.Generator) -> BooleanOracle:
    table = np.zeros(2 ** n, dtype=np.int64)
    table[rng.permutation(2 ** n)[: 2 ** (n - 1)]] = 1
    return BooleanOracle.deutsch_jozsa(n, table)


def simon_oracle(n: int, s: int, rng: Optional[np.random.Generator] = None) -> BooleanOracle:
    """2-to-1 oracle with hidden period s; image values are coset labels,
    shuffled when an rng is supplied."""
    if not 0 < s < 2 ** n:
        raise InvalidOracle(f"hidden period must be a nonzero {n}-bit value, got {s}")
    values = np.arange(2 ** n, dtype=np.int64)
    if rng is not None:
        values = rng.permutation(values)
    table = np.empty(2 ** n, dtype=np.int64)
    label = {}
    for x in range(2 ** n):
        rep = min(x, x ^ s)
        if rep not in label:
            label[rep] = values[len(label)]
        table[x] = label[rep]
    return BooleanOracle.simon(n, table)


# ---------------------------------------------------------------------------
# Oracle truth-table files: one line per input, "inputbits outputbits".

def save_oracle(oracle: BooleanOracle, path) -> None:
    width = 1 if oracle.kind == "dj" else oracle.n
    with open(path, "w") as fh:
        for x, y in enumerate(oracle.table):
            fh.write(f"{x:0{oracle.n}b} {int(y):0{width}b}\n")


def load_oracle(path, kind: str) -> BooleanOracle:
    entries = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidOracle(f"{path}:{lineno}: expected 'input output', got {line!r}")
            try:
                entries[int(parts[0], 2)] = int(parts[1], 2)
            except ValueError as exc:
                raise InvalidOracle(f"{path}:{lineno}: {exc}") from exc
            n = len(parts[0])
    if not entries:
        raise InvalidOracle(f"{path}: empty oracle file")
    size = 2 ** n
    if sorted(entries) != list(range(size)):
        raise InvalidOracle(f"{path}: need exactly one line per {n}-bit input")
    table = np.array([entries[x] for x in range(size)], dtype=np.int64)
    if kind == "dj":
        return BooleanOracle.deutsch_jozsa(n, table)
    if kind == "simon":
        return BooleanOracle.simon(n, table)
    raise InvalidOracle(f"unknown oracle kind {kind!r}")


# ---------------------------------------------------------------------------
# Deutsch-Jozsa

@lru_cache(maxsize=None)
def argument_observable(n: int) -> Observable:
    """Diagonal register readout: eigenvalue z on basis state |z>."""
    if n < 1:
        raise ValueError("register width must be >= 1")
    return Observable(np.diag(np.arange(2 ** n, dtype=np.float64)), (2 ** n,))


def dj_final_state(oracle: BooleanOracle) -> StateVector:
    """Output state before the final readout: argument register x ancilla
    (|0> - |1>)/sqrt(2)."""
    if oracle.kind != "dj":
        raise InvalidOracle("dj_final_state expects a DJ oracle")
    arg = kernels.dj_argument_amplitudes(oracle.table)
    ancilla = np.array([_INV_SQRT2, -_INV_SQRT2])
    return StateVector(np.kron(arg, ancilla), (2,) * (oracle.n + 1))


@dataclass
class DJResult:
    verdict: str  # "constant" | "balanced"
    sampled_z: int
    zero_probability: float


def deutsch_jozsa(oracle: BooleanOracle, mode: SemanticsMode, rng: np.random.Generator) -> DJResult:
    n = oracle.n
    state = dj_final_state(oracle).reshaped((2 ** n, 2))
    obs = argument_observable(n)
    probs = partial_probabilities(obs, 0, state)
    outcome = partial_measure(obs, 0, state, mode, rng)
    z = int(round(outcome.eigenvalue))
    return DJResult(
        verdict="constant" if z == 0 else "balanced",
        sampled_z=z,
        zero_probability=float(probs[0]),
    )


# ---------------------------------------------------------------------------
# Simon

def simon_final_state(oracle: BooleanOracle) -> StateVector:
    """Output state over argument x function registers (n bits each)."""
    if oracle.kind != "simon":
        raise InvalidOracle("simon_final_state expects a Simon oracle")
    amps = kernels.simon_state_amplitudes(oracle.table)
    return StateVector(amps, (2,) * (2 * oracle.n))


@dataclass
class Gf2System:
    """Accumulated GF(2) constraint rows of width n."""
    width: int
    rows: list = field(default_factory=list)

    def add(self, row) -> None:
        row = np.asarray(row, dtype=np.uint8)
        if row.shape != (self.width,):
            raise ValueError(f"row width {row.shape} != {self.width}")
        self.rows.append(row)

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.width), dtype=np.uint8)
        return np.array(self.rows, dtype=np.uint8)

    def rank(self) -> int:
        return kernels.gf2_rref(self.matrix().copy())


@dataclass
class Gf2Solution:
    vector: np.ndarray
    ambiguous: bool  # rank < width - 1: solution not unique


def gf2_solve(system: Gf2System) -> Gf2Solution:
    """Nonzero nullspace vector of the system via Gaussian elimination."""
    n = system.width
    reduced = system.matrix().copy()
    rank = kernels.gf2_rref(reduced)
    if rank == n:
        raise FullRank("system has full rank; only the zero vector satisfies it")
    pivots = []
    col = 0
    for r in range(rank):
        while not reduced[r, col]:
            col += 1
        pivots.append(col)
        col += 1
    free_cols = [c for c in range(n) if c not in pivots]
    v = np.zeros(n, dtype=np.uint8)
    fc = free_cols[0]
    v[fc] = 1
    for r, pc in enumerate(pivots):
        v[pc] = reduced[r, fc]
    return Gf2Solution(vector=v, ambiguous=rank < n - 1)


def _bits(x: int, n: int) -> np.ndarray:
    return np.array([(x >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def _bits_to_int(bits: np.ndarray) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


@dataclass
class SimonResult:
    period: int
    samples: list
    sample_count: int


def simon(
    oracle: BooleanOracle,
    mode: SemanticsMode,
    rng: np.random.Generator,
    max_samples: int = 50,
) -> SimonResult:
    """Sample argument-register readouts until n-1 independent constraints
    accumulate, then recover the hidden period over GF(2)."""
    n = oracle.n
    if max_samples < n - 1:
        raise ValueError(f"max_samples={max_samples} < n-1={n - 1}")
    state = simon_final_state(oracle).reshaped((2 ** n, 2 ** n))
    obs = argument_observable(n)
    system = Gf2System(width=n)
    samples = []
    for _ in range(max_samples):
        if system.rank() == n - 1:
            break
        outcome = partial_measure(obs, 0, state, mode, rng)
        j = int(round(outcome.eigenvalue))
        samples.append(j)
        system.add(_bits(j, n))
    if system.rank() != n - 1:
        raise RankDeficient(
            f"rank {system.rank()} < {n - 1} after {max_samples} samples; retry with more"
        )
    solution = gf2_solve(system)
    return SimonResult(
        period=_bits_to_int(solution.vector),
        samples=samples,
        sample_count=len(samples),
    )


# ---------------------------------------------------------------------------
# Grover

@dataclass
class GroverResult:
    found: int
    marked_probability: float
    iterations: int
    hit: bool


def grover_iterations(n: int, marked_count: int) -> int:
    return int(math.floor((math.pi / 4.0) * math.sqrt(2 ** n / marked_count)))


def grover(n: int, marked, mode: SemanticsMode, rng: np.random.Generator) -> GroverResult:
    """Standard Grover search over 2^n items; reports the sampled index and
    the exact Born probability of landing in the marked set."""
    size = 2 ** n
    marked = sorted(set(int(m) for m in marked))
    if not marked or len(marked) >= size:
        raise InvalidMarkedSet(f"need 1 <= |marked| < {size}, got {len(marked)}")
    if marked[0] < 0 or marked[-1] >= size:
        raise InvalidMarkedSet(f"marked indices must lie in [0, {size})")
    iters = grover_iterations(n, len(marked))
    amps = kernels.grover_amplitudes(n, np.array(marked, dtype=np.int64), iters)
    state = StateVector(amps, (size,))
    marked_prob = float(np.sum(np.abs(amps[marked]) ** 2))
    outcome = measure(argument_observable(n), state, mode, rng)
    found = int(round(outcome.eigenvalue))
    return GroverResult(
        found=found,
        marked_probability=marked_prob,
        iterations=iters,
        hit=found in marked,
    )
