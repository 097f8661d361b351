"""Dense pure-state vectors over n qubits.

Basis index ``x`` encodes the bit string ``x1 x2 ... xn`` with qubit 1 as the
most significant bit, so reshaping the amplitude array to ``(2,) * n`` puts
qubit ``k`` on axis ``k - 1``. Qubits are numbered from 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from sepsim.oracles import BooleanOracle, VectorOracle

MAX_QUBITS = 24
NORM_TOL = 1e-6

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


class NormalizationError(ValueError):
    """Raised when an operation requires a unit-norm state and gets something else."""


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}, got {n!r}")


@dataclass(frozen=True)
class StateVector:
    """Immutable amplitude array of length ``2**n``."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        _check_n(self.n)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape[0] != 1 << self.n:
            raise ValueError(
                f"expected {1 << self.n} amplitudes for n={self.n}, got {amps.shape[0]}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex] | np.ndarray) -> StateVector:
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(amps.shape[0]).bit_length() - 1
        if n < 1 or amps.shape[0] != 1 << n:
            raise ValueError(f"amplitude count {amps.shape[0]} is not a power of two >= 2")
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def require_normalized(self, tol: float = NORM_TOL) -> None:
        dev = abs(self.norm_squared() - 1.0)
        if dev > tol:
            raise NormalizationError(f"state norm deviates from 1 by {dev:.3g}")

    def tensor(self) -> np.ndarray:
        """Read-only view with one axis per qubit."""
        return self.amplitudes.reshape((2,) * self.n)

    def kron(self, other: StateVector) -> StateVector:
        return StateVector(self.n + other.n, np.kron(self.amplitudes, other.amplitudes))

    def allclose(self, other: StateVector, atol: float = 1e-12) -> bool:
        return self.n == other.n and bool(
            np.max(np.abs(self.amplitudes - other.amplitudes)) <= atol
        )

    def __repr__(self) -> str:
        return f"StateVector(n={self.n})"


@dataclass(frozen=True)
class MeasurementOutcome:
    bits: str
    state: StateVector
    probability: float

    @property
    def value(self) -> int:
        return int(self.bits, 2)


def basis_state(n: int, x: int) -> StateVector:
    _check_n(n)
    if not 0 <= x < 1 << n:
        raise ValueError(f"basis index {x} out of range for n={n}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[x] = 1.0
    return StateVector(n, amps)


def uniform_state(n: int) -> StateVector:
    """The equal superposition over all ``2**n`` basis states."""
    _check_n(n)
    return StateVector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128))


def _qubit_list(n: int, qubits: Iterable[int] | None) -> list[int]:
    if qubits is None:
        return list(range(1, n + 1))
    qs = [int(q) for q in qubits]
    if len(set(qs)) != len(qs):
        raise ValueError(f"duplicate qubit indices in {qs}")
    for q in qs:
        if not 1 <= q <= n:
            raise ValueError(f"qubit index {q} out of range 1..{n}")
    return qs


def hadamard_layer(state: StateVector, qubits: Iterable[int] | None = None) -> StateVector:
    """Apply H to each listed qubit (all qubits when ``qubits`` is None)."""
    n = state.n
    qs = _qubit_list(n, qubits)
    amps = state.amplitudes.copy()
    for q in qs:
        view = amps.reshape(1 << (q - 1), 2, 1 << (n - q))
        a0 = view[:, 0, :].copy()
        a1 = view[:, 1, :]
        view[:, 0, :] = (a0 + a1) * _INV_SQRT2
        view[:, 1, :] = (a0 - a1) * _INV_SQRT2
    return StateVector(n, amps)


def _phase_table(f: BooleanOracle | np.ndarray | Sequence[int], n: int) -> np.ndarray:
    from sepsim.oracles import BooleanOracle

    if isinstance(f, BooleanOracle):
        if f.n != n:
            raise ValueError(f"oracle width {f.n} does not match state width {n}")
        f.note_application()
        return f.table
    table = np.asarray(f, dtype=np.uint8).reshape(-1)
    if table.shape[0] != 1 << n:
        raise ValueError(f"truth table length {table.shape[0]} does not match n={n}")
    return table


def apply_phase_oracle(state: StateVector, f: BooleanOracle | np.ndarray | Sequence[int]) -> StateVector:
    """Multiply amplitude ``x`` by ``(-1)**f(x)``.

    Passing a :class:`BooleanOracle` counts as one quantum query on it; a
    bare truth table is applied silently.
    """
    table = _phase_table(f, state.n)
    signs = 1.0 - 2.0 * table.astype(np.float64)
    return StateVector(state.n, state.amplitudes * signs)


def apply_diagonal(state: StateVector, diagonal: np.ndarray) -> StateVector:
    diagonal = np.asarray(diagonal, dtype=np.complex128).reshape(-1)
    if diagonal.shape[0] != state.dim:
        raise ValueError("diagonal length does not match state dimension")
    return StateVector(state.n, state.amplitudes * diagonal)


def apply_standard_oracle(
    state: StateVector,
    f: BooleanOracle | VectorOracle | np.ndarray | Sequence[int],
    m: int | None = None,
) -> StateVector:
    """Map ``|x>|y>`` to ``|x>|y XOR f(x)>``.

    ``x`` lives on the high ``n`` qubits and ``y`` on the low ``m``. For a
    bare table of outputs, ``m`` must be given; oracle objects carry it.
    """
    from sepsim.oracles import BooleanOracle, VectorOracle

    if isinstance(f, BooleanOracle):
        table, m = f.table.astype(np.int64), 1
        f.note_application()
    elif isinstance(f, VectorOracle):
        table, m = f.table.astype(np.int64), f.n
        f.note_application()
    else:
        if m is None:
            raise ValueError("output width m is required for a bare function table")
        table = np.asarray(f, dtype=np.int64).reshape(-1)
    n = int(table.shape[0]).bit_length() - 1
    if table.shape[0] != 1 << n or n + m != state.n:
        raise ValueError(
            f"oracle {n}->{m} bits does not fit a {state.n}-qubit state"
        )
    if np.any(table < 0) or np.any(table >= 1 << m):
        raise ValueError(f"oracle outputs must fit in {m} bits")
    xs = np.arange(1 << n, dtype=np.int64)[:, None]
    ys = np.arange(1 << m, dtype=np.int64)[None, :]
    dest = (xs << m) | (ys ^ table[:, None])
    amps = np.empty_like(state.amplitudes)
    amps[dest.reshape(-1)] = state.amplitudes
    return StateVector(state.n, amps)


def measure_subset(
    state: StateVector,
    qubits: Iterable[int],
    rng: np.random.Generator,
) -> MeasurementOutcome:
    """Projectively measure ``qubits`` in the computational basis.

    Outcome bits are listed in ascending qubit order. The collapsed state
    keeps all ``n`` qubits.
    """
    qs = sorted(_qubit_list(state.n, qubits))
    if not qs:
        raise ValueError("must measure at least one qubit")
    state.require_normalized()
    n = state.n
    probs_full = np.abs(state.amplitudes) ** 2
    idx = np.arange(state.dim, dtype=np.int64)
    keys = np.zeros(state.dim, dtype=np.int64)
    for q in qs:
        keys = (keys << 1) | ((idx >> (n - q)) & 1)
    weights = np.bincount(keys, weights=probs_full, minlength=1 << len(qs))
    cumulative = np.cumsum(weights)
    u = rng.random() * cumulative[-1]
    outcome = int(np.searchsorted(cumulative, u, side="right"))
    outcome = min(outcome, len(weights) - 1)
    while weights[outcome] == 0.0:  # clamped onto a trailing empty branch
        outcome -= 1
    prob = float(weights[outcome])
    amps = np.where(keys == outcome, state.amplitudes, 0.0) / np.sqrt(prob)
    bits = format(outcome, f"0{len(qs)}b")
    return MeasurementOutcome(bits, StateVector(n, amps), prob)


def outcome_probability(state: StateVector, x: int) -> float:
    return float(abs(state.amplitudes[x]) ** 2)


def read_state_file(path: str | Path) -> StateVector:
    """Parse the text format: ``n`` on line 1, then ``2**n`` lines of ``re im``."""
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty state file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ValueError(f"{path}: first line must be the qubit count") from None
    _check_n(n)
    body = lines[1:]
    if len(body) != 1 << n:
        raise ValueError(f"{path}: expected {1 << n} amplitude lines, found {len(body)}")
    amps = np.empty(1 << n, dtype=np.complex128)
    for i, ln in enumerate(body):
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: line {i + 2} must hold 're im'")
        amps[i] = complex(float(parts[0]), float(parts[1]))
    return StateVector(n, amps)


def write_state_file(state: StateVector, path: str | Path) -> None:
    rows = [str(state.n)]
    rows += [f"{a.real!r} {a.imag!r}" for a in state.amplitudes.tolist()]
    Path(path).write_text("\n".join(rows) + "\n")
