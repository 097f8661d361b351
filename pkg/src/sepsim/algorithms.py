"""Deutsch-Jozsa, Simon and Grover runs with a separability verdict per step."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from sepsim.oracles import (
    BooleanOracle,
    PromiseClass,
    PromiseViolationError,
    VectorOracle,
    classify,
    dot2,
)
from sepsim.separability import DEFAULT_TOL, SeparabilityVerdict, factor_state
from sepsim.state import (
    StateVector,
    apply_phase_oracle,
    apply_standard_oracle,
    basis_state,
    hadamard_layer,
    measure_subset,
    uniform_state,
)

DJ_DECISION_TOL = 1e-9


@dataclass(frozen=True)
class TraceStep:
    label: str
    verdict: SeparabilityVerdict


@dataclass(frozen=True)
class EntanglementTrace:
    steps: tuple[TraceStep, ...]

    @classmethod
    def of(cls, labelled: Sequence[tuple[str, StateVector]], tol: float) -> EntanglementTrace:
        return cls(tuple(TraceStep(label, factor_state(s, tol)) for label, s in labelled))

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.steps]

    @property
    def all_separable(self) -> bool:
        return all(s.verdict.separable for s in self.steps)

    def __getitem__(self, label: str) -> SeparabilityVerdict:
        for s in self.steps:
            if s.label == label:
                return s.verdict
        raise KeyError(label)


def minus_target_register(state: StateVector, tol: float = 1e-9) -> StateVector:
    """Strip a trailing qubit known to be in ``|->``, returning the rest.

    Raises if the last qubit is not ``|->`` tensored with the others.
    """
    amps = state.amplitudes
    even, odd = amps[0::2], amps[1::2]
    if np.max(np.abs(even + odd)) > tol:
        raise ValueError("last qubit is not in the |-> state")
    return StateVector(state.n - 1, (even - odd) / math.sqrt(2.0))


# Deutsch-Jozsa


@dataclass
class DJResult:
    verdict: PromiseClass
    queries_used: int
    trace: EntanglementTrace
    final_allzero_probability: float
    allzero_amplitude: complex
    states: dict[str, StateVector] = field(repr=False, default_factory=dict)


def dj_states(f: BooleanOracle) -> dict[str, StateVector]:
    n = f.n
    psi0 = basis_state(n + 1, 1)
    psi1 = hadamard_layer(psi0)
    psi2 = apply_standard_oracle(psi1, f)
    psi3 = hadamard_layer(psi2, range(1, n + 1))
    return {"psi0": psi0, "psi1": psi1, "psi2": psi2, "psi3": psi3}


def run_dj(f: BooleanOracle, tol: float = DEFAULT_TOL) -> DJResult:
    """One oracle application, then read the all-zeros probability of the input register."""
    if classify(f) is PromiseClass.NEITHER:
        raise PromiseViolationError(f"{f!r} is neither constant nor balanced")
    before = f.quantum_queries
    states = dj_states(f)
    used = f.quantum_queries - before
    psi3 = states["psi3"]
    # x = 0 occupies indices 0 (target 0) and 1 (target 1)
    p0 = float(abs(psi3.amplitudes[0]) ** 2 + abs(psi3.amplitudes[1]) ** 2)
    amp0 = complex((psi3.amplitudes[0] - psi3.amplitudes[1]) / math.sqrt(2.0))
    if abs(p0 - 1.0) <= DJ_DECISION_TOL:
        verdict = PromiseClass.CONSTANT
    elif p0 <= DJ_DECISION_TOL:
        verdict = PromiseClass.BALANCED
    else:  # unreachable under the promise
        raise PromiseViolationError(f"all-zeros probability {p0} is neither 0 nor 1")
    trace = EntanglementTrace.of(list(states.items()), tol)
    return DJResult(verdict, used, trace, p0, amp0, states)


# Simon


def gf2_rank(rows: Sequence[int]) -> int:
    return len(_gf2_reduce(rows))


def _gf2_reduce(rows: Sequence[int]) -> dict[int, int]:
    """Fully reduced echelon form keyed by pivot bit."""
    pivots: dict[int, int] = {}
    for r in rows:
        for p, prow in pivots.items():
            if (r >> p) & 1:
                r ^= prow
        if r == 0:
            continue
        p = r.bit_length() - 1
        for q in list(pivots):
            if (pivots[q] >> p) & 1:
                pivots[q] ^= r
        pivots[p] = r
    return pivots


def gf2_solve_period(ys: Sequence[int], n: int) -> int | None:
    """The unique non-zero ``a`` with ``y . a = 0`` for every ``y``, if the ``ys`` pin it down."""
    if any(not 0 <= y < 1 << n for y in ys):
        raise ValueError(f"samples must be {n}-bit strings")
    pivots = _gf2_reduce(ys)
    if len(pivots) != n - 1:
        return None
    (free,) = [b for b in range(n) if b not in pivots]
    a = 1 << free
    for p, row in pivots.items():
        if (row >> free) & 1:
            a |= 1 << p
    return a


@dataclass
class SimonResult:
    recovered_a: int | None
    rounds_used: int
    collected_ys: list[int]
    trace: EntanglementTrace | None

    @property
    def success(self) -> bool:
        return self.recovered_a is not None


def simon_round_state(f: VectorOracle | Sequence[int] | np.ndarray) -> StateVector:
    """``2**(-n/2) * sum_x |x>|f(x)>`` on ``2n`` qubits.

    Accepts a bare output table so that tables outside the 2-to-1 promise,
    such as a constant one, can be examined too.
    """
    if isinstance(f, VectorOracle):
        n = f.n
    else:
        f = np.asarray(f, dtype=np.int64).reshape(-1)
        n = int(f.shape[0]).bit_length() - 1
    psi1 = hadamard_layer(basis_state(2 * n, 0), range(1, n + 1))
    return apply_standard_oracle(psi1, f, m=n)


def _simon_round(f: VectorOracle, rng: np.random.Generator) -> tuple[int, list[tuple[str, StateVector]]]:
    n = f.n
    psi0 = basis_state(2 * n, 0)
    psi1 = hadamard_layer(psi0, range(1, n + 1))
    psi2 = apply_standard_oracle(psi1, f)
    psi3 = measure_subset(psi2, range(n + 1, 2 * n + 1), rng).state
    psi4 = hadamard_layer(psi3, range(1, n + 1))
    y = measure_subset(psi4, range(1, n + 1), rng).value
    return y, [("psi0", psi0), ("psi1", psi1), ("psi2", psi2), ("psi3", psi3), ("psi4", psi4)]


def run_simon(
    f: VectorOracle,
    rng: np.random.Generator,
    max_rounds: int | None = None,
    tol: float = DEFAULT_TOL,
) -> SimonResult:
    """Sample ``y`` orthogonal to the period until they span its orthogonal complement.

    Stops as soon as the samples reach rank ``n - 1``; ``max_rounds``
    defaults to ``20 * n``. Running out of rounds is reported through
    ``recovered_a is None``, not raised.
    """
    if max_rounds is None:
        max_rounds = 20 * f.n
    ys: list[int] = []
    last: list[tuple[str, StateVector]] | None = None
    a = None
    for _ in range(max_rounds):
        y, last = _simon_round(f, rng)
        ys.append(y)
        a = gf2_solve_period(ys, f.n)
        if a is not None:
            break
    trace = EntanglementTrace.of(last, tol) if last is not None else None
    return SimonResult(a, len(ys), ys, trace)


# Grover


def grover_first_step_state(f: BooleanOracle) -> StateVector:
    return apply_phase_oracle(uniform_state(f.n), f)


def diffusion(state: StateVector) -> StateVector:
    """Inversion about the mean, ``2|s><s| - I``."""
    amps = state.amplitudes
    return StateVector(state.n, 2.0 * amps.mean() - amps)


def default_grover_iterations(n: int, marked: int) -> int:
    return max(1, math.floor(math.pi / 4 * math.sqrt((1 << n) / marked)))


def grover_success_closed_form(n: int, marked: int, iterations: int) -> float:
    theta = math.asin(math.sqrt(marked / (1 << n)))
    return math.sin((2 * iterations + 1) * theta) ** 2


@dataclass
class GroverResult:
    measured: int
    success: bool
    success_probability: float
    iterations: int
    trace: EntanglementTrace


def run_grover(
    f: BooleanOracle,
    rng: np.random.Generator,
    iterations: int | None = None,
    tol: float = DEFAULT_TOL,
) -> GroverResult:
    marked = f.popcount()
    if marked == 0 or marked == 1 << f.n:
        raise ValueError(
            "search needs 1 <= marked < 2**n; use grover_first_step_state for trivial instances"
        )
    if iterations is None:
        iterations = default_grover_iterations(f.n, marked)
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    state = uniform_state(f.n)
    labelled: list[tuple[str, StateVector]] = []
    for it in range(1, iterations + 1):
        state = apply_phase_oracle(state, f)
        labelled.append((f"iter{it}.oracle", state))
        state = diffusion(state)
        labelled.append((f"iter{it}.diffusion", state))
    p_success = float(np.sum(np.abs(state.amplitudes[f.table == 1]) ** 2))
    outcome = measure_subset(state, range(1, f.n + 1), rng)
    measured = outcome.value
    return GroverResult(
        measured=measured,
        success=bool(f.table[measured]),
        success_probability=p_success,
        iterations=iterations,
        trace=EntanglementTrace.of(labelled, tol),
    )


def simon_orthogonal(y: int, a: int) -> bool:
    return dot2(y, a) == 0
