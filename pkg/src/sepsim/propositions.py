"""Exhaustive checks of the entanglement claims at small n.

Each ``verify_*`` function sweeps a finite population of oracles and returns a
:class:`VerificationReport` whose ``counterexamples`` list is empty exactly
when the claim holds at that ``n``. Sweeps over truth-table populations are
cut into contiguous index ranges; with ``jobs > 1`` the ranges run in worker
processes and the partial results are merged in range order, so the report
does not depend on the worker count.
"""

from __future__ import annotations

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Callable, Sequence

import numpy as np

from sepsim.algorithms import (
    dj_states,
    grover_first_step_state,
    minus_target_register,
    run_dj,
    simon_round_state,
)
from sepsim.classical import verify_exact_lower_bound
from sepsim.oracles import (
    MAX_PROMISE_N,
    BooleanOracle,
    PromiseClass,
    classify,
    enumerate_linear_family,
    enumerate_promise_functions,
    expand_linear,
    identify_linear,
    make_simon_oracle,
    promise_population,
    to_bits,
)
from sepsim.separability import (
    DEFAULT_TOL,
    ProductDecomposition,
    angular_distance,
    check_two_qubit_constraint,
    extract_linear_from_state,
    factor_state,
    reconstruct,
)
from sepsim.state import apply_phase_oracle, apply_standard_oracle, basis_state, hadamard_layer

logger = logging.getLogger(__name__)

MAX_LINEAR_N = 10
MAX_EXHAUSTIVE_N = 4


@dataclass
class VerificationReport:
    proposition: str
    n: int
    population: int
    passed: int
    counterexamples: list[str] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)
    duration_s: float = 0.0

    @property
    def verified(self) -> bool:
        return not self.counterexamples


@dataclass
class _Partial:
    start: int
    checked: int = 0
    passed: int = 0
    counterexamples: list[str] = field(default_factory=list)
    separable: list[int] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)

    def bump(self, key: str, by: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + by


def _ranges(total: int, jobs: int) -> list[range]:
    pieces = max(1, min(total, 4 * max(1, jobs)))
    step = math.ceil(total / pieces)
    return [range(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _sweep(work: Callable[[range], _Partial], total: int, jobs: int) -> list[_Partial]:
    ranges = _ranges(total, jobs)
    if jobs <= 1 or len(ranges) == 1:
        parts = [work(r) for r in ranges]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(work, ranges))
    return sorted(parts, key=lambda p: p.start)


def _merge(parts: Sequence[_Partial]) -> _Partial:
    out = _Partial(start=0)
    for p in parts:
        out.checked += p.checked
        out.passed += p.passed
        out.counterexamples.extend(p.counterexamples)
        out.separable.extend(p.separable)
        for k, v in p.counters.items():
            out.bump(k, v)
    return out


def _check_n(name: str, n: int, lo: int, hi: int) -> None:
    if not lo <= n <= hi:
        raise ValueError(f"{name} supports {lo} <= n <= {hi}, got {n}")


def _linear_tables(n: int) -> set[int]:
    return {expand_linear(g).to_int() for g in enumerate_linear_family(n)}


# affine functions are constant or balanced


def verify_prop1(n: int) -> VerificationReport:
    _check_n("prop1", n, 1, MAX_LINEAR_N)
    t0 = time.perf_counter()
    family = list(enumerate_linear_family(n))
    part = _Partial(start=0)
    for g in family:
        part.checked += 1
        cls = classify(expand_linear(g))
        part.bump(cls.value)
        expected = PromiseClass.CONSTANT if g.a == 0 else PromiseClass.BALANCED
        if cls is expected:
            part.passed += 1
        else:
            part.counterexamples.append(f"{g}: classified {cls.value}")
    constant = part.counters.get("constant", 0)
    balanced = part.counters.get("balanced", 0)
    if (constant, balanced) != (2, 2 * ((1 << n) - 1)):
        part.counterexamples.append(f"class counts constant={constant} balanced={balanced}")
    return VerificationReport(
        "prop1", n, len(family), part.passed, part.counterexamples,
        {"constant": constant, "balanced": balanced},
        time.perf_counter() - t0,
    )


# affine oracles never entangle the DJ register


def _prop2_work(n: int, tol: float, idx: range) -> _Partial:
    family = list(enumerate_linear_family(n))
    part = _Partial(start=idx.start)
    for i in idx:
        g = family[i]
        part.checked += 1
        problems = []
        res = run_dj(expand_linear(g), tol)
        if res.queries_used != 1:
            problems.append(f"{res.queries_used} oracle applications")
        expected = PromiseClass.CONSTANT if g.a == 0 else PromiseClass.BALANCED
        if res.verdict is not expected:
            problems.append(f"verdict {res.verdict.value}")
        for step in res.trace.steps:
            if not step.verdict.separable:
                problems.append(f"{step.label} entangled")
        psi2 = res.trace["psi2"]
        if psi2.separable and not _matches_product_form(psi2.decomposition, g.n, g.a, g.c, tol):
            problems.append("psi2 factors differ from the (c, a) product form")
        recovered = extract_linear_from_state(minus_target_register(res.states["psi2"]), tol)
        if recovered != g:
            problems.append(f"extracted {recovered}")
        if problems:
            part.counterexamples.append(f"{g}: " + "; ".join(problems))
        else:
            part.passed += 1
    return part


def _matches_product_form(d: ProductDecomposition, n: int, a: int, c: int, tol: float) -> bool:
    """Check factors ``(pi/4, pi*a_k)`` per input qubit, ``(pi/4, pi)`` for the target, phase ``pi*c``."""
    expected = [(math.pi / 4, math.pi * ((a >> (n - k)) & 1)) for k in range(1, n + 1)]
    expected.append((math.pi / 4, math.pi))
    for (theta, phi), (et, ep) in zip(d.factors, expected):
        if abs(theta - et) > tol or angular_distance(phi, ep) > tol:
            return False
    return angular_distance(d.global_phase, math.pi * c) <= tol


def verify_prop2(n: int, tol: float = DEFAULT_TOL, jobs: int = 1) -> VerificationReport:
    _check_n("prop2", n, 1, MAX_LINEAR_N)
    t0 = time.perf_counter()
    total = 1 << (n + 1)
    part = _merge(_sweep(partial(_prop2_work, n, tol), total, jobs))
    return VerificationReport(
        "prop2", n, total, part.passed, part.counterexamples,
        {"all_steps_separable": part.passed, "tolerance": tol},
        time.perf_counter() - t0,
    )


# no constant/balanced function outside the affine family keeps psi2 separable


def _dj_psi2(f: BooleanOracle):
    psi1 = hadamard_layer(basis_state(f.n + 1, 1))
    return apply_standard_oracle(psi1, f.table, m=1)


def _prop3_work(n: int, tol: float, idx: range) -> _Partial:
    part = _Partial(start=idx.start)
    for f in itertools.islice(enumerate_promise_functions(n), idx.start, idx.stop):
        part.checked += 1
        separable = factor_state(_dj_psi2(f), tol).separable
        linear = identify_linear(f) is not None
        if separable:
            part.separable.append(f.to_int())
        if separable == linear:
            part.passed += 1
        else:
            part.counterexamples.append(
                f"{f.to_string()}: separable={separable} affine={linear}"
            )
    return part


def verify_prop3_maximality(n: int, tol: float = DEFAULT_TOL, jobs: int = 1) -> VerificationReport:
    _check_n("prop3", n, 1, MAX_PROMISE_N)
    t0 = time.perf_counter()
    total = promise_population(n)
    part = _merge(_sweep(partial(_prop3_work, n, tol), total, jobs))
    separable = set(part.separable)
    set_equal = separable == _linear_tables(n)
    if not set_equal:
        part.counterexamples.append("separable set differs from the affine family")
    return VerificationReport(
        "prop3", n, total, part.passed, part.counterexamples,
        {"separable": len(separable), "expected_separable": 1 << (n + 1), "set_equals_linear_family": set_equal},
        time.perf_counter() - t0,
    )


# phase oracles that conserve separability are exactly the affine ones


def random_product_state(n: int, rng: np.random.Generator):
    thetas = rng.uniform(0.0, math.pi / 2, size=n)
    phis = rng.uniform(0.0, 2 * math.pi, size=n)
    gamma = float(rng.uniform(0.0, 2 * math.pi))
    d = ProductDecomposition(gamma, tuple(zip(thetas.tolist(), phis.tolist())))
    return reconstruct(d)


def _prop5_work(n: int, tol: float, seed: int, samples: int, idx: range) -> _Partial:
    part = _Partial(start=idx.start)
    uniform = hadamard_layer(basis_state(n, 0))
    for value in idx:
        f = BooleanOracle.from_int(n, value)
        part.checked += 1
        separable = factor_state(apply_phase_oracle(uniform, f.table), tol).separable
        linear = identify_linear(f) is not None
        if separable != linear:
            part.counterexamples.append(f"{f.to_string()}: witness separable={separable} affine={linear}")
            continue
        if separable:
            part.separable.append(value)
            # per-function stream, independent of how the sweep is partitioned
            rng = np.random.default_rng([seed, value])
            bad = 0
            for _ in range(samples):
                psi = random_product_state(n, rng)
                if not factor_state(apply_phase_oracle(psi, f.table), tol).separable:
                    bad += 1
            part.bump("sampled_states", samples)
            part.bump("sample_failures", bad)
            if bad:
                part.counterexamples.append(f"{f.to_string()}: {bad}/{samples} sampled states entangled")
                continue
        part.passed += 1
    return part


def verify_prop5_conservation(
    n: int,
    seed: int = 0,
    samples: int = 8,
    tol: float = DEFAULT_TOL,
    jobs: int = 1,
) -> VerificationReport:
    _check_n("prop5", n, 1, MAX_EXHAUSTIVE_N)
    t0 = time.perf_counter()
    total = 1 << (1 << n)
    part = _merge(_sweep(partial(_prop5_work, n, tol, seed, samples), total, jobs))
    conserving = set(part.separable)
    set_equal = conserving == _linear_tables(n)
    if not set_equal:
        part.counterexamples.append("conserving set differs from the affine family")
    return VerificationReport(
        "prop5", n, total, part.passed, part.counterexamples,
        {
            "necessary_direction_uniform_witness": {
                "conserving": len(conserving),
                "expected": 1 << (n + 1),
                "set_equals_linear_family": set_equal,
            },
            "sufficient_direction_sampled": {
                "samples_per_function": samples,
                "states_checked": part.counters.get("sampled_states", 0),
                "entangled": part.counters.get("sample_failures", 0),
            },
            "seed": seed,
        },
        time.perf_counter() - t0,
    )


# Simon's psi2 is entangled for every period


def verify_simon_entanglement(n: int, tol: float = DEFAULT_TOL) -> VerificationReport:
    _check_n("simon", n, 2, 3)
    t0 = time.perf_counter()
    part = _Partial(start=0)
    for a in range(1, 1 << n):
        part.checked += 1
        if factor_state(simon_round_state(make_simon_oracle(n, a)), tol).separable:
            part.counterexamples.append(f"a={to_bits(a, n)}: psi2 separable")
        else:
            part.passed += 1
    control = factor_state(simon_round_state(np.zeros(1 << n, dtype=np.int64)), tol).separable
    if not control:
        part.counterexamples.append("constant control: psi2 entangled")
    return VerificationReport(
        "simon", n, part.checked, part.passed, part.counterexamples,
        {"entangled_periods": part.passed, "constant_control_separable": control},
        time.perf_counter() - t0,
    )


# Grover's first oracle call entangles every non-trivial instance


def _grover_work(n: int, tol: float, idx: range) -> _Partial:
    part = _Partial(start=idx.start)
    for value in idx:
        f = BooleanOracle.from_int(n, value)
        part.checked += 1
        separable = factor_state(grover_first_step_state(f), tol).separable
        linear = identify_linear(f) is not None
        if separable:
            part.separable.append(value)
        if separable == linear:
            part.passed += 1
        else:
            part.counterexamples.append(f"{f.to_string()}: separable={separable} affine={linear}")
    return part


def verify_grover_entanglement(n: int, tol: float = DEFAULT_TOL, jobs: int = 1) -> VerificationReport:
    _check_n("grover", n, 1, MAX_EXHAUSTIVE_N)
    t0 = time.perf_counter()
    total = 1 << (1 << n)
    part = _merge(_sweep(partial(_grover_work, n, tol), total, jobs))
    separable = set(part.separable)
    set_equal = separable == _linear_tables(n)
    if not set_equal:
        part.counterexamples.append("separable set differs from the affine family")
    stats: dict[str, Any] = {
        "separable": len(separable),
        "expected_separable": 1 << (n + 1),
        "set_equals_linear_family": set_equal,
    }
    if n == 2:
        residuals = []
        for x in range(4):
            f = BooleanOracle(2, [int(i == x) for i in range(4)])
            ok, residual = check_two_qubit_constraint(grover_first_step_state(f), tol)
            residuals.append(residual)
            if ok:
                part.counterexamples.append(f"singleton {{{x}}}: AD=BC holds")
        stats["singleton_residuals"] = residuals
    return VerificationReport(
        "grover", n, total, part.passed, part.counterexamples, stats, time.perf_counter() - t0,
    )


def verify_lower_bound(n: int) -> VerificationReport:
    t0 = time.perf_counter()
    cert = verify_exact_lower_bound(n)
    return VerificationReport(
        "lowerbound", n, cert.query_sets, cert.query_sets - len({q for q, _ in cert.failures}),
        [f"queries={list(q)} answer={b}" for q, b in cert.failures],
        {"query_set_size": 1 << (n - 1), "cases_checked": cert.cases_checked, "certified": cert.certified},
        time.perf_counter() - t0,
    )


VERIFIERS = {
    "prop1": lambda n, **kw: verify_prop1(n),
    "prop2": lambda n, tol=DEFAULT_TOL, jobs=1, **kw: verify_prop2(n, tol, jobs),
    "prop3": lambda n, tol=DEFAULT_TOL, jobs=1, **kw: verify_prop3_maximality(n, tol, jobs),
    "prop5": lambda n, seed=0, samples=8, tol=DEFAULT_TOL, jobs=1, **kw: verify_prop5_conservation(
        n, seed, samples, tol, jobs
    ),
    "simon": lambda n, tol=DEFAULT_TOL, **kw: verify_simon_entanglement(n, tol),
    "grover": lambda n, tol=DEFAULT_TOL, jobs=1, **kw: verify_grover_entanglement(n, tol, jobs),
    "lowerbound": lambda n, **kw: verify_lower_bound(n),
}
