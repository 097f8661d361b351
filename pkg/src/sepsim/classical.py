"""Deterministic classical solvers, for query-count comparison with the quantum runs."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from sepsim.oracles import (
    BooleanOracle,
    LinearBooleanFunction,
    PromiseClass,
    PromiseViolationError,
    classify,
)


@dataclass
class QueryLog:
    indices: list[int] = field(default_factory=list)
    answers: list[int] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.indices)

    def ask(self, f: BooleanOracle, x: int) -> int:
        b = f.query(x)
        self.indices.append(x)
        self.answers.append(b)
        return b


def classical_dj_exact(f: BooleanOracle) -> tuple[PromiseClass, QueryLog]:
    """Query ascending indices until two answers differ or a strict majority agree."""
    if classify(f) is PromiseClass.NEITHER:
        raise PromiseViolationError(f"{f!r} is neither constant nor balanced")
    log = QueryLog()
    limit = (1 << (f.n - 1)) + 1
    first = log.ask(f, 0)
    for x in range(1, limit):
        if log.ask(f, x) != first:
            return PromiseClass.BALANCED, log
    return PromiseClass.CONSTANT, log


def classical_dj_linear(f: BooleanOracle) -> tuple[PromiseClass, LinearBooleanFunction, QueryLog]:
    """Recover ``(c, a)`` from ``f(0)`` and the ``n`` unit vectors.

    Assumes ``f`` is affine; that promise is not checked.
    """
    log = QueryLog()
    c = log.ask(f, 0)
    a = 0
    for k in range(1, f.n + 1):
        a = (a << 1) | (log.ask(f, 1 << (f.n - k)) ^ c)
    g = LinearBooleanFunction(f.n, a, c)
    verdict = PromiseClass.CONSTANT if a == 0 else PromiseClass.BALANCED
    return verdict, g, log


@dataclass
class LowerBoundCertificate:
    n: int
    query_sets: int
    cases_checked: int
    failures: list[tuple[tuple[int, ...], int]]

    @property
    def certified(self) -> bool:
        return not self.failures and self.cases_checked == 2 * self.query_sets


def verify_exact_lower_bound(n: int) -> LowerBoundCertificate:
    """Show that ``2**(n-1)`` equal answers never settle constant vs balanced.

    For every query set of that size and each common answer, builds a
    constant and a balanced table agreeing with the answers and checks both.
    """
    if not 1 <= n <= 3:
        raise ValueError(f"lower-bound enumeration supports 1 <= n <= 3, got {n}")
    size = 1 << n
    half = size // 2
    sets = 0
    checked = 0
    failures: list[tuple[tuple[int, ...], int]] = []
    for queried in itertools.combinations(range(size), half):
        sets += 1
        idx = list(queried)
        for b in (0, 1):
            checked += 1
            constant = BooleanOracle(n, np.full(size, b, dtype=np.uint8))
            balanced_table = np.full(size, 1 - b, dtype=np.uint8)
            balanced_table[idx] = b
            balanced = BooleanOracle(n, balanced_table)
            ok = (
                classify(constant) is PromiseClass.CONSTANT
                and classify(balanced) is PromiseClass.BALANCED
                and all(constant.table[x] == b and balanced.table[x] == b for x in idx)
            )
            if not ok:
                failures.append((queried, b))
    assert sets == math.comb(size, half)
    return LowerBoundCertificate(n, sets, checked, failures)
