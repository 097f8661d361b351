import itertools
import math

import numpy as np
import pytest

from sepsim.classical import classical_dj_exact, classical_dj_linear, verify_exact_lower_bound
from sepsim.oracles import (
    BooleanOracle,
    LinearBooleanFunction,
    PromiseClass,
    PromiseViolationError,
    classify,
    enumerate_linear_family,
    enumerate_promise_functions,
    expand_linear,
    identify_linear,
)


class TestExact:
    def test_constant_zero_n3(self):
        verdict, log = classical_dj_exact(BooleanOracle(3, [0] * 8))
        assert verdict is PromiseClass.CONSTANT
        assert log.count == 5 == 2**3 // 2 + 1

    def test_early_disagreement(self):
        verdict, log = classical_dj_exact(BooleanOracle.from_string("01101001"))
        assert verdict is PromiseClass.BALANCED and log.count == 2

    def test_worst_case_n2(self):
        verdict, log = classical_dj_exact(BooleanOracle.from_string("0011"))
        assert verdict is PromiseClass.BALANCED
        assert log.count == 3
        assert log.indices == [0, 1, 2]

    def test_neither_rejected(self):
        with pytest.raises(PromiseViolationError):
            classical_dj_exact(BooleanOracle.from_string("1110"))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_exhaustive_correct_within_bound(self, n):
        bound = 2 ** (n - 1) + 1
        worst = 0
        for f in enumerate_promise_functions(n):
            before = f.query_count
            verdict, log = classical_dj_exact(f)
            assert verdict is classify(f)
            assert log.count <= bound
            assert log.count == f.query_count - before
            assert log.answers == [int(f.table[x]) for x in log.indices]
            worst = max(worst, log.count)
        assert worst == bound


class TestLinear:
    def test_constant(self):
        verdict, g, log = classical_dj_linear(expand_linear(LinearBooleanFunction(3, 0, 1)))
        assert verdict is PromiseClass.CONSTANT
        assert g == LinearBooleanFunction(3, 0, 1)
        assert log.count == 4

    def test_balanced(self):
        verdict, g, log = classical_dj_linear(expand_linear(LinearBooleanFunction(3, 0b101, 0)))
        assert verdict is PromiseClass.BALANCED
        assert g == LinearBooleanFunction(3, 0b101, 0)
        assert log.count == 4
        assert log.indices == [0, 4, 2, 1]

    def test_n1(self):
        verdict, g, log = classical_dj_linear(BooleanOracle.from_string("01"))
        assert verdict is PromiseClass.BALANCED and log.count == 2

    @pytest.mark.parametrize("n", range(1, 11))
    def test_matches_identify_linear(self, n):
        for h in enumerate_linear_family(n):
            f = expand_linear(h)
            verdict, g, log = classical_dj_linear(f)
            assert g == identify_linear(f) == h
            assert log.count == n + 1 == f.query_count
            assert verdict is classify(f)

    def test_n_unit_queries_alone_are_ambiguous(self):
        # f(e_k) = a_k xor c: (c=1, a=000) and (c=0, a=111) answer identically
        n = 3
        seen = {}
        for g in enumerate_linear_family(n):
            key = tuple(g(1 << (n - k)) for k in range(1, n + 1))
            seen.setdefault(key, set()).add(classify(expand_linear(g)))
        assert any(len(classes) > 1 for classes in seen.values())


class TestLowerBound:
    @pytest.mark.parametrize("n,sets", [(1, 2), (2, 6), (3, 70)])
    def test_certificates(self, n, sets):
        cert = verify_exact_lower_bound(n)
        assert cert.query_sets == sets == math.comb(2**n, 2 ** (n - 1))
        assert cert.cases_checked == 2 * sets
        assert cert.certified

    def test_adaptive_argument_n2(self):
        # independent restatement: for every half-size set and answer, count completions by enumeration
        n = 2
        for queried in itertools.combinations(range(4), 2):
            for b in (0, 1):
                classes = set()
                for v in range(16):
                    f = BooleanOracle.from_int(n, v)
                    if all(f.table[x] == b for x in queried) and classify(f) is not PromiseClass.NEITHER:
                        classes.add(classify(f))
                assert classes == {PromiseClass.CONSTANT, PromiseClass.BALANCED}

    def test_refuses_n4(self):
        with pytest.raises(ValueError):
            verify_exact_lower_bound(4)
