import pytest

from sepsim.propositions import (
    verify_grover_entanglement,
    verify_lower_bound,
    verify_prop1,
    verify_prop2,
    verify_prop3_maximality,
    verify_prop5_conservation,
    verify_simon_entanglement,
)


@pytest.mark.parametrize("n,checked,constant,balanced", [(1, 4, 2, 2), (3, 16, 2, 14), (10, 2048, 2, 2046)])
def test_prop1(n, checked, constant, balanced):
    r = verify_prop1(n)
    assert r.verified
    assert r.population == r.passed == checked
    assert r.stats == {"constant": constant, "balanced": balanced}


@pytest.mark.parametrize("n", [1, 2, 5])
def test_prop2(n):
    r = verify_prop2(n)
    assert r.verified
    assert r.population == r.passed == 2 ** (n + 1)


@pytest.mark.parametrize("n,population,separable", [(2, 8, 8), (3, 72, 16), (4, 12872, 32)])
def test_prop3(n, population, separable):
    r = verify_prop3_maximality(n)
    assert r.verified
    assert r.population == r.passed == population
    assert r.stats["separable"] == separable
    assert r.stats["set_equals_linear_family"]


@pytest.mark.parametrize("n,population,conserving", [(2, 16, 8), (3, 256, 16)])
def test_prop5(n, population, conserving):
    r = verify_prop5_conservation(n, seed=0)
    assert r.verified
    assert r.population == population
    witness = r.stats["necessary_direction_uniform_witness"]
    assert witness["conserving"] == conserving and witness["set_equals_linear_family"]
    sampled = r.stats["sufficient_direction_sampled"]
    assert sampled["states_checked"] == 8 * conserving and sampled["entangled"] == 0


def test_prop5_independent_of_partition():
    a = verify_prop5_conservation(3, seed=5, samples=3, jobs=1)
    b = verify_prop5_conservation(3, seed=5, samples=3, jobs=3)
    assert (a.passed, a.counterexamples, a.stats) == (b.passed, b.counterexamples, b.stats)


@pytest.mark.parametrize("n,periods", [(2, 3), (3, 7)])
def test_simon(n, periods):
    r = verify_simon_entanglement(n)
    assert r.verified
    assert r.stats == {"entangled_periods": periods, "constant_control_separable": True}


def test_simon_range():
    with pytest.raises(ValueError):
        verify_simon_entanglement(4)


@pytest.mark.parametrize("n,separable", [(2, 8), (3, 16)])
def test_grover(n, separable):
    r = verify_grover_entanglement(n)
    assert r.verified
    assert r.stats["separable"] == separable
    if n == 2:
        assert all(abs(x - 0.5) <= 1e-12 for x in r.stats["singleton_residuals"])


@pytest.mark.parametrize("n", [2, 3])
def test_prop3_and_grover_agree(n):
    assert verify_prop3_maximality(n).stats["separable"] == verify_grover_entanglement(n).stats["separable"]


def test_parallel_sweep_matches_serial():
    a = verify_grover_entanglement(3, jobs=1)
    b = verify_grover_entanglement(3, jobs=2)
    assert (a.passed, a.stats) == (b.passed, b.stats)


def test_lower_bound_report():
    r = verify_lower_bound(2)
    assert r.verified and r.population == 6


@pytest.mark.parametrize(
    "fn,n", [(verify_prop1, 11), (verify_prop3_maximality, 5), (verify_prop5_conservation, 5), (verify_grover_entanglement, 5)]
)
def test_size_limits(fn, n):
    with pytest.raises(ValueError):
        fn(n)
