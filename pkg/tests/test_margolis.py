import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from tmfres.margolis import (
    closed_form_margolis, dual_quotient_margolis, margolis_homology, q_degree, split_dims,
)
from tmfres.modfmt import action_of, appendix_a_module, parse_module, quotient, submodule, tensor, truncate
from tmfres.resolution import Algebra, minimal_resolution
from tmfres.steenrod import milnor_primitive

A2 = appendix_a_module()
F2 = parse_module("1 0")


@st.composite
def small_modules(draw):
    """Sub- or quotient modules of a truncation of the appendix module."""
    top = draw(st.integers(4, 12))
    base = truncate(A2, top)
    d = draw(st.integers(0, top))
    n = base.dim_in(d)
    if n == 0:
        return base
    v = draw(st.integers(1, (1 << n) - 1))
    if draw(st.booleans()):
        return submodule(base, {d: [v]})[0]
    return quotient(base, {d: [v]})[0]


def test_f2_homology():
    for n in range(4):
        res = margolis_homology(F2, n)
        assert res.homology_dims == {0: 1}


def test_appendix_q2_free():
    res = margolis_homology(A2, 2)
    assert res.total() == 0
    assert sum(res.out_rank.values()) == 32


def test_q_squared_zero():
    for n in range(3):
        q = action_of(A2, milnor_primitive(n))
        step = q_degree(n)
        for d, m in q.items():
            if d + step in q:
                assert (q[d + step] @ m).is_zero()


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_modules(), small_modules(), st.integers(0, 2))
def test_kunneth(m, n, k):
    q = q_degree(k)
    top = 20
    t = tensor(m, n, top + q)
    hm = margolis_homology(m, k).homology_dims
    hn = margolis_homology(n, k).homology_dims
    ht = margolis_homology(t, k, top).homology_dims
    for d in range(top + 1):
        expect = sum(hm.get(i, 0) * hn.get(d - i, 0) for i in range(d + 1))
        assert ht.get(d, 0) == expect, d


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_modules(), st.integers(0, 2))
def test_homology_nonnegative(m, k):
    res = margolis_homology(m, k)
    for d, h in res.homology_dims.items():
        assert h == res.ker_dims[d] - res.im_dims[d] >= 0


def test_closed_form_examples():
    assert closed_form_margolis(2, 14) == {0: 1, 12: 1, 14: 1}
    assert closed_form_margolis(2, 26)[26] == 1
    for n in range(1, 4):
        assert closed_form_margolis(n, 10)[0] == 1


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("variant", ["An", "En"])
def test_closed_form_vs_derivation(n, variant):
    assert closed_form_margolis(n, 60, variant) == dual_quotient_margolis(n, 60, variant)


def test_split_f2():
    good, evil = split_dims(F2, 1, 2, 40)
    assert good == {(s, 7 * s): 1 for s in range(6)}
    assert evil == {}


def test_split_sum_rule():
    m = truncate(A2, 10)
    for k in (1, 2):
        good, evil = split_dims(m, k, 2, 30)
        res = margolis_homology(tensor(m, m, 30 + 7) if k == 2 else m, 2, 30)
        for t in range(31):
            dim = res.ker_dims.get(t, 0) + res.out_rank.get(t, 0)
            assert good.get((0, t), 0) + evil.get(t, 0) == dim - res.im_dims.get(t, 0)


def test_split_collapse():
    m = truncate(A2, 10)
    good, _ = split_dims(m, 2, 2, 40)
    for (s, t), n in good.items():
        if s >= 1 and t + 7 <= 40:
            assert good[(s + 1, t + 7)] == n


@pytest.mark.parametrize("k", [1, 2])
def test_split_vs_resolution(k):
    m = truncate(A2, 10)
    good, evil = split_dims(m, k, 2, 30)
    mk = m if k == 1 else tensor(m, m, 30)
    r = minimal_resolution(Algebra.from_name("EQ2"), mk, 5, 30)
    expected = dict(good)
    for t, n in evil.items():
        expected[(0, t)] = expected.get((0, t), 0) + n
    got = {k_: v for k_, v in r.dims().items() if v}
    assert got == {k_: v for k_, v in expected.items() if k_[0] <= 5}
