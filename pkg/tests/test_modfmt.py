import random
from collections import Counter

import pytest

from tmfres.f2core import F2Matrix
from tmfres.modfmt import (
    GradedModule, ModuleFormatError, ModuleMap, action_of, appendix_a_module, direct_sum,
    parse_module, quotient, serialize_module, submodule, tensor, truncate, validate_module,
)
from tmfres.steenrod import milnor_primitive


@pytest.fixture(scope="module")
def a2():
    return appendix_a_module()


def f2():
    return parse_module("1 0")


def test_appendix_basic(a2):
    assert a2.dim == 64
    assert a2.degree(0) == 0 and a2.max_degree == 23
    assert a2.sq(1, 0) == (1,)


def test_appendix_degree_multiset(a2):
    series = Counter()
    for a in range(8):
        for b in (0, 3, 6, 9):
            for c in (0, 7):
                series[a + b + c] += 1
    assert Counter(a2.degrees) == series


def test_trivial_module():
    m = f2()
    assert m.dim == 1 and m.degrees == (0,) and not m.actions
    assert serialize_module(m).split() == ["1", "0"]


def test_roundtrip(a2):
    text = serialize_module(a2)
    b = parse_module(text)
    assert b.actions == a2.actions and b.degrees == a2.degrees
    assert serialize_module(b) == text


def test_canonical_serialization():
    x = parse_module("2 0 1  0 1 1 1")
    y = parse_module("2\n0\n1\n0 1 1\n1\n")
    assert serialize_module(x) == serialize_module(y)


@pytest.mark.parametrize("text, offset", [
    ("2 0 1 0 x 1 1", 4),
    ("3 0 1", 3),
    ("2 0 1 5 1 1 1", 3),
    ("2 0 1 0 0 1 1", 4),
    ("2 0 1 0 1 3 1", 5),
    ("2 0 2 0 1 1 1", 6),
    ("2 0 1 0 1 1 1 0 1 1 1", 7),
    ("2 1 0", 2),
])
def test_parse_errors(text, offset):
    with pytest.raises(ModuleFormatError) as exc:
        parse_module(text)
    assert exc.value.offset == offset


def test_sq1_sq1_zero(a2):
    acts = action_of(a2, (1, 1))
    assert all(m.is_zero() for m in acts.values())


def test_unit_word_identity(a2):
    acts = action_of(a2, ())
    for d, m in acts.items():
        assert m == F2Matrix.identity(a2.dim_in(d))


def test_q2_squares_to_zero(a2):
    q = action_of(a2, milnor_primitive(2))
    for d, m in q.items():
        if d + 7 in q:
            assert (q[d + 7] @ m).is_zero()


def test_validate(a2):
    assert validate_module(a2, 23) == []
    assert validate_module(parse_module("2 0 1 0 1 1 1"), 23) == []


def test_validate_mutation(a2):
    rng = random.Random(3)
    keys = sorted(a2.actions)
    caught = 0
    for _ in range(10):
        acts = dict(a2.actions)
        (i, k) = rng.choice(keys)
        js = set(acts[(i, k)])
        tgt = [j for j in range(a2.dim) if a2.degree(j) == a2.degree(i) + k]
        flip = rng.choice(tgt)
        js ^= {flip}
        if js:
            acts[(i, k)] = tuple(sorted(js))
        else:
            del acts[(i, k)]
        bad = GradedModule(a2.degrees, acts)
        caught += bool(validate_module(bad, 23))
    assert caught == 10


def test_tensor_with_f2(a2):
    t = tensor(a2, f2(), 30)
    assert t.degrees == a2.degrees and t.actions == a2.actions


def test_tensor_dims(a2):
    m = truncate(a2, 8)
    t = tensor(m, a2, 14)
    for d in range(15):
        assert t.dim_in(d) == sum(m.dim_in(i) * a2.dim_in(d - i) for i in range(d + 1))


def test_tensor_validates(a2):
    t = tensor(a2, a2, 10)
    assert validate_module(t, 10) == []


def test_suspend_shares_table(a2):
    s = a2.suspend(7)
    assert s.min_degree == 7 and s.actions is a2.actions
    assert s.sq_vector(1, 7, 1) == a2.sq_vector(1, 0, 1)


def test_direct_sum(a2):
    m = direct_sum(f2(), truncate(a2, 3))
    assert m.dim == 1 + truncate(a2, 3).dim
    assert validate_module(m, 10) == []


def test_sub_and_quotient(a2):
    # submodule generated by the degree-1 class, quotient by it
    sub, inc = submodule(a2, {1: [1]})
    quo, proj = quotient(a2, {1: [1]})
    assert validate_module(sub, 23) == [] and validate_module(quo, 23) == []
    assert inc.linearity_witness() is None and proj.linearity_witness() is None
    for d in range(24):
        assert sub.dim_in(d) + quo.dim_in(d) == a2.dim_in(d)


def test_non_linear_map_witness():
    m = parse_module("2 0 1 0 1 1 1")
    n = parse_module("2 0 1")
    f = ModuleMap.from_global(m, n, {0: [0], 1: []})
    assert f.linearity_witness() is None
    g = ModuleMap.from_global(n, m, {0: [0], 1: []})
    assert g.linearity_witness() == (0, 1)


def test_homogeneity_from_table(a2):
    for (i, k), js in a2.actions.items():
        assert all(a2.degree(j) == a2.degree(i) + k for j in js)
