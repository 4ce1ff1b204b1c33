from itertools import product

import pytest

from tmfres.f2core import binom_mod2
from tmfres.steenrod import (
    MilnorElement, Profile, adem_rewrite, admissible_basis, admissible_to_milnor,
    basis_in_degree, milnor_degree, milnor_primitive, milnor_product, milnor_to_admissible,
    monomials_in_degree, sq,
)


def poly_series(factors, top):
    out = [1] + [0] * top
    for f in factors:
        new = [0] * (top + 1)
        for i, a in enumerate(out):
            for j, b in enumerate(f):
                if i + j <= top:
                    new[i + j] += a * b
        out = new
    return out


def test_unit_and_degree_zero():
    for p in (Profile.A(1), Profile.A(2), Profile.full()):
        assert basis_in_degree(p, 0) == [sq()]
    x = sq(2, 1)
    assert milnor_product(sq(), x) == x == milnor_product(x, sq())


def test_sq1_sq1():
    assert milnor_product(sq(1), sq(1)).is_zero()


def test_primitives():
    assert milnor_primitive(0) == sq(1) and sq(1).degree == 1
    assert milnor_primitive(1) == sq(0, 1) and milnor_primitive(1).degree == 3
    assert milnor_primitive(2).degree == 7
    for i in range(5):
        q = milnor_primitive(i)
        assert milnor_product(q, q).is_zero()


def test_adem_examples():
    assert adem_rewrite(1, 1) == []
    assert adem_rewrite(2, 2) == [(3, 1)]
    assert adem_rewrite(1, 2) == [(3,)]
    with pytest.raises(ValueError):
        adem_rewrite(4, 2)


def test_sq2sq2_milnor():
    assert milnor_product(sq(2), sq(2)) == sq(1, 1)
    assert admissible_to_milnor((3, 1)) == frozenset({(1, 1)})


def test_a1_a2_counts():
    a1 = [len(basis_in_degree(Profile.A(1), d)) for d in range(0, 10)]
    assert sum(a1) == 8 and max(d for d, n in enumerate(a1) if n) == 6
    assert a1[:7] == poly_series([[1, 1, 1, 1], [1, 0, 0, 1]], 6)
    expected = poly_series([[1] * 8, [1, 0, 0, 1, 0, 0, 1, 0, 0, 1], [1, 0, 0, 0, 0, 0, 0, 1]], 23)
    a2 = [len(basis_in_degree(Profile.A(2), d)) for d in range(24)]
    assert a2 == expected and sum(a2) == 64
    assert basis_in_degree(Profile.A(2), 24) == []


def test_profile_admits():
    p = Profile.A(2)
    assert p.admits((7, 3, 1)) and not p.admits((8,)) and not p.admits((0, 0, 0, 1))
    e = Profile.E([2])
    assert e.admits((0, 0, 1)) and not e.admits((1,))


def test_q2_milnor_expansion():
    q2 = milnor_primitive(2)
    words = milnor_to_admissible((0, 0, 1))
    acc: set = set()
    for w in words:
        acc ^= set(admissible_to_milnor(w))
    assert frozenset(acc) == q2.terms


def test_associativity_exhaustive():
    basis = {d: monomials_in_degree(Profile.full(), d) for d in range(21)}
    count = 0
    for dx in range(1, 19):
        for dy in range(1, 20 - dx):
            for dz in range(1, 21 - dx - dy):
                for x, y, z in product(basis[dx], basis[dy], basis[dz]):
                    X, Y, Z = MilnorElement([x]), MilnorElement([y]), MilnorElement([z])
                    assert (X * Y) * Z == X * (Y * Z), (x, y, z)
                    count += 1
    assert count > 1000


def test_adem_matches_milnor():
    for total in range(2, 24):
        for b in range(1, total):
            a = total - b
            if a >= 2 * b:
                continue
            acc: set = set()
            for w in adem_rewrite(a, b):
                acc ^= set(admissible_to_milnor(w))
            assert frozenset(acc) == milnor_product(sq(a), sq(b)).terms, (a, b)


# faithful action on H^*(RP^inf)^k: an independent check of the Adem rewriting

def _sq_poly(a, poly):
    """Sq^a on a set of exponent tuples (an F2 polynomial)."""
    out: set = set()
    for e in poly:
        k = len(e)

        def rec(i, rem, acc):
            if i == k:
                if rem == 0:
                    out.symmetric_difference_update({tuple(acc)})
                return
            for ai in range(0, min(rem, e[i]) + 1):
                if binom_mod2(e[i], ai):
                    rec(i + 1, rem - ai, acc + [e[i] + ai])

        rec(0, a, [])
    return out


def _word_poly(word, k):
    poly = {tuple([1] * k)}
    for a in reversed(word):
        poly = _sq_poly(a, poly)
    return poly


def test_adem_faithful_representation():
    for total in range(2, 11):
        for b in range(1, total):
            a = total - b
            if a >= 2 * b:
                continue
            lhs = _word_poly((a, b), total)
            rhs: set = set()
            for w in adem_rewrite(a, b):
                rhs ^= _word_poly(w, total)
            assert lhs == rhs, (a, b)


def test_admissible_basis_size():
    for d in range(1, 16):
        assert len(admissible_basis(d)) == len(monomials_in_degree(Profile.full(), d))


def test_inhomogeneous_rejected():
    with pytest.raises(ValueError):
        MilnorElement([(1,), (2,)])


def test_truncation():
    assert milnor_product(sq(4), sq(4), max_degree=7).is_zero()
    assert milnor_degree((1, 1)) == 4
