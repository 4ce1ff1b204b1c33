import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmfres.f2core import (
    Echelon, F2Matrix, QuotientSpace, Subspace, binom_mod2, bits, kernel_basis,
    kernel_of_images, popcount, rank, rank_of, rref, solve, solve_images,
)


def naive_rank(entries):
    """Plain Gaussian elimination on a list-of-lists copy (byte per entry)."""
    a = [list(r) for r in entries]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nr):
            if i != r and a[i][c]:
                a[i] = [x ^ y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def random_matrix(rng, nr, nc, density=0.5):
    return F2Matrix.from_lists([[int(rng.random() < density) for _ in range(nc)] for _ in range(nr)], nc)


def test_identity_rref():
    r, piv, m = rref(F2Matrix.identity(3))
    assert (r, piv) == (3, [0, 1, 2])
    assert m == F2Matrix.identity(3)


def test_duplicate_rows():
    r, piv, _ = rref(F2Matrix.from_lists([[1, 1], [1, 1]]))
    assert r == 1 and piv == [0]


def test_rank_vs_naive_and_transpose():
    rng = random.Random(5)
    for _ in range(10):
        m = random_matrix(rng, 64, 64)
        assert rank(m) == naive_rank(m.tolist()) == rank(m.transpose())


def test_rank_rectangular():
    rng = random.Random(6)
    for _ in range(30):
        nr, nc = rng.randint(1, 20), rng.randint(1, 20)
        m = random_matrix(rng, nr, nc, 0.3)
        assert rank(m) == naive_rank(m.tolist())
        assert rank(m) <= min(nr, nc)
        assert rank_of(m.rows) == rank(m)


def test_kernel_small():
    k = kernel_basis(F2Matrix.from_lists([[1, 1], [0, 0]]))
    assert k.dim == 1 and k.contains(0b11)
    assert kernel_basis(F2Matrix.identity(4)).dim == 0


def test_kernel_rank_nullity():
    rng = random.Random(7)
    for _ in range(50):
        nr, nc = rng.randint(1, 16), rng.randint(1, 16)
        m = random_matrix(rng, nr, nc)
        k = kernel_basis(m)
        assert k.dim == nc - naive_rank(m.tolist())
        for v in k.basis:
            assert m.apply(v) == 0


def test_solve_examples():
    assert solve(F2Matrix.identity(2), 0b01) == 0b01
    assert solve(F2Matrix.zeros(2, 2), 0b01) is None


def test_solve_consistency():
    rng = random.Random(8)
    for _ in range(60):
        nr, nc = rng.randint(1, 10), rng.randint(1, 10)
        m = random_matrix(rng, nr, nc, 0.4)
        b = rng.getrandbits(nr)
        aug = [row + [(b >> i) & 1] for i, row in enumerate(m.tolist())]
        x = solve(m, b)
        assert (x is not None) == (naive_rank(m.tolist()) == naive_rank(aug))
        if x is not None:
            assert m.apply(x) == b


def test_binom_examples():
    assert binom_mod2(3, 1) == 1
    assert binom_mod2(2, 1) == 0


def test_binom_pascal():
    row = [1]
    for a in range(65):
        for b in range(a + 1):
            assert binom_mod2(a, b) == row[b], (a, b)
        row = [1] + [(row[i] + row[i + 1]) % 2 for i in range(len(row) - 1)] + [1]


def test_binom_vandermonde():
    for a in range(33):
        for b in range(33):
            for k in range(a + b + 1):
                rhs = sum(binom_mod2(a, i) * binom_mod2(b, k - i) for i in range(k + 1)) % 2
                assert binom_mod2(a + b, k) == rhs


def test_words_roundtrip():
    rng = random.Random(9)
    m = random_matrix(rng, 5, 130)
    w = m.to_words()
    assert w.dtype == np.uint64 and w.shape == (5, 3)
    assert F2Matrix.from_words(w, 130) == m


def test_bits_beyond_ncols_rejected():
    with pytest.raises(ValueError):
        F2Matrix(1, 2, [0b100])


def test_matmul_and_add():
    rng = random.Random(10)
    a = random_matrix(rng, 4, 6)
    b = random_matrix(rng, 6, 3)
    c = a @ b
    for i in range(4):
        for j in range(3):
            assert c.tolist()[i][j] == sum(a.tolist()[i][k] * b.tolist()[k][j] for k in range(6)) % 2
    assert (a + a).is_zero()


def test_echelon_and_quotient():
    e = Echelon([0b011, 0b110])
    assert len(e) == 2 and e.contains(0b101) and not e.contains(0b001)
    rows = e.rref_rows()
    assert [r & -r for r in rows] == sorted(r & -r for r in rows)
    q = QuotientSpace([0b001, 0b010, 0b100], [0b011])
    assert q.dim == 2
    s = Subspace(3, [0b011, 0b110, 0b101])
    assert s.dim == 2


def test_kernel_of_images_and_solve_images():
    imgs = [0b01, 0b10, 0b11]
    ker = kernel_of_images(imgs)
    assert ker == [0b111]
    x = solve_images(imgs, 0b11)
    assert x is not None
    acc = 0
    for p in bits(x):
        acc ^= imgs[p]
    assert acc == 0b11
    assert solve_images([0b01], 0b10) is None


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, (1 << 12) - 1), min_size=1, max_size=12), st.randoms(use_true_random=False))
def test_rank_row_permutation_and_idempotent(rows, rnd):
    m = F2Matrix(len(rows), 12, rows)
    perm = list(rows)
    rnd.shuffle(perm)
    assert rank(m) == rank(F2Matrix(len(perm), 12, perm))
    r, piv, red = rref(m)
    assert rref(red)[2] == red
    assert popcount(0) == 0
