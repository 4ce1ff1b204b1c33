"""The mod 2 Steenrod algebra in the Milnor basis, and its profile subalgebras.

A Milnor basis monomial Sq(r_1, ..., r_k) is stored as a tuple with no trailing
zeros; the unit is the empty tuple.  A :class:`MilnorElement` is a frozenset of
such tuples (a sum over F2).  Admissible words Sq^{a_1}...Sq^{a_k}
(a_i >= 2 a_{i+1}) appear only at the conversion boundary and as the Adem oracle.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .f2core import Echelon, binom_mod2

__all__ = [
    "INF",
    "Profile",
    "MilnorElement",
    "milnor_degree",
    "basis_in_degree",
    "milnor_product",
    "milnor_product_basis",
    "adem_rewrite",
    "milnor_primitive",
    "admissible_basis",
    "admissible_to_milnor",
    "milnor_to_admissible",
    "sq",
]

INF = 10**6  # profile height meaning "no truncation"

Mono = tuple  # tuple[int, ...], no trailing zeros


def _trim(r: Sequence[int]) -> tuple[int, ...]:
    r = list(r)
    while r and r[-1] == 0:
        r.pop()
    return tuple(r)


def milnor_degree(r: Sequence[int]) -> int:
    return sum(ri * ((1 << (i + 1)) - 1) for i, ri in enumerate(r))


@dataclass(frozen=True)
class Profile:
    """Heights (h_1, h_2, ...): the dual is A_*/(xi_1^{2^h_1}, xi_2^{2^h_2}, ...).

    Positions beyond ``len(heights)`` take ``tail`` (INF for the full algebra,
    0 for finite subalgebras).  Milnor monomials with r_i < 2^{h_i} span the
    corresponding subalgebra.
    """

    heights: tuple[int, ...] = ()
    tail: int = INF
    name: str = "A"

    def height(self, i: int) -> int:
        """Height at 1-based position i."""
        return self.heights[i - 1] if i <= len(self.heights) else self.tail

    def admits(self, r: Sequence[int]) -> bool:
        for i, ri in enumerate(r, start=1):
            h = self.height(i)
            if h < INF and ri >= (1 << h):
                return False
        return True

    @property
    def is_finite(self) -> bool:
        return self.tail == 0 and all(h < INF for h in self.heights)

    def top_degree(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite profile has no top degree")
        return sum(((1 << h) - 1) * ((1 << i) - 1) for i, h in enumerate(self.heights, start=1))

    @classmethod
    def full(cls) -> "Profile":
        return cls((), INF, "A")

    @classmethod
    def A(cls, n: int) -> "Profile":
        """A(n): heights (n+1, n, ..., 1)."""
        return cls(tuple(range(n + 1, 0, -1)), 0, f"A({n})")

    @classmethod
    def E(cls, indices: Iterable[int]) -> "Profile":
        """Exterior algebra E[Q_i : i in indices]."""
        idx = sorted(set(indices))
        if not idx:
            return cls((), 0, "F2")
        top = idx[-1] + 1
        heights = tuple(1 if (i - 1) in idx else 0 for i in range(1, top + 1))
        return cls(heights, 0, "E[" + ",".join(f"Q{i}" for i in idx) + "]")


class MilnorElement:
    """An F2-linear combination of Milnor basis monomials of a common degree."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Sequence[int]] = ()):
        acc: set = set()
        for t in terms:
            acc ^= {_trim(t)}
        self.terms = frozenset(acc)
        degs = {milnor_degree(t) for t in self.terms}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous Milnor element: degrees {sorted(degs)}")

    @property
    def degree(self) -> int | None:
        for t in self.terms:
            return milnor_degree(t)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MilnorElement") -> "MilnorElement":
        return MilnorElement(self.terms ^ other.terms)

    def __mul__(self, other: "MilnorElement") -> "MilnorElement":
        return milnor_product(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MilnorElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def sorted_terms(self) -> list[tuple[int, ...]]:
        return sorted(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join("Sq(" + ",".join(map(str, t)) + ")" for t in self.sorted_terms())


def sq(*r: int) -> MilnorElement:
    """The Milnor basis element Sq(r_1, ..., r_k) (``sq()`` is the unit)."""
    return MilnorElement([r])


def _partitions_milnor(d: int, maxlen: int) -> Iterator[tuple[int, ...]]:
    # exponent sequences of length <= maxlen with weighted sum d
    weights = [(1 << (i + 1)) - 1 for i in range(maxlen)]

    def rec(i: int, rem: int) -> Iterator[list[int]]:
        if i < 0:
            if rem == 0:
                yield []
            return
        w = weights[i]
        for ri in range(rem // w, -1, -1):
            for rest in rec(i - 1, rem - ri * w):
                yield rest + [ri]

    for seq in rec(maxlen - 1, d):
        yield _trim(seq)


@lru_cache(maxsize=None)
def _basis_full(d: int) -> tuple[tuple[int, ...], ...]:
    maxlen = max(1, d.bit_length())
    return tuple(sorted(set(_partitions_milnor(d, maxlen))))


def basis_in_degree(p: Profile, d: int) -> list[MilnorElement]:
    """All profile-admissible Milnor monomials of degree d, lexicographic order."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return [MilnorElement([r]) for r in monomials_in_degree(p, d)]


def monomials_in_degree(p: Profile, d: int) -> list[tuple[int, ...]]:
    return [r for r in _basis_full(d) if p.admits(r)]


def _milnor_matrices(r: tuple[int, ...], s: tuple[int, ...]) -> Iterator[dict]:
    """Milnor matrices X with sum_j 2^j x_ij = r_i (i>=1) and sum_i x_ij = s_j (j>=1)."""
    rows = len(r)
    cols = len(s)

    # choose row i entries x_{i1..i cols}; x_{i0} = r_i - sum_j 2^j x_ij >= 0
    col_left = list(s)
    matrix = [[0] * (cols + 1) for _ in range(rows + 1)]

    def rec_row(i: int) -> Iterator[None]:
        if i > rows:
            yield None
            return
        yield from rec_entry(i, 1, r[i - 1])

    def rec_entry(i: int, j: int, rem: int) -> Iterator[None]:
        if j > cols:
            matrix[i][0] = rem
            yield from rec_row(i + 1)
            return
        w = 1 << j
        top = min(rem // w, col_left[j - 1])
        for x in range(top, -1, -1):
            matrix[i][j] = x
            col_left[j - 1] -= x
            yield from rec_entry(i, j + 1, rem - x * w)
            col_left[j - 1] += x
        matrix[i][j] = 0

    for _ in rec_row(1):
        for j in range(1, cols + 1):
            matrix[0][j] = col_left[j - 1]
        yield matrix


@lru_cache(maxsize=None)
def _product_monomials(r: tuple[int, ...], s: tuple[int, ...]) -> frozenset:
    if not r:
        return frozenset([s])
    if not s:
        return frozenset([r])
    result: set = set()
    rows, cols = len(r), len(s)
    for X in _milnor_matrices(r, s):
        t = []
        ok = True
        for n in range(1, rows + cols + 1):
            acc = 0
            total = 0
            for i in range(max(0, n - cols), min(n, rows) + 1):
                x = X[i][n - i]
                if acc & x:
                    ok = False
                    break
                acc |= x
                total += x
            if not ok:
                break
            t.append(total)
        if ok:
            result ^= {_trim(t)}
    return frozenset(result)


_lock = threading.Lock()


def milnor_product_basis(r: Sequence[int], s: Sequence[int]) -> frozenset:
    """Product of two Milnor monomials in A, as a set of monomials."""
    r, s = _trim(r), _trim(s)
    with _lock:
        return _product_monomials(r, s)


def milnor_product(x: MilnorElement, y: MilnorElement, p: Profile | None = None,
                   max_degree: int | None = None) -> MilnorElement:
    """x * y in A, dropping monomials outside ``p`` (and above ``max_degree`` if given)."""
    acc: set = set()
    for r in x.terms:
        for s in y.terms:
            acc ^= milnor_product_basis(r, s)
    if p is not None:
        acc = {t for t in acc if p.admits(t)}
    if max_degree is not None:
        acc = {t for t in acc if milnor_degree(t) <= max_degree}
    return MilnorElement(acc)


def milnor_primitive(i: int) -> MilnorElement:
    """Q_i = Sq(0, ..., 0, 1) with the 1 in position i+1, degree 2^{i+1} - 1."""
    if i < 0:
        raise ValueError("index must be non-negative")
    return MilnorElement([(0,) * i + (1,)])


# --- admissible words -------------------------------------------------------

def adem_rewrite(a: int, b: int) -> list[tuple[int, ...]]:
    """Admissible expansion of Sq^a Sq^b via the Adem relations (requires 0 < a < 2b).

    Returns the admissible words (as tuples, Sq^0 factors removed) summing to
    Sq^a Sq^b.  Raises ValueError when the word is already admissible.
    """
    if a >= 2 * b or a <= 0:
        raise ValueError(f"Sq^{a}Sq^{b} is already admissible")
    acc: set = set()
    for w in _adem_once(a, b):
        acc ^= set(_admissible_expansion(w))
    return sorted(acc)


def _adem_once(a: int, b: int) -> list[tuple[int, ...]]:
    out = []
    for c in range(a // 2 + 1):
        if binom_mod2(b - c - 1, a - 2 * c):
            out.append(tuple(x for x in (a + b - c, c) if x))
    return out


@lru_cache(maxsize=None)
def _admissible_expansion(word: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Rewrite an arbitrary word in the Sq^k into a sum of admissible words."""
    word = tuple(x for x in word if x)
    for i in range(len(word) - 1):
        a, b = word[i], word[i + 1]
        if a < 2 * b:
            acc: set = set()
            for rep in _adem_once(a, b):
                for w in _admissible_expansion(word[:i] + rep + word[i + 2:]):
                    acc ^= {w}
            return tuple(sorted(acc))
    return (word,)


def _admissible_words(d: int, max_first: int) -> Iterator[tuple[int, ...]]:
    if d == 0:
        yield ()
        return
    for a in range(min(d, max_first), 0, -1):
        rest = d - a
        for w in _admissible_words(rest, a // 2):
            yield (a,) + w


@lru_cache(maxsize=None)
def admissible_basis(d: int) -> tuple[tuple[int, ...], ...]:
    """Admissible words of degree d (a_i >= 2 a_{i+1})."""
    return tuple(sorted(_admissible_words(d, d)))


@lru_cache(maxsize=None)
def admissible_to_milnor(word: tuple[int, ...]) -> frozenset:
    """Milnor expansion of the word Sq^{a_1} ... Sq^{a_k} (any word, not only admissible)."""
    acc = frozenset([()])
    for a in word:
        nxt: set = set()
        for r in acc:
            nxt ^= milnor_product_basis(r, (a,))
        acc = frozenset(nxt)
    return acc


@lru_cache(maxsize=None)
def _conversion(d: int) -> tuple[dict, list]:
    mono = list(_basis_full(d))
    index = {r: i for i, r in enumerate(mono)}
    words = admissible_basis(d)
    if len(words) != len(mono):
        raise AssertionError(f"basis size mismatch in degree {d}")
    n = len(mono)
    # rows: milnor image of each admissible word, tagged with the word index
    ech = Echelon()
    for k, w in enumerate(words):
        v = 0
        for r in admissible_to_milnor(w):
            v ^= 1 << index[r]
        ech.add(v | (1 << (n + k)))
    rows = ech.rref_rows()
    inverse = {}
    for row in rows:
        low = row & ((1 << n) - 1)
        if low & (low - 1) or not low:
            raise AssertionError("admissible words do not form a basis")
        inverse[mono[low.bit_length() - 1]] = row >> n
    return inverse, list(words)


def milnor_to_admissible(r: Sequence[int]) -> list[tuple[int, ...]]:
    """Express the Milnor monomial Sq(r) as a sum of admissible words."""
    r = _trim(r)
    d = milnor_degree(r)
    if d == 0:
        return [()]
    inverse, words = _conversion(d)
    v = inverse[r]
    return [words[k] for k in range(len(words)) if (v >> k) & 1]
