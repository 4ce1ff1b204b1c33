"""Exact linear algebra over F2 on bit-packed rows.

Vectors are Python ints: bit ``i`` is coordinate ``i`` (least-significant bit is
column 0).  An :class:`F2Matrix` is an immutable tuple of such row ints.  The
:class:`Echelon` accumulator is the workhorse used by every other module; the
matrix-level functions (:func:`rref`, :func:`kernel_basis`, :func:`solve`) are
thin wrappers around it.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "F2Matrix",
    "Subspace",
    "Echelon",
    "QuotientSpace",
    "rref",
    "rank",
    "rank_of",
    "kernel_basis",
    "solve",
    "kernel_of_images",
    "solve_images",
    "binom_mod2",
    "bits",
    "popcount",
]


def popcount(v: int) -> int:
    return bin(v).count("1")


def bits(v: int) -> list[int]:
    """Indices of the set bits of ``v`` in increasing order."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def binom_mod2(a: int, b: int) -> int:
    """C(a, b) mod 2 by Lucas: odd iff the binary digits of b and a-b are disjoint."""
    if b < 0 or a < 0 or b > a:
        return 0
    return 1 if (b & (a - b)) == 0 else 0


class Echelon:
    """Incrementally built row echelon basis of a subspace of F2^n.

    Each stored row is keyed by its pivot, the lowest set bit, and contains no
    bits below it.  Reduction walks pivots in increasing order.
    """

    __slots__ = ("rows", "mask")

    def __init__(self, vectors: Iterable[int] = ()):
        self.rows: dict[int, int] = {}  # pivot bit (as power of two) -> row
        self.mask = 0
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: int) -> int:
        rows, mask = self.rows, self.mask
        x = v & mask
        while x:
            low = x & -x
            v ^= rows[low]
            x = v & mask & ~((low << 1) - 1)
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        low = v & -v
        self.rows[low] = v
        self.mask |= low
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def copy(self) -> "Echelon":
        e = Echelon()
        e.rows = dict(self.rows)
        e.mask = self.mask
        return e

    def pivots(self) -> list[int]:
        return sorted(p.bit_length() - 1 for p in self.rows)

    def rref_rows(self) -> list[int]:
        """Fully reduced basis, sorted by increasing pivot."""
        keys = sorted(self.rows)
        out: dict[int, int] = {}
        # back-substitute from the highest pivot down
        for k in reversed(keys):
            r = self.rows[k]
            x = r & self.mask & ~((k << 1) - 1)
            while x:
                low = x & -x
                r ^= out[low]
                x ^= low
            out[k] = r
        return [out[k] for k in keys]


class F2Matrix:
    """Dense immutable F2 matrix; row ``r`` is an int with bit ``c`` = entry (r, c)."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[int] = ()):
        rows = tuple(rows)
        if len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        limit = 1 << ncols
        for r in rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond ncols")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, n, (1 << i for i in range(n)))

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], ncols: int | None = None) -> "F2Matrix":
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        rows = []
        for row in entries:
            v = 0
            for c, e in enumerate(row):
                if e & 1:
                    v |= 1 << c
            rows.append(v)
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "F2Matrix":
        """Build from column ints (bit ``r`` of column ``c`` = entry (r, c))."""
        rows = [0] * nrows
        for c, col in enumerate(columns):
            for r in bits(col):
                rows[r] |= 1 << c
        return cls(nrows, len(columns), rows)

    def tolist(self) -> list[list[int]]:
        return [[(r >> c) & 1 for c in range(self.ncols)] for r in self.rows]

    def columns(self) -> list[int]:
        return self.transpose().rows

    def to_words(self) -> np.ndarray:
        """Packed uint64 words, shape (nrows, ceil(ncols/64)), bit 0 of word 0 = column 0."""
        nwords = max(1, (self.ncols + 63) // 64)
        out = np.zeros((self.nrows, nwords), dtype=np.uint64)
        mask = (1 << 64) - 1
        for i, r in enumerate(self.rows):
            for w in range(nwords):
                out[i, w] = (r >> (64 * w)) & mask
        return out

    @classmethod
    def from_words(cls, words: np.ndarray, ncols: int) -> "F2Matrix":
        rows = []
        for line in words:
            v = 0
            for w, word in enumerate(line):
                v |= int(word) << (64 * w)
            rows.append(v)
        return cls(len(rows), ncols, rows)

    def transpose(self) -> "F2Matrix":
        cols = [0] * self.ncols
        for r, row in enumerate(self.rows):
            bit = 1 << r
            for c in bits(row):
                cols[c] |= bit
        return F2Matrix(self.ncols, self.nrows, cols)

    def apply(self, v: int) -> int:
        """Matrix times column vector ``v``."""
        out = 0
        for r, row in enumerate(self.rows):
            if popcount(row & v) & 1:
                out |= 1 << r
        return out

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        orows = other.rows
        out = []
        for row in self.rows:
            acc = 0
            for c in bits(row):
                acc ^= orows[c]
            out.append(acc)
        return F2Matrix(self.nrows, other.ncols, out)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return F2Matrix(self.nrows, self.ncols, (a ^ b for a, b in zip(self.rows, other.rows)))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, F2Matrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"F2Matrix({self.nrows}x{self.ncols})"


class Subspace:
    """A subspace of F2^ambient_dim stored by its RREF basis (pivots increasing)."""

    __slots__ = ("ambient_dim", "basis", "_ech")

    def __init__(self, ambient_dim: int, vectors: Iterable[int] = ()):
        ech = Echelon(vectors)
        self.ambient_dim = ambient_dim
        self.basis = tuple(ech.rref_rows())
        self._ech = ech

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: int) -> bool:
        return self._ech.contains(v)

    def reduce(self, v: int) -> int:
        return self._ech.reduce(v)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


class QuotientSpace:
    """Z/B for subspaces B <= Z, with a chosen representative basis of the quotient.

    Representatives are the vectors of ``space`` that enlarge the span of
    ``sub`` when added in the given order; :meth:`coords` expresses a vector of
    Z in that quotient basis.
    """

    def __init__(self, space: Iterable[int], sub: Iterable[int]):
        sub = list(sub)
        ech = Echelon(sub)
        self.sub_dim = len(ech)
        reps = []
        for z in space:
            if ech.add(z):
                reps.append(z)
        self.reps = reps
        # second echelon on [vector | tag bits] identifies representative coordinates
        shift = max([v.bit_length() for v in sub + reps] + [0])
        self._shift = shift
        self._tagged = Echelon(sub)
        for i, z in enumerate(reps):
            self._tagged.add(z | (1 << (shift + i)))

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: int) -> int:
        """Coordinates of ``v`` (assumed in Z) on the representatives, as a bit vector."""
        r = self._tagged.reduce(v)
        low = r & ((1 << self._shift) - 1)
        if low:
            raise ValueError("vector is not in the space")
        return r >> self._shift


def rref(m: F2Matrix) -> tuple[int, list[int], F2Matrix]:
    """Reduced row echelon form: (rank, pivot columns, reduced matrix padded with zero rows)."""
    ech = Echelon(m.rows)
    rows = ech.rref_rows()
    pivots = [(r & -r).bit_length() - 1 for r in rows]
    padded = rows + [0] * (m.nrows - len(rows))
    return len(rows), pivots, F2Matrix(m.nrows, m.ncols, padded)


def rank(m: F2Matrix) -> int:
    return len(Echelon(m.rows))


def rank_of(vectors: Iterable[int]) -> int:
    """Rank of a family of vectors (highest-bit pivots; no reduced basis is kept)."""
    piv: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length()
            r = piv.get(h)
            if r is None:
                piv[h] = v
                break
            v ^= r
    return len(piv)


def kernel_basis(m: F2Matrix) -> Subspace:
    """Null space {v : m v = 0} as a subspace of F2^cols."""
    r, pivots, red = rref(m)
    pivset = set(pivots)
    vecs = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = 1 << f
        for j, p in enumerate(pivots):
            if (red.rows[j] >> f) & 1:
                v |= 1 << p
        vecs.append(v)
    return Subspace(m.ncols, vecs)


def solve(m: F2Matrix, b: int) -> int | None:
    """Some x with m x = b, or None."""
    if b >> m.nrows:
        raise ValueError("right-hand side longer than the number of rows")
    return solve_images(m.columns(), b)


def _tagged_echelon(images: Sequence[int]) -> tuple[Echelon, int]:
    shift = max([v.bit_length() for v in images] + [0])
    ech = Echelon()
    for i, v in enumerate(images):
        ech.add(v | (1 << (shift + i)))
    return ech, shift


def kernel_of_images(images: Sequence[int]) -> list[int]:
    """Kernel of the map sending basis vector ``i`` to ``images[i]``, in RREF."""
    ech, shift = _tagged_echelon(images)
    low_mask = (1 << shift) - 1
    kern = [r >> shift for r in ech.rows.values() if not (r & low_mask)]
    return Echelon(kern).rref_rows()


def solve_images(images: Sequence[int], b: int) -> int | None:
    """Some combination x of the images with sum equal to ``b``, or None."""
    if not b:
        return 0
    ech, shift = _tagged_echelon(images)
    if b >> shift:
        return None
    r = ech.reduce(b)
    if r & ((1 << shift) - 1):
        return None
    return r >> shift
