"""Bruner-format module definition files and the Steenrod action they determine.

The file format is a whitespace-separated integer stream::

    n
    d_0 d_1 ... d_{n-1}
    i k l j_1 ... j_l      (one record per nonzero Sq^k(g_i))

meaning Sq^k(g_i) = g_{j_1} + ... + g_{j_l}.  Absent records are zero.
Modules are cohomologically graded: Sq^k raises degree by k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .f2core import Echelon, F2Matrix, bits
from .steenrod import MilnorElement, adem_rewrite, milnor_to_admissible

__all__ = [
    "ModuleFormatError",
    "GradedModule",
    "ModuleMap",
    "parse_module",
    "load_module",
    "serialize_module",
    "action_of",
    "validate_module",
    "tensor",
    "direct_sum",
    "submodule",
    "quotient",
    "truncate",
    "appendix_a_module",
]


class ModuleFormatError(ValueError):
    """Malformed module definition; ``offset`` is the index of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (token {offset})")
        self.offset = offset


class GradedModule:
    """A finite graded F2-vector space with Sq^k actions on its basis.

    ``actions`` maps (i, k) to the sorted tuple of indices j with a 1 in
    Sq^k(g_i).  ``shift`` suspends the module without copying the table.
    """

    __slots__ = ("dim", "raw_degrees", "actions", "shift", "__dict__")

    def __init__(self, degrees: Sequence[int], actions: Mapping[tuple[int, int], Sequence[int]] | None = None,
                 shift: int = 0, check: bool = True):
        self.dim = len(degrees)
        self.raw_degrees = tuple(degrees)
        table = {}
        for (i, k), js in (actions or {}).items():
            js = tuple(sorted(js))
            if js:
                table[(i, k)] = js
        self.actions = table
        self.shift = shift
        if check:
            self._check()

    def _check(self) -> None:
        n = self.dim
        for (i, k), js in self.actions.items():
            if not (0 <= i < n) or k < 1:
                raise ValueError(f"bad action key {(i, k)}")
            if len(set(js)) != len(js):
                raise ValueError(f"repeated index in Sq^{k}(g_{i})")
            for j in js:
                if not 0 <= j < n:
                    raise ValueError(f"index {j} out of range in Sq^{k}(g_{i})")
                if self.raw_degrees[j] != self.raw_degrees[i] + k:
                    raise ValueError(f"Sq^{k}(g_{i}) not homogeneous: g_{j} has degree "
                                     f"{self.raw_degrees[j]}, expected {self.raw_degrees[i] + k}")

    @property
    def degrees(self) -> tuple[int, ...]:
        if self.shift == 0:
            return self.raw_degrees
        return tuple(d + self.shift for d in self.raw_degrees)

    def degree(self, i: int) -> int:
        return self.raw_degrees[i] + self.shift

    def suspend(self, k: int) -> "GradedModule":
        """Sigma^k M; shares the action table with ``self``."""
        out = GradedModule.__new__(GradedModule)
        out.dim = self.dim
        out.raw_degrees = self.raw_degrees
        out.actions = self.actions
        out.shift = self.shift + k
        return out

    # degree-local indexing -------------------------------------------------

    @cached_property
    def _by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, d in enumerate(self.raw_degrees):
            out.setdefault(d, []).append(i)
        return out

    @cached_property
    def _local(self) -> list[int]:
        loc = [0] * self.dim
        for idx in self._by_degree.values():
            for p, i in enumerate(idx):
                loc[i] = p
        return loc

    def basis(self, d: int) -> list[int]:
        """Global indices of the basis elements in degree d, in index order."""
        return self._by_degree.get(d - self.shift, [])

    def dim_in(self, d: int) -> int:
        return len(self.basis(d))

    def local_index(self, i: int) -> int:
        return self._local[i]

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.dim else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.dim else -1

    def graded_dims(self) -> dict[int, int]:
        return {d + self.shift: len(v) for d, v in sorted(self._by_degree.items())}

    # actions ---------------------------------------------------------------

    def sq(self, k: int, i: int) -> tuple[int, ...]:
        """Sq^k(g_i) as a tuple of global indices."""
        if k == 0:
            return (i,)
        return self.actions.get((i, k), ())

    def sq_vector(self, k: int, d: int, v: int) -> int:
        """Sq^k applied to a degree-d vector (bits over ``basis(d)``)."""
        if k == 0:
            return v
        src = self.basis(d)
        loc = self._local
        out = 0
        for p in bits(v):
            for j in self.actions.get((src[p], k), ()):
                out ^= 1 << loc[j]
        return out

    def word_vector(self, word: Sequence[int], d: int, v: int) -> int:
        """Apply Sq^{a_1} ... Sq^{a_m} (rightmost first) to a degree-d vector."""
        for a in reversed(word):
            if not v:
                return 0
            v = self.sq_vector(a, d, v)
            d += a
        return v

    def milnor_vector(self, r: Sequence[int], d: int, v: int) -> int:
        """Milnor basis element Sq(r) applied to a degree-d vector."""
        cache = self.__dict__.setdefault("_milnor_cache", {})
        out = 0
        for p in bits(v):
            key = (tuple(r), d, p)
            img = cache.get(key)
            if img is None:
                img = 0
                for w in milnor_to_admissible(r):
                    img ^= self.word_vector(w, d, 1 << p)
                cache[key] = img
            out ^= img
        return out

    def element_vector(self, x: MilnorElement, d: int, v: int) -> int:
        out = 0
        for r in x.terms:
            out ^= self.milnor_vector(r, d, v)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedModule):
            return NotImplemented
        return self.degrees == other.degrees and self.actions == other.actions

    def __hash__(self) -> int:
        return hash((self.degrees, tuple(sorted(self.actions.items()))))

    def __repr__(self) -> str:
        return f"GradedModule(dim={self.dim}, degrees {self.min_degree}..{self.max_degree})"


@dataclass
class ModuleMap:
    """Degree-preserving linear map: ``images[d][p]`` is the image of the p-th basis element of degree d."""

    source: GradedModule
    target: GradedModule
    images: dict[int, list[int]] = field(default_factory=dict)

    def apply(self, d: int, v: int) -> int:
        imgs = self.images.get(d)
        out = 0
        if imgs is None:
            return 0
        for p in bits(v):
            out ^= imgs[p]
        return out

    def matrix(self, d: int) -> F2Matrix:
        return F2Matrix.from_columns(self.images.get(d, [0] * self.source.dim_in(d)), self.target.dim_in(d))

    @classmethod
    def from_global(cls, source: GradedModule, target: GradedModule,
                    table: Mapping[int, Iterable[int]]) -> "ModuleMap":
        """Build from ``{i: [j, ...]}``: g_i maps to the sum of target basis elements g_j."""
        images: dict[int, list[int]] = {}
        for d in sorted(set(source.degrees)):
            row = []
            for i in source.basis(d):
                v = 0
                for j in table.get(i, ()):
                    if target.degree(j) != d:
                        raise ValueError(f"map not degree-preserving at g_{i}")
                    v ^= 1 << target.local_index(j)
                row.append(v)
            images[d] = row
        return cls(source, target, images)

    def linearity_witness(self, max_k: int | None = None) -> tuple[int, int] | None:
        """First (i, k) with f(Sq^k g_i) != Sq^k f(g_i), or None when the map is A-linear."""
        src, tgt = self.source, self.target
        top = tgt.max_degree
        for d in sorted(set(src.degrees)):
            for p, i in enumerate(src.basis(d)):
                kmax = top - d if max_k is None else min(max_k, top - d)
                for k in range(1, kmax + 1):
                    lhs = self.apply(d + k, src.sq_vector(k, d, 1 << p))
                    rhs = tgt.sq_vector(k, d, self.apply(d, 1 << p))
                    if lhs != rhs:
                        return i, k
        return None


# --- parsing ----------------------------------------------------------------

TextLike = Union[str, bytes]


def parse_module(text: TextLike) -> GradedModule:
    """Parse a module definition; line breaks are irrelevant."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    tokens = text.split()
    values = []
    for pos, tok in enumerate(tokens):
        try:
            values.append(int(tok))
        except ValueError:
            raise ModuleFormatError(f"non-integer token {tok!r}", pos) from None
    if not values:
        raise ModuleFormatError("empty module definition", 0)
    n = values[0]
    if n < 0:
        raise ModuleFormatError("negative dimension", 0)
    if len(values) < 1 + n:
        raise ModuleFormatError(f"truncated stream: expected {n} degrees", len(values))
    degrees = values[1:1 + n]
    for p in range(1, n):
        if degrees[p] < degrees[p - 1]:
            raise ModuleFormatError("degrees must be non-decreasing", 1 + p)
    actions: dict[tuple[int, int], tuple[int, ...]] = {}
    pos = 1 + n
    while pos < len(values):
        start = pos
        if pos + 3 > len(values):
            raise ModuleFormatError("truncated action record", start)
        i, k, l = values[pos:pos + 3]
        if not 0 <= i < n:
            raise ModuleFormatError(f"generator index {i} out of range", start)
        if k < 1:
            raise ModuleFormatError(f"Sq^{k} is not a valid operation", start + 1)
        if l < 0:
            raise ModuleFormatError("negative record length", start + 2)
        if pos + 3 + l > len(values):
            raise ModuleFormatError(f"record length {l} exceeds remaining tokens", start + 2)
        js = values[pos + 3:pos + 3 + l]
        for off, j in enumerate(js):
            if not 0 <= j < n:
                raise ModuleFormatError(f"target index {j} out of range", pos + 3 + off)
            if degrees[j] != degrees[i] + k:
                raise ModuleFormatError(
                    f"Sq^{k}(g_{i}) lists g_{j} of degree {degrees[j]}, expected {degrees[i] + k}",
                    pos + 3 + off)
        if len(set(js)) != len(js):
            raise ModuleFormatError("repeated target index", start)
        if (i, k) in actions:
            raise ModuleFormatError(f"duplicate record for Sq^{k}(g_{i})", start)
        actions[(i, k)] = tuple(js)
        pos += 3 + l
    return GradedModule(degrees, actions, check=False)


def load_module(path: str | Path) -> GradedModule:
    return parse_module(Path(path).read_text())


def serialize_module(m: GradedModule) -> str:
    """Canonical text: dimension, degrees, then records sorted by (i, k)."""
    lines = [str(m.dim), " ".join(str(d) for d in m.degrees)]
    for (i, k) in sorted(m.actions):
        js = m.actions[(i, k)]
        lines.append(" ".join(str(x) for x in (i, k, len(js), *js)))
    return "\n".join(lines) + "\n"


def appendix_a_module() -> GradedModule:
    """The 64-dimensional A-module structure on A(2) shipped with the package."""
    from importlib.resources import files
    return parse_module(files("tmfres.data").joinpath("a2_module.def").read_text())


# --- actions ----------------------------------------------------------------

Word = Sequence[int]


def action_of(m: GradedModule, w: Union[Word, MilnorElement], max_deg: int | None = None) -> dict[int, F2Matrix]:
    """Matrices of the left action of ``w`` for every source degree d with d + |w| <= max_deg.

    ``w`` is an admissible word (sequence of Sq exponents, empty = unit) or a
    Milnor element.
    """
    if isinstance(w, MilnorElement):
        deg = w.degree if w.degree is not None else 0
        apply = lambda d, v: m.element_vector(w, d, v)  # noqa: E731
    else:
        word = tuple(w)
        deg = sum(word)
        apply = lambda d, v: m.word_vector(word, d, v)  # noqa: E731
    top = m.max_degree if max_deg is None else max_deg
    out = {}
    for d in sorted(set(m.degrees)):
        if d + deg > top:
            continue
        cols = [apply(d, 1 << p) for p in range(m.dim_in(d))]
        out[d] = F2Matrix.from_columns(cols, m.dim_in(d + deg))
    return out


def validate_module(m: GradedModule, relation_top: int) -> list[tuple[int, int, int]]:
    """All (a, b, i) with a < 2b, a + b <= relation_top where an Adem relation fails on g_i."""
    report = []
    for total in range(2, relation_top + 1):
        for b in range(1, total):
            a = total - b
            if a >= 2 * b:
                continue
            rhs_words = adem_rewrite(a, b)
            for i in range(m.dim):
                d = m.degree(i)
                if m.dim_in(d + total) == 0:
                    continue
                v = 1 << m.local_index(i)
                lhs = m.word_vector((a, b), d, v)
                rhs = 0
                for word in rhs_words:
                    rhs ^= m.word_vector(word, d, v)
                if lhs != rhs:
                    report.append((a, b, i))
    return report


# --- constructions ----------------------------------------------------------

def tensor(m: GradedModule, n: GradedModule, max_deg: int) -> GradedModule:
    """M (x) N truncated above max_deg, with the Cartan diagonal action.

    Basis g_i (x) h_j is ordered by (degree, i, j).
    """
    pairs = sorted(
        ((m.degree(i) + n.degree(j), i, j) for i in range(m.dim) for j in range(n.dim)
         if m.degree(i) + n.degree(j) <= max_deg),
    )
    index = {(i, j): p for p, (_, i, j) in enumerate(pairs)}
    degrees = [d for d, _, _ in pairs]
    actions: dict[tuple[int, int], tuple[int, ...]] = {}
    for p, (d, i, j) in enumerate(pairs):
        for k in range(1, max_deg - d + 1):
            acc: set = set()
            for a in range(k + 1):
                left = m.sq(a, i)
                if not left:
                    continue
                right = n.sq(k - a, j)
                for x in left:
                    for y in right:
                        acc ^= {index[(x, y)]}
            if acc:
                actions[(p, k)] = tuple(sorted(acc))
    return GradedModule(degrees, actions)


def direct_sum(m: GradedModule, n: GradedModule) -> GradedModule:
    """M (+) N with basis ordered by (degree, summand, index)."""
    items = sorted([(m.degree(i), 0, i) for i in range(m.dim)] + [(n.degree(j), 1, j) for j in range(n.dim)])
    index = {(s, i): p for p, (_, s, i) in enumerate(items)}
    actions = {}
    for (s, src) in ((0, m), (1, n)):
        for (i, k), js in src.actions.items():
            actions[(index[(s, i)], k)] = tuple(sorted(index[(s, j)] for j in js))
    return GradedModule([d for d, _, _ in items], actions)


def truncate(m: GradedModule, max_deg: int) -> GradedModule:
    """The quotient of M by everything above max_deg."""
    keep = [i for i in range(m.dim) if m.degree(i) <= max_deg]
    index = {i: p for p, i in enumerate(keep)}
    actions = {}
    for (i, k), js in m.actions.items():
        if i in index:
            tgt = tuple(index[j] for j in js if j in index)
            if tgt:
                actions[(index[i], k)] = tgt
    return GradedModule([m.degree(i) for i in keep], actions)


def _closure(m: GradedModule, gens: Mapping[int, Iterable[int]]) -> dict[int, Echelon]:
    spans: dict[int, Echelon] = {}
    pending = []
    for d, vs in gens.items():
        for v in vs:
            pending.append((d, v))
    while pending:
        d, v = pending.pop()
        e = spans.setdefault(d, Echelon())
        if not e.add(v):
            continue
        for k in range(1, m.max_degree - d + 1):
            w = m.sq_vector(k, d, v)
            if w:
                pending.append((d + k, w))
    return spans


def submodule(m: GradedModule, gens: Mapping[int, Iterable[int]]) -> tuple[GradedModule, ModuleMap]:
    """Sub-A-module generated by degree-local vectors ``gens[d]``, with its inclusion.

    The submodule's basis in each degree is the RREF basis of the generated span.
    """
    spans = _closure(m, gens)
    basis: list[tuple[int, int]] = []
    for d in sorted(spans):
        for v in spans[d].rref_rows():
            basis.append((d, v))
    coord: dict[int, Echelon] = {}
    # tagged echelon per degree to read coordinates of images
    by_deg: dict[int, list[int]] = {}
    for p, (d, v) in enumerate(basis):
        by_deg.setdefault(d, []).append(p)
    shift = m.dim + 1
    for d, ps in by_deg.items():
        e = Echelon()
        for q, p in enumerate(ps):
            e.add(basis[p][1] | (1 << (shift + q)))
        coord[d] = e
    actions = {}
    for p, (d, v) in enumerate(basis):
        for k in range(1, m.max_degree - d + 1):
            w = m.sq_vector(k, d, v)
            if not w:
                continue
            r = coord[d + k].reduce(w)
            if r & ((1 << shift) - 1):
                raise AssertionError("closure failed")
            tags = r >> shift
            actions[(p, k)] = tuple(by_deg[d + k][q] for q in bits(tags))
    sub = GradedModule([d - m.shift for d, _ in basis], actions, shift=m.shift)
    images: dict[int, list[int]] = {}
    for d, v in basis:
        images.setdefault(d, []).append(v)
    return sub, ModuleMap(sub, m, images)


def quotient(m: GradedModule, gens: Mapping[int, Iterable[int]]) -> tuple[GradedModule, ModuleMap]:
    """M / (sub-A-module generated by ``gens``), with the projection map.

    The quotient basis in degree d is the set of standard basis vectors that are
    not pivots of the RREF basis of the submodule.
    """
    spans = _closure(m, gens)
    kept: list[tuple[int, int]] = []  # (degree, local position)
    for d in sorted(set(m.degrees)):
        piv = set(spans[d].pivots()) if d in spans else set()
        for p in range(m.dim_in(d)):
            if p not in piv:
                kept.append((d, p))
    index = {dp: q for q, dp in enumerate(kept)}
    local_kept: dict[int, list[int]] = {}
    for d, p in kept:
        local_kept.setdefault(d, []).append(p)

    def project(d: int, v: int) -> int:
        if d in spans:
            v = spans[d].reduce(v)
        return v

    actions = {}
    for q, (d, p) in enumerate(kept):
        for k in range(1, m.max_degree - d + 1):
            w = project(d + k, m.sq_vector(k, d, 1 << p))
            if w:
                actions[(q, k)] = tuple(sorted(index[(d + k, b)] for b in bits(w)))
    quo = GradedModule([d - m.shift for d, _ in kept], actions, shift=m.shift)
    images: dict[int, list[int]] = {}
    for d in sorted(set(m.degrees)):
        pos = {p: c for c, p in enumerate(local_kept.get(d, []))}
        row = []
        for p in range(m.dim_in(d)):
            w = project(d, 1 << p)
            row.append(sum(1 << pos[b] for b in bits(w)))
        images[d] = row
    return quo, ModuleMap(m, quo, images)
