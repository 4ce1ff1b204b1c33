"""Truncated polynomial Hopf algebras over F2 or F2[v] and their reduced cobar complexes.

A presentation lists generators (name, degree, height) with heights powers of 2.
The coproduct is primitive on generators unless an explicit table overrides it
for some generators; a table entry is a list of terms (k, left, right) standing
for v^k * left (x) right, with left/right given as {generator name: exponent}.
The ground ring F2[v] is modelled by carrying the power of v on every basis
element of the cobar complex; v has cobar degree 0 and internal degree |v|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .f2core import Echelon, binom_mod2, kernel_of_images, rank_of

__all__ = [
    "HopfPresentation",
    "HopfData",
    "CobarResult",
    "build_hopf",
    "cobar_cohomology",
    "preset",
    "PRESETS",
]

Mono = tuple  # exponent tuple, one entry per generator
Term = tuple  # (v-power, left Mono, right Mono)


@dataclass(frozen=True)
class HopfPresentation:
    generators: tuple[tuple[str, int, int], ...]
    v_degree: int | None = None
    coproduct: Mapping[str, Sequence[tuple[int, Mapping[str, int], Mapping[str, int]]]] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        names = [g[0] for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        for name, deg, h in self.generators:
            if deg <= 0:
                raise ValueError(f"generator {name} must have positive degree")
            if h < 2 or h & (h - 1):
                raise ValueError(f"height {h} of {name} is not a power of 2")
        for name in self.coproduct:
            if name not in names:
                raise ValueError(f"coproduct given for unknown generator {name}")
        if self.v_degree is not None and self.v_degree <= 0:
            raise ValueError("|v| must be positive")

    @property
    def is_primitive(self) -> bool:
        return not self.coproduct


class HopfData:
    """Monomial basis through degree t_max and reduced coproducts of every monomial."""

    def __init__(self, p: HopfPresentation, t_max: int):
        self.p = p
        self.t_max = t_max
        self.names = [g[0] for g in p.generators]
        self.degs = [g[1] for g in p.generators]
        self.heights = [g[2] for g in p.generators]
        self.vdeg = p.v_degree
        self.by_degree: dict[int, list[Mono]] = {}
        self._enumerate()
        self._gen_coproduct = [self._generator_coproduct(i) for i in range(len(self.names))]
        self._cache: dict[Mono, frozenset] = {}

    def _enumerate(self) -> None:
        n = len(self.names)

        def rec(i: int, deg: int, acc: list[int]) -> None:
            if i == n:
                self.by_degree.setdefault(deg, []).append(tuple(acc))
                return
            for e in range(self.heights[i]):
                d2 = deg + e * self.degs[i]
                if d2 > self.t_max:
                    break
                acc.append(e)
                rec(i + 1, d2, acc)
                acc.pop()

        rec(0, 0, [])
        for d in self.by_degree:
            self.by_degree[d].sort()

    def degree(self, m: Mono) -> int:
        return sum(e * d for e, d in zip(m, self.degs))

    def reduced_monomials(self) -> list[Mono]:
        return [m for d in sorted(self.by_degree) if d > 0 for m in self.by_degree[d]]

    def unit(self) -> Mono:
        return (0,) * len(self.names)

    def _mono(self, exps: Mapping[str, int]) -> Mono | None:
        out = [0] * len(self.names)
        for name, e in exps.items():
            i = self.names.index(name)
            if e >= self.heights[i]:
                return None
            out[i] = e
        return tuple(out)

    def _generator_coproduct(self, i: int) -> frozenset:
        name = self.names[i]
        if name not in self.p.coproduct:
            g = [0] * len(self.names)
            g[i] = 1
            g = tuple(g)
            return frozenset({(0, g, self.unit()), (0, self.unit(), g)})
        acc: set = set()
        for k, left, right in self.p.coproduct[name]:
            lm, rm = self._mono(left), self._mono(right)
            if lm is None or rm is None:
                continue
            if self.degree(lm) + self.degree(rm) + k * (self.vdeg or 0) != self.degs[i]:
                raise ValueError(f"coproduct term of {name} has the wrong degree")
            acc ^= {(k, lm, rm)}
        return frozenset(acc)

    def _mul(self, a: Mono, b: Mono) -> Mono | None:
        out = []
        for x, y, h in zip(a, b, self.heights):
            if x + y >= h:
                return None
            out.append(x + y)
        return tuple(out)

    def _tensor_mul(self, x: frozenset, y: frozenset) -> frozenset:
        acc: set = set()
        for k1, l1, r1 in x:
            for k2, l2, r2 in y:
                l = self._mul(l1, l2)
                if l is None:
                    continue
                r = self._mul(r1, r2)
                if r is None:
                    continue
                acc ^= {(k1 + k2, l, r)}
        return frozenset(acc)

    def coproduct(self, m: Mono) -> frozenset:
        """Full coproduct of a monomial as a set of (v-power, left, right)."""
        got = self._cache.get(m)
        if got is not None:
            return got
        if self.p.is_primitive:
            got = self._primitive_coproduct(m)
        else:
            got = frozenset({(0, self.unit(), self.unit())})
            for i, e in enumerate(m):
                for _ in range(e):
                    got = self._tensor_mul(got, self._gen_coproduct[i])
        self._cache[m] = got
        return got

    def _primitive_coproduct(self, m: Mono) -> frozenset:
        # Delta(x^a) = sum_i C(a, i) x^i (x) x^{a-i}, multiplied over generators
        parts: list[list[tuple[int, int]]] = []
        for a in m:
            parts.append([(i, a - i) for i in range(a + 1) if binom_mod2(a, i)])
        out = set()

        def rec(j: int, left: list[int], right: list[int]) -> None:
            if j == len(parts):
                out.add((0, tuple(left), tuple(right)))
                return
            for i, r in parts[j]:
                left.append(i)
                right.append(r)
                rec(j + 1, left, right)
                left.pop()
                right.pop()

        rec(0, [], [])
        return frozenset(out)

    def reduced_coproduct(self, m: Mono) -> frozenset:
        u = self.unit()
        return frozenset(t for t in self.coproduct(m) if t[1] != u and t[2] != u)

    def check_coassociative(self) -> list[Mono]:
        """Monomials on which (Delta (x) 1)Delta != (1 (x) Delta)Delta."""
        bad = []
        for m in [x for d in sorted(self.by_degree) for x in self.by_degree[d]]:
            lhs: set = set()
            rhs: set = set()
            for k, l, r in self.coproduct(m):
                for k2, a, b in self.coproduct(l):
                    lhs ^= {(k + k2, a, b, r)}
                for k2, a, b in self.coproduct(r):
                    rhs ^= {(k + k2, l, a, b)}
            if lhs != rhs:
                bad.append(m)
        return bad

    def check_powers_primitive(self) -> list[tuple[str, int]]:
        """(generator, 2^i) pairs where x^{2^i} fails to be primitive (primitive presentations)."""
        bad = []
        for i, name in enumerate(self.names):
            e = 1
            while e < self.heights[i]:
                m = [0] * len(self.names)
                m[i] = e
                m = tuple(m)
                if self.degree(m) <= self.t_max and self.reduced_coproduct(m):
                    bad.append((name, e))
                e *= 2
        return bad

    def format(self, m: Mono) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"


def build_hopf(p: HopfPresentation, t_max: int) -> HopfData:
    return HopfData(p, t_max)


@dataclass
class CobarResult:
    dims: dict[tuple[int, int], int]
    # (n, t, k) dims with k the v-power, present when d preserves the v-power
    dims_af: dict[tuple[int, int, int], int] | None
    # (n, t) -> ranks of v, v^2, ... on H^{n,t} while the target stays in the window
    v_ranks: dict[tuple[int, int], list[int]]
    # (n, t) -> 0 when every computed v^j is injective, the least j with v^j = 0,
    # or -1 when neither is visible inside the window
    torsion_order: dict[tuple[int, int], int]
    n_max: int
    t_max: int


class _Cobar:
    def __init__(self, h: HopfData, n_max: int):
        self.h = h
        self.n_max = n_max
        self.vdeg = h.vdeg
        self.reduced = {m: sorted(h.reduced_coproduct(m)) for m in h.reduced_monomials()}
        self.red_by_deg: dict[int, list[Mono]] = {}
        for m in h.reduced_monomials():
            self.red_by_deg.setdefault(h.degree(m), []).append(m)
        self.min_deg = min(self.red_by_deg) if self.red_by_deg else 1
        self._basis: dict[tuple[int, int], list] = {}
        self._index: dict[tuple[int, int], dict] = {}
        self._images: dict[tuple[int, int], list[int]] = {}
        self.homogeneous = all(k == 0 for terms in self.reduced.values() for k, _, _ in terms)

    @lru_cache(maxsize=None)
    def tensors(self, n: int, deg: int) -> tuple:
        """All n-tuples of reduced monomials of total degree ``deg``."""
        if n == 0:
            return ((),) if deg == 0 else ()
        out = []
        for d in sorted(self.red_by_deg):
            rest = deg - d
            if rest < (n - 1) * self.min_deg:
                break
            tails = self.tensors(n - 1, rest)
            if not tails:
                continue
            for m in self.red_by_deg[d]:
                for tail in tails:
                    out.append((m,) + tail)
        return tuple(out)

    def basis(self, n: int, t: int) -> list:
        key = (n, t)
        b = self._basis.get(key)
        if b is None:
            b = []
            k = 0
            while True:
                deg = t - k * (self.vdeg or 0)
                if deg < 0:
                    break
                b.extend((k, x) for x in self.tensors(n, deg))
                if not self.vdeg:
                    break
                k += 1
            self._basis[key] = b
            self._index[key] = {x: i for i, x in enumerate(b)}
        return b

    def index(self, n: int, t: int) -> dict:
        self.basis(n, t)
        return self._index[(n, t)]

    def d_images(self, n: int, t: int) -> list[int]:
        """d: C^{n,t} -> C^{n+1,t} on the basis."""
        key = (n, t)
        got = self._images.get(key)
        if got is not None:
            return got
        target = self.index(n + 1, t)
        out = []
        for k, x in self.basis(n, t):
            v = 0
            for i, m in enumerate(x):
                for kv, l, r in self.reduced[m]:
                    y = (k + kv, x[:i] + (l, r) + x[i + 1:])
                    v ^= 1 << target[y]
            out.append(v)
        self._images[key] = out
        return out

    def apply_d(self, n: int, t: int, vec: int) -> int:
        imgs = self.d_images(n, t)
        out = 0
        p = 0
        while vec:
            if vec & 1:
                out ^= imgs[p]
            vec >>= 1
            p += 1
        return out

    def v_shift(self, n: int, t: int, vec: int, j: int) -> int:
        """Multiply a C^{n,t} vector by v^j."""
        basis = self.basis(n, t)
        idx = self.index(n, t + j * self.vdeg)
        out = 0
        p = 0
        while vec:
            if vec & 1:
                k, x = basis[p]
                out ^= 1 << idx[(k + j, x)]
            vec >>= 1
            p += 1
        return out


def cobar_cohomology(p: HopfPresentation, n_max: int, t_max: int, v_profile: bool = True) -> CobarResult:
    """Cohomology of the reduced cobar complex for n <= n_max and t <= t_max."""
    h = build_hopf(p, t_max)
    cx = _Cobar(h, n_max)
    with_v = bool(cx.vdeg) and v_profile
    ranks: dict[tuple[int, int], int] = {}

    def rank_d(n: int, t: int) -> int:
        if n < 0:
            return 0
        if (n, t) not in ranks:
            ranks[(n, t)] = rank_of(cx.d_images(n, t)) if cx.basis(n, t) else 0
        return ranks[(n, t)]

    dims: dict[tuple[int, int], int] = {}
    cycles: dict[tuple[int, int], list[int]] = {}
    bounds: dict[tuple[int, int], list[int]] = {}
    for n in range(n_max + 1):
        for t in range(t_max + 1):
            size = len(cx.basis(n, t))
            if not size:
                continue
            dim = size - rank_d(n, t) - rank_d(n - 1, t)
            if dim:
                dims[(n, t)] = dim
            if with_v:
                cycles[(n, t)] = kernel_of_images(cx.d_images(n, t))
                bounds[(n, t)] = Echelon(cx.d_images(n - 1, t)).rref_rows() if n > 0 else []

    dims_af = None
    if cx.homogeneous and not cx.vdeg:
        dims_af = {(n, t, 0): d for (n, t), d in dims.items()}
    elif cx.homogeneous:
        dims_af = {}
        for n in range(n_max + 1):
            for t in range(t_max + 1):
                k = 0
                while True:
                    deg = t - k * (cx.vdeg or 0)
                    if deg < 0:
                        break
                    d = _block_dim(cx, n, deg)
                    if d:
                        dims_af[(n, t, k)] = d
                    if not cx.vdeg:
                        break
                    k += 1

    v_ranks: dict[tuple[int, int], list[int]] = {}
    torsion: dict[tuple[int, int], int] = {}
    if with_v:
        for (n, t), dim in dims.items():
            ranks = []
            j = 1
            while t + j * cx.vdeg <= t_max:
                t2 = t + j * cx.vdeg
                e = Echelon(bounds.get((n, t2), []))
                base = len(e)
                for z in cycles[(n, t)]:
                    e.add(cx.v_shift(n, t, z, j))
                ranks.append(len(e) - base)
                j += 1
            v_ranks[(n, t)] = ranks
            if ranks and all(r == dim for r in ranks):
                torsion[(n, t)] = 0
            elif 0 in ranks:
                torsion[(n, t)] = ranks.index(0) + 1
            else:
                torsion[(n, t)] = 0 if not ranks else -1
    return CobarResult(dims, dims_af, v_ranks, torsion, n_max, t_max)


def _block_dim(cx: _Cobar, n: int, deg: int) -> int:
    """Cohomology of the v-free cobar complex in (n, deg)."""
    key = ("blk", n, deg)
    cache = cx.__dict__.setdefault("_blocks", {})
    if key in cache:
        return cache[key]

    def images(nn: int) -> list[int]:
        src = cx.tensors(nn, deg)
        tgt = {x: i for i, x in enumerate(cx.tensors(nn + 1, deg))}
        out = []
        for x in src:
            v = 0
            for i, m in enumerate(x):
                for _, l, r in cx.reduced[m]:
                    v ^= 1 << tgt[x[:i] + (l, r) + x[i + 1:]]
            out.append(v)
        return out

    if not cx.tensors(n, deg):
        cache[key] = 0
        return 0
    size = len(cx.tensors(n, deg))
    cache[key] = size - rank_of(images(n)) - (rank_of(images(n - 1)) if n > 0 else 0)
    return cache[key]


# --- presets ----------------------------------------------------------------

def _dual_An(n: int) -> HopfPresentation:
    gens = []
    for i in range(1, n + 2):
        gens.append((f"zeta{i}", (1 << i) - 1, 1 << (n + 2 - i)))
    table = {}
    for k in range(1, n + 2):
        terms = []
        for i in range(0, k + 1):
            j = k - i
            left = {f"zeta{i}": 1} if i else {}
            right = {f"zeta{j}": 1 << i} if j else {}
            terms.append((0, left, right))
        table[f"zeta{k}"] = terms
    return HopfPresentation(tuple(gens), None, table, f"dual-A{n}")


def _eqn(n: int) -> HopfPresentation:
    return HopfPresentation(((f"zeta{n + 1}", (1 << (n + 1)) - 1, 2),), None, {}, f"EQ{n}")


def _e0af(window: int) -> HopfPresentation:
    gens = [("t2sq", 12, 2)]
    k = 3
    while 2 * ((1 << k) - 1) <= window:
        gens.append((f"t{k}", 2 * ((1 << k) - 1), 4))
        k += 1
    return HopfPresentation(tuple(gens), 6, {}, "E0AF-sigma2tilde")


PRESETS = ("dual-A0", "dual-A1", "dual-A2", "EQ0", "EQ1", "EQ2", "E0AF-sigma2tilde")


def preset(name: str, window: int = 48) -> HopfPresentation:
    """Named presentations; ``window`` bounds the generator list of E0AF-sigma2tilde."""
    if name.startswith("dual-A") and name[6:].isdigit():
        return _dual_An(int(name[6:]))
    if name.startswith("EQ") and name[2:].isdigit():
        return _eqn(int(name[2:]))
    if name == "E0AF-sigma2tilde":
        return _e0af(window)
    raise ValueError(f"unknown preset {name!r}")
