"""Margolis homology H(M; Q_n) and the good/evil split of Ext over E[Q_n].

Modules are cohomologically graded, so Q_n raises degree by q = 2^{n+1} - 1.
Ext is taken as Ext_{E[Q_n]}(M, F2) (the convention of ``resolution``); for an
E[Q_n]-module this is

    Ext^{s,t} = H(M)_{t - q s}                    for s >= 1,
    Ext^{0,t} = H(M)_t  (+)  (Q_n-rank out of M_t),

so the v_n tower sits on the bidegrees (s, d + q s) of each homology class in
degree d and the Q_n-image classes all live in s = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .f2core import Echelon, QuotientSpace, Subspace, kernel_of_images
from .modfmt import GradedModule, tensor, truncate
from .steenrod import milnor_primitive

__all__ = [
    "MargolisResult",
    "q_degree",
    "q_images",
    "margolis_homology",
    "split_dims",
    "tensor_power",
    "closed_form_margolis",
    "dual_quotient_margolis",
]


def q_degree(n: int) -> int:
    return (1 << (n + 1)) - 1


@dataclass
class MargolisResult:
    n: int
    ker_dims: dict[int, int] = field(default_factory=dict)
    im_dims: dict[int, int] = field(default_factory=dict)
    homology_dims: dict[int, int] = field(default_factory=dict)
    homology_basis: dict[int, Subspace] = field(default_factory=dict)
    # rank of Q_n leaving degree d (= dim M_d - ker_dims[d])
    out_rank: dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.homology_dims.values())


def q_images(m: GradedModule, n: int, d: int) -> list[int]:
    """Q_n applied to each basis vector of M_d."""
    qn = milnor_primitive(n)
    return [m.element_vector(qn, d, 1 << p) for p in range(m.dim_in(d))]


def margolis_homology(m: GradedModule, n: int, max_deg: int | None = None) -> MargolisResult:
    """ker/im/homology of Q_n on M in every degree d <= max_deg (default: all of M)."""
    q = q_degree(n)
    top = m.max_degree if max_deg is None else max_deg
    res = MargolisResult(n)
    cache: dict[int, list[int]] = {}

    def images(d: int) -> list[int]:
        if d not in cache:
            cache[d] = q_images(m, n, d)
        return cache[d]

    for d in range(m.min_degree, top + 1):
        dim = m.dim_in(d)
        if dim == 0:
            continue
        ker = kernel_of_images(images(d))
        im = Echelon(images(d - q)).rref_rows() if m.dim_in(d - q) else []
        quo = QuotientSpace(ker, im)
        res.ker_dims[d] = len(ker)
        res.im_dims[d] = len(im)
        res.homology_dims[d] = quo.dim
        res.homology_basis[d] = Subspace(dim, quo.reps)
        res.out_rank[d] = dim - len(ker)
    return res


def tensor_power(m: GradedModule, k: int, max_deg: int) -> GradedModule:
    """M^{(x)k} truncated above max_deg."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out = truncate(m, max_deg)
    for _ in range(k - 1):
        out = tensor(out, m, max_deg)
    return out


def split_dims(m: GradedModule, k: int, n: int, t_max: int) -> tuple[dict[tuple[int, int], int], dict[int, int]]:
    """(good, evil) dimensions of Ext_{E[Q_n]}(M^{(x)k}, F2) for t <= t_max.

    good[(s, t)] counts F2[v_n] (x) H(M^{(x)k}; Q_n) at v_n-power s, with v_n in
    bidegree (1, q); evil[t] counts the Q_n-image classes, all in s = 0, indexed
    by the degree t of the element that Q_n moves.  The tensor power is taken
    through degree t_max + q, which makes every reported entry exact.
    """
    q = q_degree(n)
    mk = tensor_power(m, k, t_max + q)
    res = margolis_homology(mk, n, t_max)
    good: dict[tuple[int, int], int] = {}
    for d, h in res.homology_dims.items():
        if not h:
            continue
        s = 0
        while d + q * s <= t_max:
            good[(s, d + q * s)] = h
            s += 1
    evil = {d: r for d, r in res.out_rank.items() if r}
    return good, evil


def _truncated_poly_series(gens: list[tuple[int, int]], t_max: int) -> dict[int, int]:
    """Poincare series of a tensor product of truncated polynomial algebras F2[x]/x^h."""
    series = [0] * (t_max + 1)
    series[0] = 1
    for deg, height in gens:
        new = [0] * (t_max + 1)
        for t, c in enumerate(series):
            if not c:
                continue
            for e in range(height):
                u = t + e * deg
                if u > t_max:
                    break
                new[u] += c
        series = new
    return {t: c for t, c in enumerate(series) if c}


def closed_form_margolis(n: int, t_max: int, variant: str = "An") -> dict[int, int]:
    """Poincare series of H(A//B_*; Q_n) up to t_max from its polynomial presentation.

    ``variant`` "An" is B = A(n): generators zeta_j^{e_j} with e_j = 2^{n+2-j}
    for 2 <= j <= n+1 and 2 for j >= n+2, each truncated at zeta_j^{2^{n+1}}.
    ``variant`` "En" is B = E[Q_0..Q_n]: generators zeta_j^2, truncated likewise.
    """
    if n < 1 and variant == "An":
        raise ValueError("n must be at least 1")
    full = 1 << (n + 1)
    gens = []
    j = 1 if variant == "En" else 2
    while (1 << j) - 1 <= t_max:
        zdeg = (1 << j) - 1
        if variant == "En":
            e = 2
        elif j <= n + 1:
            e = 1 << (n + 2 - j)
        else:
            e = 2
        if e * zdeg <= t_max:
            gens.append((e * zdeg, full // e))
        j += 1
    return _truncated_poly_series(gens, t_max)


def dual_quotient_margolis(n: int, t_max: int, variant: str = "An") -> dict[int, int]:
    """H(A//B_*; Q_n) computed directly on a monomial basis, homologically graded.

    A//A(n)_* = F2[zeta_1^{2^{n+1}}, zeta_2^{2^n}, ..., zeta_{n+1}^2, zeta_{n+2}, ...]
    and A//E[Q_0..Q_n]_* = F2[zeta_1^2, ..., zeta_{n+1}^2, zeta_{n+2}, ...];
    Q_n is the derivation with Q_n(zeta_k) = zeta_{k-n-1}^{2^{n+1}} (zeta_0 = 1),
    lowering degree by 2^{n+1} - 1.  Independent of :func:`closed_form_margolis`.
    """
    q = q_degree(n)
    jmax = 1
    while (1 << (jmax + 1)) - 1 <= t_max + q:
        jmax += 1
    # minimal exponent of zeta_j in the quotient
    step = []
    for j in range(1, jmax + 1):
        if variant == "En":
            e = 2 if j <= n + 1 else 1
        else:
            e = 1 << (n + 2 - j) if j <= n + 1 else 1
        step.append(e)
    zdeg = [(1 << j) - 1 for j in range(1, jmax + 1)]
    top = t_max + q

    # monomials: exponent tuples (a_1..a_jmax), a_j multiple of step[j-1]
    by_deg: dict[int, list[tuple[int, ...]]] = {}

    def rec(j: int, deg: int, acc: list[int]) -> None:
        if j == jmax:
            by_deg.setdefault(deg, []).append(tuple(acc))
            return
        a = 0
        while deg + a * zdeg[j] <= top:
            acc.append(a)
            rec(j + 1, deg + a * zdeg[j], acc)
            acc.pop()
            a += step[j]

    rec(0, 0, [])
    index = {d: {mono: p for p, mono in enumerate(ms)} for d, ms in by_deg.items()}
    big = 1 << (n + 1)

    def qn(mono: tuple[int, ...]) -> int:
        """Q_n(mono) as a bit vector in degree deg(mono) - q."""
        d = sum(a * z for a, z in zip(mono, zdeg))
        out = 0
        for k in range(n + 1, jmax + 1):
            a = mono[k - 1]
            if a % 2 == 0:
                continue  # d(zeta^a) = a zeta^{a-1} d(zeta)
            new = list(mono)
            new[k - 1] -= 1
            src = k - n - 1
            if src >= 1:
                new[src - 1] += big
            p = index.get(d - q, {}).get(tuple(new))
            if p is None:
                raise AssertionError("derivation left the quotient")
            out ^= 1 << p
        return out

    dims: dict[int, int] = {}
    for d in range(0, t_max + 1):
        ms = by_deg.get(d, [])
        if not ms:
            continue
        ker = kernel_of_images([qn(x) for x in ms])
        im = Echelon(qn(x) for x in by_deg.get(d + q, [])).rref_rows()
        h = len(ker) - len(im)
        if h:
            dims[d] = h
    return dims
