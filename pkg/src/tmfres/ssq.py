"""Spectral sequences of filtered cochain complexes, with Chevalley-Eilenberg presets.

A :class:`FilteredComplex` is bigraded by (s, t); d raises s by one, keeps t,
and never lowers the integer filtration weight of a basis element (a
decreasing filtration F^p = span of basis elements of weight >= p).  Half
integer filtrations n, n + epsilon are stored as 2n, 2n + 1.

The presets are the polynomial CE complexes F2[v, h_{i,j}] for the May-Ravenel
E_1-page (variant "l2") and its quotient (variant "l2bar"), with the generator
differentials written out in :func:`ce_generators`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .f2core import Echelon, bits, kernel_of_images, rank_of

__all__ = [
    "FilteredComplex",
    "SSPages",
    "CEGenerator",
    "ce_generators",
    "ce_complex",
    "cohomology",
    "ss_pages",
    "associated_graded",
    "mre1_enumerate",
    "mre1_family",
    "family_monomials",
    "afe1_family",
    "family_ii_torsion",
    "v2_local_rank",
    "exterior_pattern",
    "parabola_points",
    "mass",
]


@dataclass
class FilteredComplex:
    """Cochain complex with basis labels and filtration weights per (s, t).

    ``d[(s, t)][i]`` is the image of basis element i of (s, t) as a bit vector
    over the basis of (s + 1, t).
    """

    basis: dict[tuple[int, int], list] = field(default_factory=dict)
    weights: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    d: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    # optional extra gradings per basis element (e.g. May-Ravenel weight)
    grading: dict[tuple[int, int], list[int]] | None = None
    # optional multiplication by a degree-(0, shift) element: (s, t, vec) -> vec
    multiplier: Callable[[int, int, int], int] | None = None
    mult_shift: int = 0

    def images(self, s: int, t: int) -> list[int]:
        return self.d.get((s, t), [0] * len(self.basis.get((s, t), [])))

    def dim(self, s: int, t: int) -> int:
        return len(self.basis.get((s, t), []))

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted(self.basis)

    def apply(self, s: int, t: int, v: int) -> int:
        imgs = self.images(s, t)
        out = 0
        for p in bits(v):
            out ^= imgs[p]
        return out

    def check_d_squared(self) -> list[tuple[int, int]]:
        bad = []
        for (s, t) in self.bidegrees():
            for v in self.images(s, t):
                if v and self.apply(s + 1, t, v):
                    bad.append((s, t))
                    break
        return bad

    def check_monotone(self) -> list[tuple[int, int]]:
        """Bidegrees where d lowers the filtration of some basis element."""
        bad = []
        for (s, t) in self.bidegrees():
            w_src = self.weights[(s, t)]
            w_tgt = self.weights.get((s + 1, t), [])
            for i, v in enumerate(self.images(s, t)):
                if any(w_tgt[j] < w_src[i] for j in bits(v)):
                    bad.append((s, t))
                    break
        return bad

    def preserves_grading(self) -> bool:
        if self.grading is None:
            return False
        for (s, t) in self.bidegrees():
            g_src = self.grading[(s, t)]
            g_tgt = self.grading.get((s + 1, t), [])
            for i, v in enumerate(self.images(s, t)):
                if any(g_tgt[j] != g_src[i] for j in bits(v)):
                    return False
        return True


# --- cohomology -------------------------------------------------------------

@dataclass
class Cohomology:
    dims: dict[tuple[int, int], int]
    graded_dims: dict[tuple[int, int, int], int] | None
    cycles: dict[tuple[int, int], list[int]]
    boundaries: dict[tuple[int, int], list[int]]
    v_ranks: dict[tuple[int, int], list[int]] = field(default_factory=dict)


def _restrict(images: Sequence[int], keep: Iterable[int]) -> list[int]:
    return [images[i] for i in keep]


def cohomology(fc: FilteredComplex, s_range: Iterable[int] | None = None, t_max: int | None = None,
               v_profile: bool = False) -> Cohomology:
    """Total cohomology per (s, t); per extra grading when d preserves it.

    Only bidegrees whose s + 1 neighbour is present in ``fc`` are reported.
    With ``v_profile`` and a multiplier, ranks of the powers of the multiplier on
    cohomology are recorded while the target stays inside the complex.
    """
    dims: dict[tuple[int, int], int] = {}
    cycles: dict[tuple[int, int], list[int]] = {}
    bounds: dict[tuple[int, int], list[int]] = {}
    keys = [k for k in fc.bidegrees() if (s_range is None or k[0] in s_range) and (t_max is None or k[1] <= t_max)]
    for (s, t) in keys:
        z = kernel_of_images(fc.images(s, t))
        b = Echelon(fc.images(s - 1, t)).rref_rows() if (s - 1, t) in fc.basis else []
        cycles[(s, t)] = z
        bounds[(s, t)] = b
        if len(z) - len(b):
            dims[(s, t)] = len(z) - len(b)

    graded = None
    if fc.preserves_grading():
        graded = {}
        for (s, t) in keys:
            g = fc.grading[(s, t)]  # type: ignore[index]
            gp = fc.grading.get((s - 1, t), [])  # type: ignore[union-attr]
            for f in sorted(set(g)):
                src = [i for i, x in enumerate(g) if x == f]
                prev = [i for i, x in enumerate(gp) if x == f]
                z = len(src) - rank_of(_restrict(fc.images(s, t), src))
                b = rank_of(_restrict(fc.images(s - 1, t), prev)) if prev else 0
                if z - b:
                    graded[(s, t, f)] = z - b

    res = Cohomology(dims, graded, cycles, bounds)
    if v_profile and fc.multiplier is not None:
        sh = fc.mult_shift
        for (s, t), dim in dims.items():
            ranks = []
            j = 1
            while (s, t + j * sh) in cycles:
                t2 = t + j * sh
                e = Echelon(bounds[(s, t2)])
                base = len(e)
                for z in cycles[(s, t)]:
                    w = z
                    for step in range(j):
                        w = fc.multiplier(s, t + step * sh, w)
                    e.add(w)
                ranks.append(len(e) - base)
                j += 1
            res.v_ranks[(s, t)] = ranks
    return res


# --- spectral sequence ------------------------------------------------------

@dataclass
class SSPages:
    pages: dict[int, dict[tuple[int, int, int], int]]  # r -> (p, s, t) -> dim
    e_inf: dict[tuple[int, int, int], int]
    r_inf: int
    # bidegrees with E_infinity in two or more filtrations: hidden extensions possible
    extension_ambiguous: list[tuple[int, int]]

    def page_st(self, r: int) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for (p, s, t), n in self.pages[r].items():
            out[(s, t)] = out.get((s, t), 0) + n
        return out

    def display_filtration(self, p: int) -> str:
        """Stored 2n / 2n+1 filtrations shown as n / n+eps."""
        return f"{p // 2}" if p % 2 == 0 else f"{p // 2}+eps"


def _z(fc: FilteredComplex, s: int, t: int, p: int, r: int) -> list[int]:
    """Z_r^p = {x in F^p : dx in F^{p+r}} in (s, t); Z_{-1}^p = F^p."""
    w = fc.weights.get((s, t), [])
    src = [i for i, x in enumerate(w) if x >= p]
    if r < 0:
        return [1 << i for i in src]
    wt = fc.weights.get((s + 1, t), [])
    low = 0
    for j, x in enumerate(wt):
        if x < p + r:
            low |= 1 << j
    imgs = [fc.images(s, t)[i] & low for i in src]
    out = []
    for k in kernel_of_images(imgs):
        v = 0
        for q in bits(k):
            v |= 1 << src[q]
        out.append(v)
    return out


def _page_dim(fc: FilteredComplex, s: int, t: int, p: int, r: int) -> int:
    z = _z(fc, s, t, p, r)
    if not z:
        return 0
    denom = Echelon(_z(fc, s, t, p + 1, r - 1))
    if (s - 1, t) in fc.basis:
        for x in _z(fc, s - 1, t, p - r + 1, r - 1):
            denom.add(fc.apply(s - 1, t, x))
    return len(z) - len(denom)


def ss_pages(fc: FilteredComplex, r_max: int, s_range: Iterable[int] | None = None,
             t_max: int | None = None) -> SSPages:
    """E_r^{p,s,t} for r = 0..r_max and E_infinity, for the decreasing weight filtration.

    d_r maps E_r^{p,s,t} to E_r^{p+r,s+1,t}.  E_infinity is the page with r
    beyond the spread of weights, where every d_r vanishes for degree reasons.
    """
    keys = [k for k in fc.bidegrees() if (s_range is None or k[0] in s_range) and (t_max is None or k[1] <= t_max)]
    all_w = [x for k in fc.bidegrees() for x in fc.weights[k]]
    wmin, wmax = (min(all_w), max(all_w)) if all_w else (0, 0)
    r_inf = wmax - wmin + 1
    pages: dict[int, dict] = {}
    for r in sorted(set(range(0, r_max + 1)) | {r_inf}):
        table = {}
        for (s, t) in keys:
            for p in sorted(set(fc.weights[(s, t)])):
                n = _page_dim(fc, s, t, p, r)
                if n:
                    table[(p, s, t)] = n
        pages[r] = table
    e_inf = pages[r_inf]
    gr = associated_graded(fc, s_range=[k[0] for k in keys], t_max=t_max)
    if gr != e_inf:
        raise AssertionError("E_infinity differs from the associated graded of cohomology")
    seen: dict[tuple[int, int], set] = {}
    for (p, s, t) in e_inf:
        seen.setdefault((s, t), set()).add(p)
    ambiguous = sorted(k for k, ps in seen.items() if len(ps) > 1)
    return SSPages({r: pg for r, pg in pages.items() if r <= r_max}, e_inf, r_inf, ambiguous)


def associated_graded(fc: FilteredComplex, s_range: Iterable[int] | None = None,
                      t_max: int | None = None) -> dict[tuple[int, int, int], int]:
    """dim F^p H / F^{p+1} H per (p, s, t), from total cycles and boundaries."""
    out = {}
    keys = [k for k in fc.bidegrees() if (s_range is None or k[0] in s_range) and (t_max is None or k[1] <= t_max)]
    for (s, t) in keys:
        z_all = kernel_of_images(fc.images(s, t))
        b = Echelon(fc.images(s - 1, t)).rref_rows() if (s - 1, t) in fc.basis else []
        w = fc.weights[(s, t)]

        def level(p: int) -> int:
            mask = 0
            for i, x in enumerate(w):
                if x < p:
                    mask |= 1 << i
            # cycles lying in F^p: kernel of "drop the F^p part" on the cycle space
            sub = kernel_of_images([z & mask for z in z_all])
            e = Echelon(b)
            base = len(e)
            for k in sub:
                v = 0
                for q in bits(k):
                    v ^= z_all[q]
                e.add(v)
            return len(e) - base

        ps = sorted(set(w))
        for p in ps:
            n = level(p) - level(p + 1)
            if n:
                out[(p, s, t)] = n
    return out


# --- Chevalley-Eilenberg presets -------------------------------------------

@dataclass(frozen=True)
class CEGenerator:
    name: str
    i: int      # 0 for v
    j: int
    s: int
    t: int
    mr: int


def _mr_weight(i: int) -> int:
    if i == 1:
        return 1
    if i % 2 == 0:
        return 1 << (i // 2)
    return 3 * (1 << ((i - 1) // 2 - 1))


V_DEGREE = 6


def ce_generators(variant: str, t_max: int) -> tuple[list[CEGenerator], dict[str, list[dict[str, int]]]]:
    """Generators with degrees and weights, and d on generators as lists of monomials.

    A monomial is a dict {generator name: exponent}.  Every h_{i,j} with
    internal degree 2^{j+1}(2^i - 1) <= t_max is included.
    """
    if variant not in ("l2", "l2bar"):
        raise ValueError(f"unknown variant {variant!r}")
    gens = [CEGenerator("v", 0, 0, 0, V_DEGREE, 0)]
    first = 1 if variant == "l2" else 2
    i = first
    while 2 * ((1 << i) - 1) <= t_max:
        for j in (0, 1):
            if variant == "l2bar" and i == 2 and j == 0:
                continue
            t = (1 << (j + 1)) * ((1 << i) - 1)
            if t > t_max:
                continue
            name = f"h{i}{j}"
            if variant == "l2bar" and i == 2:
                name = "h21~"
            gens.append(CEGenerator(name, i, j, 1, t, _mr_weight(i)))
        i += 1
    names = {g.name for g in gens}
    d: dict[str, list[dict[str, int]]] = {g.name: [] for g in gens}

    def h(a: int, b: int) -> str:
        if variant == "l2bar" and a == 2 and b == 1:
            return "h21~"
        return f"h{a}{b}"

    if variant == "l2":
        chi = [{"v": 1, "h20": 1}, {"h21": 1}]
        rules = {
            "h20": [{"h10": 1, "h11": 1}],
            "h21": [{"v": 1, "h10": 1, "h11": 1}],
            "h30": [dict(m, h10=1) for m in chi],
            "h31": [dict(m, v=m.get("v", 0) + 2, h11=1) for m in chi],
            "h40": [{"h10": 1, "h31": 1}, {"v": 2, "h11": 1, "h30": 1}]
            + [{"v": 1 + 2 * m.get("v", 0), **{k: 2 * e for k, e in m.items() if k != "v"}} for m in chi],
            "h41": [{"v": 5, "h10": 1, "h31": 1}, {"v": 7, "h11": 1, "h30": 1}]
            + [{"v": 6 + 2 * m.get("v", 0), **{k: 2 * e for k, e in m.items() if k != "v"}} for m in chi],
        }
    else:
        rules = {
            "h40": [{"v": 1, "h21~": 2}],
            "h41": [{"v": 6, "h21~": 2}],
        }
    for g in gens:
        if g.i >= 5:
            if g.j == 0:
                rules[g.name] = [{"v": 1, h(g.i - 2, 1): 2}]
            else:
                rules[g.name] = [{"v": 1 << (g.i - 1), h(g.i - 2, 0): 2}]
    for name, terms in rules.items():
        if name not in names:
            continue
        if any(k not in names for term in terms for k in term):
            raise AssertionError(f"differential of {name} needs generators outside the window")
        d[name] = terms
    return gens, d


def ce_complex(variant: str, s_max: int, t_max: int, filtration: str = "AF",
               generator_window: int | None = None) -> FilteredComplex:
    """Polynomial CE complex through (s_max + 1, t_max) with the Leibniz differential.

    ``filtration`` is "AF" (power of v) or "MR" (May-Ravenel weight); the other
    weight is kept as ``grading``.  ``generator_window`` caps the internal degree
    of the h_{i,j}; a cap below t_max would drop generators and is rejected.
    """
    if generator_window is not None and generator_window < t_max:
        raise ValueError(f"generator window {generator_window} misses generators of degree <= {t_max}")
    if filtration not in ("AF", "MR"):
        raise ValueError(f"unknown filtration {filtration!r}")
    gens, dgen = ce_generators(variant, t_max)
    names = [g.name for g in gens]
    pos = {n: k for k, n in enumerate(names)}
    n = len(gens)

    # enumerate monomials with s <= s_max + 1, t <= t_max
    monos: dict[tuple[int, int], list[tuple[int, ...]]] = {}

    def rec(k: int, s: int, t: int, acc: list[int]) -> None:
        if k == n:
            monos.setdefault((s, t), []).append(tuple(acc))
            return
        g = gens[k]
        e = 0
        while s + e * g.s <= s_max + 1 and t + e * g.t <= t_max:
            acc.append(e)
            rec(k + 1, s + e * g.s, t + e * g.t, acc)
            acc.pop()
            e += 1

    rec(0, 0, 0, [])
    for key in monos:
        monos[key].sort()
    index = {key: {m: q for q, m in enumerate(ms)} for key, ms in monos.items()}
    dvec = {name: [tuple(term.get(x, 0) for x in names) for term in dgen[name]] for name in names}

    fc = FilteredComplex()
    for key, ms in monos.items():
        s, t = key
        fc.basis[key] = ms
        af = [m[0] for m in ms]
        mr = [sum(e * g.mr for e, g in zip(m, gens)) for m in ms]
        fc.weights[key] = af if filtration == "AF" else mr
        if fc.grading is None:
            fc.grading = {}
        fc.grading[key] = mr if filtration == "AF" else af
        if s > s_max:
            continue
        tgt = index.get((s + 1, t), {})
        imgs = []
        for m in ms:
            v = 0
            for k, e in enumerate(m):
                if e % 2 == 0:
                    continue  # d(x^e) = e x^{e-1} dx
                for term in dvec[names[k]]:
                    new = list(m)
                    new[k] -= 1
                    for q, x in enumerate(term):
                        new[q] += x
                    new = tuple(new)
                    q = tgt.get(new)
                    if q is None:
                        raise AssertionError(f"d left the window at {key}")
                    v ^= 1 << q
            imgs.append(v)
        fc.d[key] = imgs
    # keep only bidegrees with s <= s_max in the differential domain; top row has no d
    for key in list(fc.basis):
        if key[0] > s_max:
            fc.d[key] = [0] * len(fc.basis[key])

    vpos = pos["v"]

    def times_v(s: int, t: int, vec: int) -> int:
        src = monos[(s, t)]
        tgt = index[(s, t + V_DEGREE)]
        out = 0
        for q in bits(vec):
            m = list(src[q])
            m[vpos] += 1
            out ^= 1 << tgt[tuple(m)]
        return out

    fc.multiplier = times_v
    fc.mult_shift = V_DEGREE
    fc.names = names  # type: ignore[attr-defined]
    fc.generators = gens  # type: ignore[attr-defined]
    return fc


# --- enumerators ------------------------------------------------------------

def _split(exps: dict[str, int]) -> tuple[int, dict[int, int], dict[int, int]]:
    m = exps.get("v", 0)
    a: dict[int, int] = {}
    b: dict[int, int] = {}
    for name, e in exps.items():
        if name == "v" or not e:
            continue
        if name == "h21~":
            b[2] = e
        else:
            i, j = int(name[1:-1]), int(name[-1])
            (a if j == 0 else b)[i] = e
    return m, a, b


def mre1_family(exps: dict[str, int]) -> list[str]:
    """Families (I', I''_i, II_i) whose leading-monomial pattern matches."""
    m, a, b = _split(exps)
    out = []
    top = max(list(a) + list(b) + [4])
    # I'
    if all(b.get(j, 0) <= 1 for j in (2, 3, 4)) and all(b.get(j, 0) == 0 for j in range(5, top + 1)) \
            and a.get(3, 0) <= 1 and all(a.get(j, 0) == 0 for j in range(4, top + 1)):
        out.append("I'")
    # I''_i
    for i in range(3, top + 1):
        if m >= (1 << (i + 1)):
            continue
        if i == 3:
            ok = a.get(3, 0) >= 2
        else:
            ok = a.get(3, 0) <= 1 and all(a.get(j, 0) == 0 for j in range(4, i)) \
                and a.get(i, 0) >= 2 and a.get(i, 0) % 2 == 0
        ok = ok and all(a.get(j, 0) % 2 == 0 for j in range(i + 1, top + 1))
        ok = ok and all(b.get(j, 0) <= 1 for j in (2, 3, 4))
        ok = ok and all(b.get(j, 0) == 0 for j in range(5, i + 3))
        ok = ok and all(b.get(j, 0) <= 1 for j in range(i + 3, top + 1))
        if ok:
            out.append(f"I''_{i}")
    # II_i
    if m == 0:
        for i in range(2, top + 1):
            ok = all(a.get(j, 0) % 2 == 0 for j in range(4, i + 3))
            ok = ok and all(b.get(j, 0) <= 1 for j in range(2, i)) and b.get(i, 0) >= 2
            if ok:
                out.append(f"II_{i}")
    return out


def afe1_family(exps: dict[str, int]) -> list[str]:
    """Families (I, II_i) of the E_2 basis after the Adams-filtration-one differentials."""
    m, a, b = _split(exps)
    out = []
    top = max(list(a) + list(b) + [4])
    if all(e <= 1 for e in b.values()) and all(a.get(j, 0) % 2 == 0 for j in range(4, top + 1)):
        out.append("I")
    if m == 0:
        for i in range(2, top + 1):
            ok = all(a.get(j, 0) % 2 == 0 for j in range(4, i + 3))
            ok = ok and all(b.get(j, 0) <= 1 for j in range(2, i)) and b.get(i, 0) >= 2
            if ok:
                out.append(f"II_{i}")
    return out


def _monomials(s_max: int, t_max: int) -> list[tuple[dict[str, int], int, int, int]]:
    gens, _ = ce_generators("l2bar", t_max)
    out = []

    def rec(k: int, s: int, t: int, mr: int, acc: dict[str, int]) -> None:
        if k == len(gens):
            out.append((dict(acc), s, t, mr))
            return
        g = gens[k]
        e = 0
        while s + e * g.s <= s_max and t + e * g.t <= t_max:
            if e:
                acc[g.name] = e
            rec(k + 1, s + e * g.s, t + e * g.t, mr + e * g.mr, acc)
            e += 1
        acc.pop(g.name, None)

    rec(0, 0, 0, 0, {})
    return out


def mre1_enumerate(s_max: int, t_max: int, include_AFE1: bool = False):
    """Counts per (s, t, MR weight) of the leading monomials of the E_1 basis.

    Returns the count table, or (counts, afe1_counts) with ``include_AFE1``.
    Raises if a monomial matches two families (the parameterisations are disjoint).
    """
    counts: dict[tuple[int, int, int], int] = {}
    afe1: dict[tuple[int, int, int], int] = {}
    for exps, s, t, mr in _monomials(s_max, t_max):
        fam = mre1_family(exps)
        if len(fam) > 1:
            raise AssertionError(f"monomial {exps} lies in families {fam}")
        if fam:
            counts[(s, t, mr)] = counts.get((s, t, mr), 0) + 1
        if include_AFE1:
            fam1 = afe1_family(exps)
            if len(fam1) > 1:
                raise AssertionError(f"monomial {exps} lies in families {fam1}")
            if fam1:
                afe1[(s, t, mr)] = afe1.get((s, t, mr), 0) + 1
    if include_AFE1:
        return counts, afe1
    return counts


def family_monomials(s_max: int, t_max: int, prefix: str) -> list[tuple[dict[str, int], int, int]]:
    """Monomials (exponents, s, t) whose family label starts with ``prefix``."""
    return [(e, s, t) for e, s, t, _ in _monomials(s_max, t_max)
            if any(f.startswith(prefix) for f in mre1_family(e))]


def family_ii_torsion(s_max: int, t_max: int) -> tuple[int, list[dict[str, int]]]:
    """Check that every family-II class is killed by v.

    Each family-II monomial c is completed to a cocycle z = c + (terms with
    lexicographically smaller exponent vectors in the same MR weight), and v z
    is then solved for as a coboundary.  Returns (number checked, failures).
    """
    from .f2core import solve_images

    fc = ce_complex("l2bar", s_max, t_max + V_DEGREE)
    names = fc.names  # type: ignore[attr-defined]
    failures = []
    checked = 0
    for exps, s, t in family_monomials(s_max, t_max, "II"):
        c = tuple(exps.get(x, 0) for x in names)
        ms = fc.basis[(s, t)]
        g = fc.grading[(s, t)]  # type: ignore[index]
        ci = ms.index(c)
        lower = [i for i, m in enumerate(ms) if g[i] == g[ci] and m < c]
        imgs = fc.images(s, t)
        sol = solve_images([imgs[i] for i in lower], imgs[ci])
        checked += 1
        if sol is None:
            failures.append(exps)
            continue
        z = 1 << ci
        for q in bits(sol):
            z |= 1 << lower[q]
        if solve_images(fc.images(s - 1, t + V_DEGREE), fc.multiplier(s, t, z)) is None:  # type: ignore[misc]
            failures.append(exps)
    return checked, failures


def v2_local_rank(dims: dict[tuple[int, int], int], v_ranks: dict[tuple[int, int], list[int]],
                  t_window: int, v_degree: int = V_DEGREE) -> dict[tuple[int, int], int]:
    """Generators of the v-localisation seen inside the window.

    At (s, t) this is rank(v^K on H^{s,t}) - rank(v^{K+1} on H^{s,t-|v|}) with
    K the largest power keeping t + K|v| <= t_window; both images sit in the
    same group, and the second lies inside the first.
    """
    out = {}

    def rank_pow(s: int, t: int, k: int) -> int:
        if k == 0:
            return dims.get((s, t), 0)
        r = v_ranks.get((s, t), [])
        return r[k - 1] if k - 1 < len(r) else 0

    for (s, t) in sorted(dims):
        if t > t_window:
            continue
        K = (t_window - t) // v_degree
        n = rank_pow(s, t, K) - rank_pow(s, t - v_degree, K + 1)
        if n:
            out[(s, t)] = n
    return out


def exterior_pattern(t_max: int) -> dict[tuple[int, int], int]:
    """(s, t) counts of E[h21~ (12), h30 (14), h31 (28), h41~ (60)] up to t_max."""
    degs = [12, 14, 28, 60]
    out: dict[tuple[int, int], int] = {}
    for mask in range(16):
        chosen = [d for k, d in enumerate(degs) if mask >> k & 1]
        key = (len(chosen), sum(chosen))
        if key[1] <= t_max:
            out[key] = out.get(key, 0) + 1
    return out


# --- parabolas --------------------------------------------------------------

def mass(i: int) -> Fraction:
    """Mass of x_i = h_{i,0}^2: 1 / 2^{i-2}."""
    return Fraction(1, 1 << (i - 2)) if i >= 2 else Fraction(1 << (2 - i))


def _as_fraction(M) -> Fraction:
    if isinstance(M, str):
        M = Fraction(M)
    return Fraction(M)


def parabola_points(M, n_range: Iterable[int] | int) -> list[tuple[int, Fraction, bool]]:
    """(n, t - n, is_integer) on t - n = (4/M) n^2 - 3n + 6 for a positive dyadic mass M."""
    M = _as_fraction(M)
    if M <= 0:
        raise ValueError("mass must be positive")
    den = M.denominator
    if den & (den - 1):
        raise ValueError("mass must be dyadic")
    if isinstance(n_range, int):
        n_range = range(1, n_range + 1)
    out = []
    for n in n_range:
        y = Fraction(4) / M * n * n - 3 * n + 6
        out.append((n, y, y.denominator == 1))
    return out
