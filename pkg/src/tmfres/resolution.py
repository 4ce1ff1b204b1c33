"""Minimal free resolutions over profile subalgebras of A, Ext charts, and maps between them.

Ext here is Ext_B(M, F2) for a B-module M (cohomological grading): the
generators of the s-th free module in internal degree t are dual to a basis of
Ext^{s,t}.  Work proceeds one internal degree at a time, with homological
stages inside, so every stage is complete through the current degree before
the next one looks at its kernel.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .f2core import Echelon, F2Matrix, QuotientSpace, bits, kernel_of_images, rank, solve_images
from .modfmt import GradedModule, ModuleMap
from .steenrod import Profile, milnor_degree, milnor_product_basis, monomials_in_degree

__all__ = [
    "Algebra",
    "MinimalResolution",
    "ExtChart",
    "ChainMap",
    "minimal_resolution",
    "ext_chart",
    "lift_chain_map",
    "connecting_map",
    "les_exactness",
]


class Algebra:
    """A profile subalgebra of A, optionally truncated above a degree.

    Finite profiles need no truncation.  For the full algebra the truncation
    degree is mandatory and resolutions refuse to run at or above it.
    """

    def __init__(self, profile: Profile, truncation: int | None = None, name: str | None = None):
        if not profile.is_finite and truncation is None:
            raise ValueError("an infinite profile needs a truncation degree")
        self.profile = profile
        self.truncation = truncation
        self.name = name or profile.name
        self._basis: dict[int, tuple] = {}
        self._index: dict[int, dict] = {}

    @classmethod
    def from_name(cls, name: str, truncation: int | None = None) -> "Algebra":
        """'A' (needs truncation), 'A0', 'A1', 'A2', ... or 'EQ0', 'EQ1', ..."""
        if name == "A":
            if truncation is None:
                raise ValueError("the full Steenrod algebra needs a truncation degree")
            return cls(Profile.full(), truncation, f"A<={truncation}")
        if name.startswith("EQ") and name[2:].isdigit():
            return cls(Profile.E([int(name[2:])]), None, name)
        if name.startswith("A") and name[1:].isdigit():
            return cls(Profile.A(int(name[1:])), None, name)
        raise ValueError(f"unknown algebra {name!r}")

    @property
    def top_degree(self) -> int:
        if self.profile.is_finite:
            top = self.profile.top_degree()
            return top if self.truncation is None else min(top, self.truncation)
        return self.truncation  # type: ignore[return-value]

    def basis(self, d: int) -> tuple:
        b = self._basis.get(d)
        if b is None:
            if d < 0 or d > self.top_degree:
                b = ()
            else:
                b = tuple(monomials_in_degree(self.profile, d))
            self._basis[d] = b
            self._index[d] = {r: i for i, r in enumerate(b)}
        return b

    def index(self, d: int) -> dict:
        self.basis(d)
        return self._index[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def product(self, r: tuple, s: tuple) -> frozenset:
        """Sq(r)Sq(s), with monomials outside the profile dropped."""
        terms = milnor_product_basis(r, s)
        if self.profile.tail == 0 or self.profile.heights:
            return frozenset(t for t in terms if self.profile.admits(t))
        return terms

    def __repr__(self) -> str:
        return f"Algebra({self.name})"


@dataclass
class _Stage:
    """One free module P_s with its differential.

    ``images[j]`` is d(g_j) as a vector over the target basis in degree
    ``degrees[j]`` (target is P_{s-1}, or the module for s = 0).
    """

    degrees: list[int] = field(default_factory=list)
    images: list[int] = field(default_factory=list)
    # per internal degree t: the basis [(generator, monomial)] and its index
    basis: dict[int, list] = field(default_factory=dict)
    index: dict[int, dict] = field(default_factory=dict)
    # per t: images of the whole degree-t basis under d, and the kernel of d
    matrix: dict[int, list[int]] = field(default_factory=dict)
    kernel: dict[int, list[int]] = field(default_factory=dict)


class MinimalResolution:
    """A minimal free resolution P_* -> M computed through (s_max, t_max)."""

    def __init__(self, alg: Algebra, module: GradedModule, s_max: int, t_max: int):
        self.alg = alg
        self.module = module
        self.s_max = s_max
        self.t_max = t_max
        self.t_min = min(0, module.min_degree)
        self.stages = [_Stage() for _ in range(s_max + 1)]

    # --- free-module arithmetic ------------------------------------------

    def free_basis(self, s: int, t: int) -> list:
        st = self.stages[s]
        b = st.basis.get(t)
        if b is None:
            b = [(j, r) for j, dj in enumerate(st.degrees) if dj <= t for r in self.alg.basis(t - dj)]
            st.basis[t] = b
            st.index[t] = {x: p for p, x in enumerate(b)}
        return b

    def free_index(self, s: int, t: int) -> dict:
        self.free_basis(s, t)
        return self.stages[s].index[t]

    def act(self, s: int, a: tuple, t: int, v: int) -> int:
        """Sq(a) times a degree-t element of P_s, as a degree-(t+|a|) vector."""
        if not a:
            return v
        basis = self.free_basis(s, t)
        t2 = t + milnor_degree(a)
        idx = self.free_index(s, t2)
        out = 0
        for p in bits(v):
            j, b = basis[p]
            for c in self.alg.product(a, b):
                out ^= 1 << idx[(j, c)]
        return out

    def _act_target(self, s: int, a: tuple, t: int, v: int) -> int:
        """Act on the target of d_s (the module when s = 0)."""
        if s == 0:
            return self.module.milnor_vector(a, t, v) if a else v
        return self.act(s - 1, a, t, v)

    def generator_images(self, s: int, t: int) -> list[int]:
        """d_s on the degree-t basis of P_s (cached)."""
        st = self.stages[s]
        m = st.matrix.get(t)
        if m is None:
            m = []
            for j, r in self.free_basis(s, t):
                dj = st.degrees[j]
                m.append(self._act_target(s, r, dj, st.images[j]))
            st.matrix[t] = m
        return m

    def apply_d(self, s: int, t: int, v: int) -> int:
        imgs = self.generator_images(s, t)
        out = 0
        for p in bits(v):
            out ^= imgs[p]
        return out

    # --- construction ----------------------------------------------------

    def _target_cycles(self, s: int, t: int) -> list[int]:
        """Kernel of d_{s-1} in degree t: the elements d_s must hit."""
        if s == 0:
            n = self.module.dim_in(t)
            return [1 << p for p in range(n)]
        return self.stages[s - 1].kernel[t]

    def _step(self, s: int, t: int) -> None:
        st = self.stages[s]
        cycles = self._target_cycles(s, t)
        imgs = self.generator_images(s, t)
        if cycles:
            basis, index = st.basis[t], st.index[t]
            for v in QuotientSpace(cycles, imgs).reps:
                # a new generator contributes exactly one basis element in its own degree
                j = len(st.degrees)
                st.degrees.append(t)
                st.images.append(v)
                index[(j, ())] = len(basis)
                basis.append((j, ()))
                imgs.append(v)
        st.kernel[t] = kernel_of_images(imgs)

    def compute(self) -> "MinimalResolution":
        if self.alg.truncation is not None and not self.alg.profile.is_finite and self.t_max >= self.alg.truncation:
            raise ValueError(f"truncation {self.alg.truncation} must exceed t_max {self.t_max}")
        for t in range(self.t_min, self.t_max + 1):
            for s in range(self.s_max + 1):
                try:
                    self._step(s, t)
                except MemoryError as exc:  # pragma: no cover
                    raise MemoryError(f"out of memory at (s, t) = ({s}, {t})") from exc
        return self

    # --- queries ---------------------------------------------------------

    def ext_dim(self, s: int, t: int) -> int:
        return sum(1 for d in self.stages[s].degrees if d == t)

    def generators(self, s: int, t: int) -> list[int]:
        """Indices in stage s of the generators of internal degree t."""
        return [j for j, d in enumerate(self.stages[s].degrees) if d == t]

    def dims(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for s, st in enumerate(self.stages):
            for d in st.degrees:
                out[(s, d)] = out.get((s, d), 0) + 1
        return out

    def check_d_squared(self) -> bool:
        for s in range(1, self.s_max + 1):
            for t in range(self.t_min, self.t_max + 1):
                for v in self.generator_images(s, t):
                    if self.apply_d(s - 1, t, v):
                        return False
        return True

    def check_exact(self) -> bool:
        """ker d_{s-1} = im d_s in every computed degree (and im d_0 = M)."""
        for s in range(self.s_max + 1):
            for t in range(self.t_min, self.t_max + 1):
                ims = Echelon(self.generator_images(s, t))
                cyc = self._target_cycles(s, t)
                if len(ims) != len(cyc) or not all(ims.contains(c) for c in cyc):
                    return False
        return True

    def check_minimal(self) -> bool:
        """No differential has a unit coefficient on a generator of its own degree."""
        for s in range(1, self.s_max + 1):
            st = self.stages[s]
            for j, t in enumerate(st.degrees):
                basis = self.free_basis(s - 1, t)
                for p in bits(st.images[j]):
                    if basis[p][1] == ():
                        return False
        return True


def minimal_resolution(alg: Algebra, m: GradedModule, s_max: int, t_max: int) -> MinimalResolution:
    return MinimalResolution(alg, m, s_max, t_max).compute()


@dataclass
class ExtChart:
    """Ext dims per (s, t) with stable generator names 's_t_k'.  Chart coordinates are (t - s, s)."""

    dims: dict[tuple[int, int], int]
    names: dict[tuple[int, int], list[str]]
    annotations: list[tuple] = field(default_factory=list)  # (kind, (s,t,k), (s,t,k), label)

    def xy(self) -> dict[tuple[int, int], int]:
        return {(t - s, s): n for (s, t), n in self.dims.items()}

    def nonzero_above(self, slope_line) -> list[tuple[int, int]]:
        """(s, t) with nonzero Ext and s > slope_line(t - s)."""
        return [(s, t) for (s, t), n in self.dims.items() if n and s > slope_line(t - s)]


def ext_chart(r: MinimalResolution) -> ExtChart:
    dims = r.dims()
    names = {(s, t): [f"{s}_{t}_{k}" for k in range(n)] for (s, t), n in sorted(dims.items())}
    return ExtChart(dict(sorted(dims.items())), names)


# --- chain maps -----------------------------------------------------------

@dataclass
class ChainMap:
    """Phi_k: P_k(source) -> P_{k+shift}(target) on generators, plus the induced Ext maps.

    ``images[k][j]`` is Phi_k(g_j) as a vector over the target free basis in
    degree deg(g_j).  ``ext[(s, t)]`` has rows indexed by the source generators
    of degree t and columns by the target ones; entry (a, b) is the unit
    coefficient of target generator b in Phi(g_a).  It represents the map
    Ext(target) -> Ext(source) on dual bases.
    """

    source: MinimalResolution
    target: MinimalResolution
    shift: int
    images: list[list[int]]
    ext: dict[tuple[int, int], F2Matrix]


def _unit_coefficients(r: MinimalResolution, s: int, t: int, v: int) -> int:
    """Bits over ``r.generators(s, t)`` of the unit-coefficient part of v."""
    gens = r.generators(s, t)
    pos = {j: p for p, j in enumerate(gens)}
    idx = r.free_index(s, t)
    out = 0
    for j in gens:
        p = idx[(j, ())]
        if (v >> p) & 1:
            out |= 1 << pos[j]
    return out


def _solve_lift(r: MinimalResolution, s: int, t: int, rhs: int, rng: random.Random | None) -> int:
    """x in P_s(degree t) with d_s x = rhs (rhs in the target of d_s)."""
    imgs = r.generator_images(s, t)
    x = solve_images(imgs, rhs)
    if x is None:
        raise ValueError(f"cannot lift at (s, t) = ({s}, {t})")
    if rng is not None:
        for k in kernel_of_images(imgs):
            if rng.random() < 0.5:
                x ^= k
    return x


def _lift(src: MinimalResolution, tgt: MinimalResolution, shift: int, base, s_max: int,
          rng: random.Random | None) -> ChainMap:
    """Generic ladder lift.  ``base(j)`` gives the degree-deg(g_j) element of the
    target of d_shift that Phi_0(g_j) must hit (g_j a generator of P_0 of ``src``
    when shift = 0, or of P_shift when used for connecting maps)."""
    images: list[list[int]] = []
    for k in range(s_max + 1):
        sk = k + shift
        if sk > src.s_max or k > tgt.s_max:
            break
        row = []
        stage = src.stages[sk]
        for j, t in enumerate(stage.degrees):
            if t > min(src.t_max, tgt.t_max):
                row.append(0)
                continue
            if k == 0:
                rhs = base(j, t)
            else:
                # Phi_{k-1}(d g_j) where d g_j lies in P_{sk-1}(src)
                rhs = 0
                basis = src.free_basis(sk - 1, t)
                for p in bits(stage.images[j]):
                    jj, a = basis[p]
                    tj = src.stages[sk - 1].degrees[jj]
                    rhs ^= tgt.act(k - 1, a, tj, images[k - 1][jj])
            row.append(_solve_lift(tgt, k, t, rhs, rng))
        images.append(row)
    ext = {}
    for k, row in enumerate(images):
        sk = k + shift
        for t in sorted(set(src.stages[sk].degrees)):
            if t > min(src.t_max, tgt.t_max):
                continue
            gens = src.generators(sk, t)
            cols = len(tgt.generators(k, t))
            rows = [_unit_coefficients(tgt, k, t, row[j]) for j in gens]
            ext[(sk, t)] = F2Matrix(len(rows), cols, rows)
    return ChainMap(src, tgt, shift, images, ext)


def lift_chain_map(rM: MinimalResolution, rN: MinimalResolution, f: ModuleMap,
                   rng: random.Random | None = None) -> ChainMap:
    """Lift f: M -> N to P(M) -> P(N).  ``rng`` adds random kernel vectors to every lift."""
    w = f.linearity_witness()
    if w is not None:
        i, k = w
        raise ValueError(f"map is not A-linear: fails on Sq^{k} g_{i}")
    s_max = min(rM.s_max, rN.s_max)

    def base(j: int, t: int) -> int:
        return f.apply(t, rM.stages[0].images[j])

    return _lift(rM, rN, 0, base, s_max, rng)


def _check_ses(inc: ModuleMap, proj: ModuleMap) -> None:
    for name, f in (("inclusion", inc), ("projection", proj)):
        w = f.linearity_witness()
        if w is not None:
            raise ValueError(f"{name} is not A-linear: fails on Sq^{w[1]} g_{w[0]}")
    mid = inc.target
    for d in sorted(set(mid.degrees) | set(inc.source.degrees) | set(proj.target.degrees)):
        a = [inc.apply(d, 1 << p) for p in range(inc.source.dim_in(d))]
        b = [proj.apply(d, 1 << p) for p in range(mid.dim_in(d))]
        if len(Echelon(a)) != len(a):
            raise ValueError(f"inclusion not injective in degree {d}")
        if len(Echelon(b)) != proj.target.dim_in(d):
            raise ValueError(f"projection not surjective in degree {d}")
        ker = kernel_of_images(b)
        ea = Echelon(a)
        if len(ker) != len(a) or not all(ea.contains(x) for x in ker):
            raise ValueError(f"sequence not exact in degree {d}")
        if any(proj.apply(d, x) for x in a):
            raise ValueError(f"composite not zero in degree {d}")


def connecting_map(ses: tuple, s_max: int, t_max: int, alg: Algebra,
                   resolutions: tuple | None = None) -> dict[tuple[int, int], F2Matrix]:
    """delta: Ext^{s,t}(M') -> Ext^{s+1,t}(M'') for 0 -> M' -> M -> M'' -> 0.

    ``ses`` is (inclusion, projection) as ModuleMaps.  The result maps (s, t)
    to a matrix with rows indexed by the generators of P_{s+1}(M'') in degree t
    and columns by those of P_s(M') in degree t; it is delta on dual bases.
    """
    inc, proj = ses
    _check_ses(inc, proj)
    sub, mid, quo = inc.source, inc.target, proj.target
    if resolutions is None:
        r_sub = minimal_resolution(alg, sub, s_max, t_max)
        r_quo = minimal_resolution(alg, quo, s_max + 1, t_max)
    else:
        r_sub, r_quo = resolutions

    # phi_0: P_0(M'') -> M lifting the augmentation through the projection
    mid_images: dict[int, list[int]] = {}

    def lift_to_mid(d: int, v: int) -> int:
        imgs = mid_images.get(d)
        if imgs is None:
            imgs = [proj.apply(d, 1 << p) for p in range(mid.dim_in(d))]
            mid_images[d] = imgs
        x = solve_images(imgs, v)
        if x is None:
            raise ValueError(f"projection not surjective in degree {d}")
        return x

    phi0 = [lift_to_mid(t, v) for t, v in zip(r_quo.stages[0].degrees, r_quo.stages[0].images)]

    def phi0_apply(t: int, v: int) -> int:
        """phi_0 on a degree-t element of P_0(M'')."""
        out = 0
        basis = r_quo.free_basis(0, t)
        for p in bits(v):
            j, a = basis[p]
            tj = r_quo.stages[0].degrees[j]
            out ^= mid.milnor_vector(a, tj, phi0[j]) if a else phi0[j]
        return out

    sub_images: dict[int, list[int]] = {}

    def pull_back(d: int, v: int) -> int:
        imgs = sub_images.get(d)
        if imgs is None:
            imgs = [inc.apply(d, 1 << p) for p in range(sub.dim_in(d))]
            sub_images[d] = imgs
        x = solve_images(imgs, v)
        if x is None:
            raise AssertionError(f"theta does not land in the submodule in degree {d}")
        return x

    def base(j: int, t: int) -> int:
        # theta(g_j) = phi_0(d_1 g_j), pulled back into M'
        return pull_back(t, phi0_apply(t, r_quo.stages[1].images[j]))

    cm = _lift(r_quo, r_sub, 1, base, s_max, None)
    return {(s - 1, t): m for (s, t), m in cm.ext.items()}


def les_exactness(ses: tuple, alg: Algebra, s_max: int, t_max: int) -> list[tuple[str, int, int]]:
    """Check exactness of the long exact Ext sequence at every node in the window.

    Returns the list of failing nodes (name, s, t); empty means exact.
    """
    inc, proj = ses
    sub, mid, quo = inc.source, inc.target, proj.target
    r_sub = minimal_resolution(alg, sub, s_max + 1, t_max)
    r_mid = minimal_resolution(alg, mid, s_max + 1, t_max)
    r_quo = minimal_resolution(alg, quo, s_max + 1, t_max)
    i_star = lift_chain_map(r_sub, r_mid, inc).ext     # Ext(M) -> Ext(M')
    p_star = lift_chain_map(r_mid, r_quo, proj).ext    # Ext(M'') -> Ext(M)
    delta = connecting_map(ses, s_max, t_max, alg, (r_sub, r_quo))

    def mat(table, key, rows, cols):
        m = table.get(key)
        return m if m is not None else F2Matrix.zeros(rows, cols)

    def exact_at(f: F2Matrix, g: F2Matrix) -> bool:
        # f: X -> Y, g: Y -> Z as column matrices on dual bases
        if not (g @ f).is_zero():
            return False
        return rank(f) == g.ncols - rank(g)

    fails = []
    for s in range(s_max + 1):
        for t in range(t_max + 1):
            nq, nm, ns = r_quo.ext_dim(s, t), r_mid.ext_dim(s, t), r_sub.ext_dim(s, t)
            p_m = mat(p_star, (s, t), nm, nq)            # rows: mid gens, cols: quo gens
            i_m = mat(i_star, (s, t), ns, nm)            # rows: sub gens, cols: mid gens
            nq1 = r_quo.ext_dim(s + 1, t)
            d_m = mat(delta, (s, t), nq1, ns)            # rows: quo^{s+1} gens, cols: sub gens
            # Ext(M'') -p*-> Ext(M) -i*-> Ext(M') -delta-> Ext^{s+1}(M'')
            if not exact_at(p_m, i_m):
                fails.append(("mid", s, t))
            if not exact_at(i_m, d_m):
                fails.append(("sub", s, t))
            if s + 1 <= s_max:
                p_next = mat(p_star, (s + 1, t), r_mid.ext_dim(s + 1, t), nq1)
                if not exact_at(d_m, p_next):
                    fails.append(("quo", s + 1, t))
    return fails
