import pytest

from tmfres.hopfcobar import HopfPresentation, build_hopf, cobar_cohomology, preset
from tmfres.modfmt import parse_module
from tmfres.resolution import Algebra, minimal_resolution

F2 = parse_module("1 0")


def poly_count(gens, n_max, t_max):
    """Monomials of F2[gens] per (n, t, v-power); gens are (n, t, is_v)."""
    table = {(0, 0, 0): 1}
    for gn, gt, is_v in gens:
        new = dict(table)
        for (n, t, k), c in table.items():
            e = 1
            while n + e * gn <= n_max and t + e * gt <= t_max:
                key = (n + e * gn, t + e * gt, k + (e if is_v else 0))
                new[key] = new.get(key, 0) + c
                e += 1
        table = new
    return table


def test_exterior_primitive():
    h = build_hopf(HopfPresentation((("x", 1, 2),)), 4)
    assert h.reduced_coproduct((1,)) == frozenset()


def test_truncated_poly_coproducts():
    h = build_hopf(HopfPresentation((("x", 1, 4),)), 4)
    assert h.reduced_coproduct((3,)) == frozenset({(0, (2,), (1,)), (0, (1,), (2,))})
    assert h.reduced_coproduct((2,)) == frozenset()


def test_exterior_cohomology_polynomial():
    for d in (1, 3, 5):
        res = cobar_cohomology(HopfPresentation((("x", d, 2),)), 6, 6 * d)
        assert {k: v for k, v in res.dims.items() if v} == {(n, n * d): 1 for n in range(7)}


def test_trivial_n0():
    res = cobar_cohomology(preset("dual-A1"), 0, 12)
    assert {k: v for k, v in res.dims.items() if v} == {(0, 0): 1}


def test_bad_presentations():
    with pytest.raises(ValueError):
        HopfPresentation((("x", 1, 3),))
    with pytest.raises(ValueError):
        HopfPresentation((("x", 0, 2),))
    with pytest.raises(ValueError):
        preset("nope")


def test_presets():
    assert preset("EQ2").generators == (("zeta3", 7, 2),)
    assert preset("dual-A0").generators == (("zeta1", 1, 2),)
    gens = preset("E0AF-sigma2tilde", window=60).generators
    assert [(g[0], g[1]) for g in gens] == [("t2sq", 12), ("t3", 14), ("t4", 30)]


@pytest.mark.parametrize("name, t_max", [("dual-A1", 24), ("dual-A2", 24)])
def test_coassociative(name, t_max):
    assert build_hopf(preset(name), t_max).check_coassociative() == []


def test_e0af_structure():
    h = build_hopf(preset("E0AF-sigma2tilde", window=60), 60)
    assert h.check_coassociative() == []
    assert h.check_powers_primitive() == []


@pytest.mark.parametrize("name, alg, n_max, t_max", [
    ("dual-A0", "A0", 12, 20),
    ("EQ0", "EQ0", 12, 20),
    ("EQ1", "EQ1", 6, 24),
    ("dual-A1", "A1", 4, 20),
    ("dual-A2", "A2", 3, 16),
])
def test_matches_resolution(name, alg, n_max, t_max):
    res = cobar_cohomology(preset(name), n_max, t_max)
    r = minimal_resolution(Algebra.from_name(alg), F2, n_max, t_max)
    got = {k: v for k, v in res.dims.items() if v}
    want = {k: v for k, v in r.dims().items() if v}
    assert got == want


def test_e0af_polynomial():
    p = preset("E0AF-sigma2tilde", window=48)
    res = cobar_cohomology(p, 3, 48)
    gens = [(0, 6, True), (1, 12, False)]
    for name, deg, _ in p.generators[1:]:
        gens += [(1, deg, False), (1, 2 * deg, False)]
    want = {k: v for k, v in poly_count(gens, 3, 48).items()}
    assert {k: v for k, v in res.dims_af.items() if v} == want
    assert set(res.torsion_order.values()) == {0}
