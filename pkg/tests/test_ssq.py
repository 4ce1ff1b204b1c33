from fractions import Fraction

import pytest

from tmfres.ssq import (
    FilteredComplex, associated_graded, ce_complex, ce_generators, cohomology, exterior_pattern,
    family_ii_torsion, mass, mre1_enumerate, mre1_family, parabola_points, ss_pages, v2_local_rank,
)


def two_term(iso: bool):
    fc = FilteredComplex()
    fc.basis = {(0, 0): ["a"], (1, 0): ["b"]}
    fc.weights = {(0, 0): [0], (1, 0): [1]}
    fc.d = {(0, 0): [1 if iso else 0], (1, 0): [0]}
    return fc


def test_two_term_iso():
    ss = ss_pages(two_term(True), 3)
    assert ss.pages[0] == {(0, 0, 0): 1, (1, 1, 0): 1}
    assert ss.pages[2] == {} and ss.e_inf == {}


def test_zero_differential():
    ss = ss_pages(two_term(False), 3)
    assert ss.pages[1] == ss.e_inf == {(0, 0, 0): 1, (1, 1, 0): 1}


def test_display_filtration():
    ss = ss_pages(two_term(False), 1)
    assert ss.display_filtration(4) == "2" and ss.display_filtration(5) == "2+eps"


def test_d_h40_quotient():
    gens, d = ce_generators("l2bar", 124)
    assert d["h40"] == [{"v": 1, "h21~": 2}]
    assert d["h41"] == [{"v": 6, "h21~": 2}]
    assert d["h50"] == [{"v": 1, "h31": 2}]
    assert d["h21~"] == d["h30"] == d["h31"] == []


def test_d_h30_full():
    gens, d = ce_generators("l2", 30)
    assert sorted(map(sorted, (m.items() for m in d["h30"]))) == sorted(
        [sorted({"h10": 1, "v": 1, "h20": 1}.items()), sorted({"h10": 1, "h21": 1}.items())])


def test_degrees_and_weights():
    gens, _ = ce_generators("l2", 130)
    for g in gens[1:]:
        assert g.t == (1 << (g.j + 1)) * ((1 << g.i) - 1)
    w = {g.name: g.mr for g in gens}
    assert w["h10"] == 1 and w["h20"] == 2 and w["h30"] == 3 and w["h40"] == 4 and w["h50"] == 6 and w["h60"] == 8


@pytest.mark.parametrize("variant", ["l2", "l2bar"])
@pytest.mark.parametrize("filt", ["AF", "MR"])
def test_complex_invariants(variant, filt):
    fc = ce_complex(variant, 5, 60, filtration=filt)
    assert fc.check_d_squared() == []
    assert fc.check_monotone() == []


def test_mr_weight_preserved():
    assert ce_complex("l2", 4, 60).preserves_grading()
    assert ce_complex("l2bar", 4, 60).preserves_grading()


def test_window_rejected():
    with pytest.raises(ValueError):
        ce_complex("l2bar", 3, 60, generator_window=40)


def test_mre1_examples():
    counts = mre1_enumerate(3, 60)
    assert counts[(1, 12, 2)] == 1
    assert counts[(2, 24, 4)] >= 1  # h21~^2
    assert mre1_family({"h21~": 2}) == ["II_2"]
    assert mre1_family({"h21~": 1}) == ["I'"]
    for t in range(0, 61):
        n = sum(v for (s, tt, _), v in counts.items() if s == 0 and tt == t)
        assert n == (1 if t % 6 == 0 else 0)


def test_mre1_vs_cohomology():
    fc = ce_complex("l2bar", 5, 60)
    h = cohomology(fc, s_range=range(6), t_max=60)
    assert h.graded_dims == mre1_enumerate(5, 60)


def test_afe1_is_e2():
    fc = ce_complex("l2bar", 4, 48)
    ss = ss_pages(fc, 2, s_range=range(5), t_max=48)
    _, afe1 = mre1_enumerate(4, 48, include_AFE1=True)
    by_st = {}
    for (s, t, _), n in afe1.items():
        by_st[(s, t)] = by_st.get((s, t), 0) + n
    assert ss.page_st(2) == by_st


def test_einf_matches_graded():
    fc = ce_complex("l2bar", 4, 48)
    ss = ss_pages(fc, 1, s_range=range(5), t_max=48)
    assert ss.e_inf == associated_graded(fc, s_range=range(5), t_max=48)


def test_family_ii_torsion():
    checked, failures = family_ii_torsion(6, 60)
    assert checked > 0 and failures == []


def test_v2_local():
    fc = ce_complex("l2bar", 2, 260)
    h = cohomology(fc, s_range=range(3), t_max=260, v_profile=True)
    loc = v2_local_rank(h.dims, h.v_ranks, 260)
    window = {k: v for k, v in loc.items() if k[1] <= 70}
    assert window == {k: v for k, v in exterior_pattern(70).items() if k[0] <= 2}
    assert [t for (s, t) in window if s == 1] == [12, 14, 28, 60]
    assert v2_local_rank({}, {}, 60) == {}


def test_parabola_examples():
    assert [(n, y) for n, y, _ in parabola_points(1, 2)] == [(1, 7), (2, 16)]
    assert parabola_points(Fraction(1, 2), [1])[0][1] == 11
    assert parabola_points("1/2", [1])[0][2] is True
    with pytest.raises(ValueError):
        parabola_points(Fraction(1, 3), [1])
    with pytest.raises(ValueError):
        parabola_points(0, [1])


def test_mass_rule():
    assert mass(2) == 1 and mass(3) == Fraction(1, 2) and mass(5) == Fraction(1, 8)
