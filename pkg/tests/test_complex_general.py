from fractions import Fraction

import pytest

from bbdegen.complex_basic import cellular_homology, loops, monodromy, monodromy_oracle
from bbdegen.complex_general import (
    GoodData,
    HeightError,
    anticanonical_height_data,
    boundary_lattice_points,
    build_complex_general,
    build_height_data,
    build_lifted,
    classify_cones,
    existence_construction,
    heights_from_values,
    is_good,
    mpcp_report,
    quadratic_heights,
    simplicity_check,
    standard_good_data,
    trivial_good_data,
)
from bbdegen.examples import data_text, example
from bbdegen.io import parse_heights

from conftest import bundled_heights


def _tri(a, b):
    return 2 * a * a + 2 * a * b + 2 * b * b


def _schoen_value(m, k=4, bilinear=True):
    x, y1, y2, z1, z2 = m
    v = 50 + k * (_tri(y1, y2) + _tri(z1, z2) + abs(x))
    if bilinear:
        if (y1, y2) != (0, 0):
            v += x * (y1 + 2 * y2)
        elif (z1, z2) != (0, 0):
            v -= x * (z1 + 2 * z2)
    return v


def test_bundled_schoen_heights_follow_their_formulas():
    np_ = example("schoen")
    pts = set(boundary_lattice_points(np_.nabla_star))
    _, mp = parse_heights(data_text("schoen_mpcp.heights"))
    _, coarse = parse_heights(data_text("schoen_coarse.heights"))
    assert set(mp) == pts == set(coarse)
    assert all(mp[p] == _schoen_value(p) for p in pts)
    assert all(coarse[p] == _schoen_value(p, 3, False) for p in pts)


def test_bundled_quartic_heights_follow_their_formula():
    np_ = example("quartic")
    _, vals = parse_heights(data_text("quartic_mpcp.heights"))
    assert set(vals) == set(boundary_lattice_points(np_.nabla_star))
    assert all(v == 10 + sum(x * x for x in p) + sum(p) ** 2 for p, v in vals.items())
    q = quadratic_heights(np_.nabla_star, 1)
    assert all(q[p] == vals[p] - 9 for p in vals)


def test_mpcp_reports(schoen_mpcp):
    np_, ch = schoen_mpcp
    rep = mpcp_report(ch, np_.nabla_star)
    assert rep["ok"] and len(ch.fan.maximal_cones) == 486
    _, coarse = bundled_heights("schoen", "schoen_coarse.heights")
    rep = mpcp_report(coarse, np_.nabla_star)
    assert not rep["elementary"] and len(coarse.fan.maximal_cones) == 324
    # the anticanonical function of the quintic leaves lattice points unused
    q = example("quintic")
    assert not mpcp_report(q.check_phi, q.nabla_star)["ok"]


def test_unattained_heights_are_reported():
    vals = {(1, 0): 1, (0, 1): 1, (-1, 0): 1, (0, -1): 1, (1, 1): 5}
    with pytest.raises(HeightError, match="not attained"):
        heights_from_values(2, vals)
    with pytest.raises(HeightError, match="do not bound"):
        heights_from_values(2, {(1, 0): 1, (0, 1): 1})


def test_height_conditions_name_the_failure():
    np_ = example("quartic")
    with pytest.raises(HeightError, match="check-h: not strictly convex"):
        build_height_data(np_, np_.phi, np_.check_phi.scale(0))
    with pytest.raises(HeightError, match="h: fan does not refine"):
        coarse = heights_from_values(3, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1, (-1, -1, -1): 1})
        build_height_data(np_.swapped, coarse, np_.swapped.check_phi)


def test_anticanonical_data_is_trivial():
    hd = anticanonical_height_data(example("quintic"))
    assert hd.is_trivial() and hd.is_trivial_dual()


def test_cone_types_of_trivial_data():
    gd = standard_good_data(example("square"), example("square").check_phi, "nabla")
    kinds = {info.kind for info in classify_cones(gd).values()}
    assert kinds <= {"I", "II", "III"} and "II" in kinds
    assert all(info.relevant == all(info.beta) for info in classify_cones(gd).values() if info.kind == "II")


def test_broken_good_data_is_rejected():
    np_ = example("quintic")
    ld = build_lifted(anticanonical_height_data(np_))
    gd = trivial_good_data(ld)
    assert is_good(ld, gd).ok
    flat = GoodData(ld, gd.fan, gd.h_tilde.scale(0))
    rep = is_good(ld, flat)
    assert not rep.ok
    assert any("strictly convex" in d for d in rep.diagnostics)
    assert any("differs from h" in d for d in rep.diagnostics)


def test_quartic_mpcp_complex(quartic_mpcp):
    np_, ch, gd, ac = quartic_mpcp
    assert ac.f_vector() == (34, 96, 64)
    assert simplicity_check(gd, ac).simple
    for lp in loops(ac):
        assert monodromy(ac, *lp).matrix == monodromy_oracle(ac, *lp).matrix


def test_quintic_anticanonical_is_not_simple():
    q = example("quintic")
    rep = simplicity_check(standard_good_data(q, q.check_phi, "delta"))
    assert rep.verdict == "not simple"
    assert rep.label == "proof-level characterization"
    # on the delta side the roles swap, so the anticanonical heights sit in "h"
    assert not rep.mpcp["h"]["ok"]


def test_quartic_existence(quartic_mpcp):
    np_, ch, _, _ = quartic_mpcp
    res = existence_construction(np_, np_.phi, ch)
    assert res.report.ok, res.report.diagnostics
    assert res.m0 >= 1 and res.n0 >= 1


def test_existence_scales_heights():
    np_ = example("quadric")
    res = existence_construction(np_, np_.phi.scale(Fraction(1)), np_.check_phi)
    assert res.report.ok and (res.m0, res.n0) == (1, 1)


def test_quartic_sides_are_dual_spheres(quartic_mpcp):
    np_, ch, _, ac = quartic_mpcp
    other = build_complex_general(standard_good_data(np_, ch, "nabla"), "nabla")
    assert other.f_vector() == tuple(reversed(ac.f_vector()))
    sphere = [(1, []), (0, []), (1, [])]
    assert cellular_homology(ac) == cellular_homology(other) == sphere
