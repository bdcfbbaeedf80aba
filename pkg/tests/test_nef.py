from fractions import Fraction

import pytest

from bbdegen.examples import CORPUS, example
from bbdegen.geometry import convex_hull, polar_dual
from bbdegen.nef import NefError, beta_star_all, mbeta, validate

SQ = [(-1, -1), (1, -1), (-1, 1), (1, 1)]


def test_corpus_validates_with_all_checks():
    for name in CORPUS + ("quartic",):
        np_ = example(name)
        assert all(np_.checks.values())
        assert all(v == 1 for v in np_.phi.ray_values)


def test_nabla_star_of_quintic_is_the_dual_simplex():
    np_ = example("quintic")
    assert polar_dual(np_.delta) == np_.delta_star
    assert len(np_.nabla.vertices) == 5


def test_schoen_sizes():
    np_ = example("schoen")
    assert (np_.n, np_.r) == (5, 2)
    assert len(np_.delta.vertices) == 18
    assert len(np_.nabla.vertices) == 15
    # 0 lies inside Conv(S_0, S_1, S_2), so each dual part has four vertices
    assert set(np_.nabla_parts[0].vertices) == {(-1, 0, 0, 0, 0), (0, -1, -1, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0)}
    assert set(np_.nabla_parts[1].vertices) == {(1, 0, 0, 0, 0), (0, 0, 0, -1, -1), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)}


def test_swap_is_an_involution():
    for name in ("quadric", "schoen"):
        np_ = example(name)
        back = np_.swapped.swapped
        assert set(back.delta.vertices) == set(np_.delta.vertices)
        assert [set(P.vertices) for P in back.parts] == [set(P.vertices) for P in np_.parts]


def test_not_reflexive():
    big = convex_hull([(-2, -2), (2, -2), (-2, 2), (2, 2)])
    with pytest.raises(NefError) as e:
        validate(big, [big])
    assert e.value.condition == "not reflexive"


def test_parts_must_sum_to_delta():
    D = convex_hull(SQ)
    with pytest.raises(NefError) as e:
        validate(D, [convex_hull([(-1, 0), (1, 0)])])
    assert e.value.condition == "Minkowski sum mismatch"


def test_part_must_contain_origin():
    D = convex_hull(SQ)
    with pytest.raises(NefError) as e:
        validate(D, [convex_hull([(0, 0), (2, 0)]), convex_hull([(-2, -1), (-2, 1)])])
    assert e.value.condition == "part does not contain 0"


def test_non_lattice_part():
    D = convex_hull(SQ)
    half = convex_hull([(-1, 0), (1, 0)]).dilate(Fraction(1, 2))
    with pytest.raises(NefError) as e:
        validate(D, [half, half, convex_hull([(0, -1), (0, 1)])])
    assert e.value.condition == "non-lattice part"


def test_beta_maps_on_schoen_faces():
    np_ = example("schoen")
    for F in np_.delta_star.faces(1):
        parts = beta_star_all(np_, F.vertices)
        M = mbeta(np_, F.vertices)
        assert (M is None) == any(p is None for p in parts)


def test_boundary_required():
    np_ = example("square")
    with pytest.raises(NefError):
        beta_star_all(np_, [(0, 0)])
