import pytest

from bbdegen.complex_basic import (
    ComplexError,
    all_quartets,
    boundary_squares_vanish,
    build_complex,
    cellular_homology,
    dlt_verify,
    loops,
    monodromy,
    monodromy_oracle,
    order_reversal_violations,
    vertex_chart,
)
from bbdegen.examples import example


@pytest.fixture(scope="module")
def quintic_complexes():
    np_ = example("quintic")
    return build_complex(np_, "nabla"), build_complex(np_, "delta")


def test_square_complex_is_a_circle():
    for side in ("nabla", "delta"):
        ac = build_complex(example("square"), side)
        assert ac.dim == 1
        assert ac.f_vector() == (4, 4)
        assert cellular_homology(ac) == [(1, []), (1, [])]


def test_quadric_complex_is_points():
    ac = build_complex(example("quadric"), "delta")
    assert ac.dim == 0 and ac.f_vector() == (4,)


def test_quintic_is_a_three_sphere(quintic_complexes):
    for ac in quintic_complexes:
        assert boundary_squares_vanish(ac)
        assert cellular_homology(ac) == [(1, []), (0, []), (0, []), (1, [])]
        assert order_reversal_violations(ac) == []


def test_quintic_f_vectors(quintic_complexes):
    nab, delt = quintic_complexes
    # the nabla side is the boundary of the 4-simplex; the delta side is its dual
    assert nab.f_vector() == (5, 10, 10, 5)
    assert delt.f_vector() == (5, 10, 10, 5)


def test_quartets_are_the_faces_meeting_every_part():
    np_ = example("schoen")
    qs = all_quartets(np_)
    meets_all = [
        F
        for F in np_.delta_star.faces()
        if F.dim < np_.delta_star.dim and all(any(np_.phi_i(i, v) == 1 for v in F.vertices) for i in range(np_.r))
    ]
    assert len(qs) == len(meets_all) == sum(build_complex(np_, "nabla").f_vector()) == 120


def test_vertex_charts_are_consistent(quintic_complexes):
    for ac in quintic_complexes:
        for v in ac.vertices:
            ch = vertex_chart(ac, v)
            assert all(ch.checks.values()), ch.checks


def test_monodromy_is_unipotent_and_matches_oracle(quintic_complexes):
    for ac in quintic_complexes:
        for lp in loops(ac):
            T = monodromy(ac, *lp)
            assert T.matrix == monodromy_oracle(ac, *lp).matrix
            assert T.determinant() == 1
            n = T.size
            A = [[T.matrix[i][j] - (i == j) for j in range(n)] for i in range(n)]
            sq = [[sum(A[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            assert all(x == 0 for r in sq for x in r)


def test_reversed_loop_gives_inverse(quintic_complexes):
    ac = quintic_complexes[1]
    v, c, v2, c2 = next(lp for lp in loops(ac) if not monodromy(ac, *lp).is_identity())
    T = monodromy(ac, v, c, v2, c2).matrix
    U = monodromy(ac, v, c2, v2, c).matrix
    n = len(T)
    prod = [[sum(T[i][k] * U[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [[int(i == j) for j in range(n)] for i in range(n)]


def test_loop_validation(quintic_complexes):
    ac = quintic_complexes[0]
    c = ac.maximal[0]
    with pytest.raises(ComplexError):
        monodromy(ac, c, c, c, c)


def test_legendre_on_corpus():
    for name in ("quintic", "quadric", "square", "schoen"):
        rep = dlt_verify(example(name))
        assert rep["nabla"].ok and rep["delta"].ok


def test_unknown_side():
    with pytest.raises(ComplexError):
        build_complex(example("square"), "sideways")
