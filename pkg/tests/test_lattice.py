from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from bbdegen.lattice import (
    QuotientLattice,
    canonical_sign,
    det,
    dot,
    inverse,
    mat_mul,
    normalize,
    nullspace,
    primitive,
    rank,
    rref,
    smith_invariants,
    solve,
)

from oracles import int_det

small = st.integers(-6, 6)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
    )


def square(n=st.integers(1, 4)):
    return n.flatmap(lambda k: st.lists(st.lists(small, min_size=k, max_size=k), min_size=k, max_size=k))


def test_normalize_turns_integral_fractions_into_ints():
    assert normalize(Fraction(4, 2)) == 2 and type(normalize(Fraction(4, 2))) is int
    assert normalize(Fraction(1, 2)) == Fraction(1, 2)


def test_primitive_and_sign():
    assert primitive((4, -6, 0)) == (2, -3, 0)
    assert primitive((Fraction(1, 2), Fraction(1, 3))) == (3, 2)
    assert canonical_sign((0, -1, 2)) == (0, 1, -2)


@given(matrices())
def test_integer_rank_matches_fraction_rank(A):
    as_frac = [[Fraction(x) for x in r] for r in A]
    assert rank(A) == rank(as_frac) == len(rref(as_frac)[1])


@given(square())
def test_det_matches_oracle(A):
    assert det(A) == int_det(A)


@given(square())
def test_inverse_roundtrip(A):
    if det(A) == 0:
        return
    B = inverse(A)
    n = len(A)
    assert [list(r) for r in mat_mul(A, B)] == [[1 if i == j else 0 for j in range(n)] for i in range(n)]


@given(matrices())
def test_nullspace_is_kernel(A):
    n = len(A[0])
    N = nullspace(A, n)
    assert len(N) == n - rank(A)
    for v in N:
        assert all(dot(r, v) == 0 for r in A)


@given(square(), st.lists(small, min_size=4, max_size=4))
def test_solve(A, x):
    x = x[: len(A)]
    b = [dot(r, x) for r in A]
    y = solve(A, b)
    assert y is not None
    assert [dot(r, y) for r in A] == b


@settings(max_examples=60)
@given(st.integers(2, 5).flatmap(lambda d: st.tuples(st.just(d), st.lists(st.lists(small, min_size=d, max_size=d), max_size=d - 1))))
def test_quotient_lattice(data):
    d, vecs = data
    Q = QuotientLattice(vecs, d)
    assert Q.rank == d - rank(vecs)
    for v in vecs:
        assert all(x == 0 for x in Q.project(v))
    for i, b in enumerate(Q.quotient_basis()):
        assert list(Q.project(b)) == [1 if j == i else 0 for j in range(Q.rank)]
    U = [list(r) for r in Q.U]
    assert abs(det(U)) == 1


def test_smith_invariants():
    assert smith_invariants([[2, 0], [0, 3]]) == [1, 6]
    assert smith_invariants([[2, 4], [4, 8]]) == [2]
    assert smith_invariants([[0, 0]]) == []
