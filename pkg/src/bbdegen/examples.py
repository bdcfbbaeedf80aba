"""The built-in example corpus."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .geometry import LatticeSpace, convex_hull
from .nef import NefPartition, validate

M4 = LatticeSpace(4, "M")


def _simplex_dilate(d: int, k: int) -> list:
    """Vertices of the standard reflexive simplex of dimension d dilated to degree k."""
    base = [-1] * d
    out = [tuple(base)]
    for i in range(d):
        v = list(base)
        v[i] = k - 1
        out.append(tuple(v))
    return out


def _product(*factors):
    pts = [()]
    for f in factors:
        pts = [p + q for p in pts for q in f]
    return pts


# Coordinates of the fibred-product example, M = R x R^2 x R^2.
P0 = [(0, -1, -1, 0, 0), (0, 2, -1, 0, 0), (0, -1, 2, 0, 0)]
PP = [(1, -1, -1, 0, 0), (1, 2, -1, 0, 0), (1, -1, 2, 0, 0)]
Q0 = [(0, 0, 0, -1, -1), (0, 0, 0, 2, -1), (0, 0, 0, -1, 2)]
QM = [(-1, 0, 0, -1, -1), (-1, 0, 0, 2, -1), (-1, 0, 0, -1, 2)]
R_PLUS, R_MINUS = (1, 0, 0, 0, 0), (-1, 0, 0, 0, 0)
S = [(0, -1, -1, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0)]
T = [(0, 0, 0, -1, -1), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)]
TRIANGLE = [(-1, -1), (2, -1), (-1, 2)]


def schoen_data():
    space = LatticeSpace(5, "M")
    delta = convex_hull(_product([(-1,), (1,)], TRIANGLE, TRIANGLE), space=space)
    d1 = convex_hull(P0 + PP, space=space)
    d2 = convex_hull(Q0 + QM, space=space)
    return delta, [d1, d2]


def quintic_data():
    space = LatticeSpace(4, "M")
    delta = convex_hull(_simplex_dilate(4, 5), space=space)
    return delta, [delta]


def quartic_data():
    space = LatticeSpace(3, "M")
    delta = convex_hull(_simplex_dilate(3, 4), space=space)
    return delta, [delta]


def quadric_data():
    space = LatticeSpace(2, "M")
    delta = convex_hull([(-1, -1), (1, -1), (-1, 1), (1, 1)], space=space)
    d1 = convex_hull([(-1, 0), (1, 0)], space=space)
    d2 = convex_hull([(0, -1), (0, 1)], space=space)
    return delta, [d1, d2]


def square_data():
    space = LatticeSpace(2, "M")
    delta = convex_hull([(-1, -1), (1, -1), (-1, 1), (1, 1)], space=space)
    return delta, [delta]


@dataclass(frozen=True)
class ExampleRecord:
    name: str
    description: str
    builder: object
    mpcp_heights: str | None = None


EXAMPLES = {
    "quintic": ExampleRecord("quintic", "quintic threefold, r=1 in dimension 4", quintic_data, None),
    "quadric": ExampleRecord("quadric", "[-1,1]^2 split into its two coordinate segments", quadric_data, None),
    "schoen": ExampleRecord(
        "schoen",
        "fibred product of rational elliptic surfaces in P1 x P2 x P2, r=2",
        schoen_data,
        "schoen_mpcp.heights",
    ),
    "square": ExampleRecord("square", "[-1,1]^2 with r=1", square_data, None),
    "quartic": ExampleRecord("quartic", "quartic K3 surface, r=1 in dimension 3", quartic_data, "quartic_mpcp.heights"),
}

CORPUS = ("quintic", "quadric", "schoen", "square")


@lru_cache(maxsize=None)
def example(name: str) -> NefPartition:
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(sorted(EXAMPLES))}")
    delta, parts = EXAMPLES[name].builder()
    return validate(delta, parts)


def data_text(filename: str) -> str:
    return resources.files("bbdegen.data").joinpath(filename).read_text()
