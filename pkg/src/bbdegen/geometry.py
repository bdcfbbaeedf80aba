"""Exact convex polyhedra: hulls, facets, faces, duals and Minkowski sums.

Everything is built on a double-description routine working with integer
vectors.  A polyhedron is stored with both representations: an irredundant
list of vertices and recession rays, and a list of facet inequalities
``<a, x> + c >= 0`` together with the equations of its affine hull.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Iterable, Sequence

from .lattice import (
    canonical_sign,
    dot,
    integer_scaling,
    is_integral,
    normalize,
    primitive,
    rank,
    rref,
    solve,
    row_space_basis,
    sub,
)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class LatticeSpace:
    """A lattice Z^rank tagged as living on the M side or the N side."""

    rank: int
    side: str = "M"

    def dual(self) -> "LatticeSpace":
        return LatticeSpace(self.rank, "N" if self.side == "M" else "M")

    def pairing(self, m: Sequence, n: Sequence):
        if len(m) != self.rank or len(n) != self.rank:
            raise GeometryError("pairing of vectors of the wrong rank")
        return dot(m, n)


# ---------------------------------------------------------------------------
# double description


def _prim(v):
    g = 0
    for x in v:
        if x:
            g = _gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _int_rank(vectors: list, D: int) -> int:
    rows = [list(v) for v in vectors if any(v)]
    r = 0
    for c in range(D):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            q = rows[i][c]
            if q:
                rows[i] = [p[c] * x - q * y for x, y in zip(rows[i], p)]
        r += 1
        if r == len(rows):
            break
    return r


def double_description(rows: Sequence[Sequence[int]], D: int):
    """Generators of the cone {y in Q^D : <a, y> >= 0 for every row a}.

    Returns ``(lineality, rays)`` where ``lineality`` is a list of integer
    vectors spanning the lineality space and ``rays`` is a list of
    ``(vector, mask)`` pairs, one per extreme ray modulo lineality; bit ``k``
    of ``mask`` is set when row ``k`` vanishes on the ray.
    """
    lin = [tuple(1 if j == i else 0 for j in range(D)) for i in range(D)]
    rays: list = []
    pointed_dim = None
    for k, a in enumerate(rows):
        bit = 1 << k
        idx = None
        for i, l in enumerate(lin):
            if dot(a, l):
                idx = i
                break
        if idx is not None:
            l0 = lin.pop(idx)
            s = dot(a, l0)
            if s < 0:
                l0 = tuple(-x for x in l0)
                s = -s
            new_lin = []
            for l in lin:
                t = dot(a, l)
                new_lin.append(_prim([s * x - t * y for x, y in zip(l, l0)]) if t else l)
            lin = new_lin
            new_rays = []
            for r, m in rays:
                t = dot(a, r)
                if t:
                    r = _prim([s * x - t * y for x, y in zip(r, l0)])
                new_rays.append((r, m | bit))
            new_rays.append((l0, bit - 1))
            rays = new_rays
            pointed_dim = None
            continue
        vals = [dot(a, r) for r, _ in rays]
        if all(v >= 0 for v in vals):
            rays = [(r, m | bit) if v == 0 else (r, m) for (r, m), v in zip(rays, vals)]
            continue
        if pointed_dim is None:
            pointed_dim = _int_rank(lin + [r for r, _ in rays], D) - len(lin)
        need = pointed_dim - 2
        pos, neg, new_rays = [], [], []
        for (r, m), v in zip(rays, vals):
            if v > 0:
                pos.append((r, m, v))
                new_rays.append((r, m))
            elif v == 0:
                new_rays.append((r, m | bit))
            else:
                neg.append((r, m, v))
        masks = [m for _, m in rays]
        for rp, mp, vp in pos:
            for rn, mn, vn in neg:
                c = mp & mn
                if c.bit_count() < need:
                    continue
                # adjacent iff no third ray vanishes on all common rows
                hits = 0
                for m in masks:
                    if m & c == c:
                        hits += 1
                        if hits > 2:
                            break
                if hits > 2:
                    continue
                w = _prim([vp * x - vn * y for x, y in zip(rn, rp)])
                new_rays.append((w, c | bit))
        if not pos:
            pointed_dim = None
        rays = new_rays
    return lin, rays


# ---------------------------------------------------------------------------
# polyhedra


def _to_vec(p) -> tuple:
    return tuple(normalize(Fraction(x)) for x in p)


def _homog_point(v) -> tuple:
    return _prim(integer_scaling((1,) + tuple(v)))


def _canonical_equations(eqs: list, d: int) -> list:
    """Row-reduced integral basis of a space of affine equations (a, c)."""
    if not eqs:
        return []
    R, _ = rref([tuple(a) + (c,) for a, c in eqs])
    out = []
    for row in R:
        v = primitive(row)
        out.append((v[:d], v[d]))
    return out


def _reduce_inequality(a, c, eqs: list, d: int):
    """Canonical representative of an inequality modulo the affine-hull equations.

    The normal is projected orthogonally onto the linear space parallel to the
    affine hull and then scaled to a primitive integer vector.
    """
    if eqs:
        E = [e for e, _ in eqs]
        G = [[Fraction(dot(x, y)) for y in E] for x in E]
        rhs = [Fraction(dot(x, a)) for x in E]
        lam = solve(G, rhs)
        a = [Fraction(x) for x in a]
        c = Fraction(c)
        for l, (e, ce) in zip(lam, eqs):
            a = [x - l * y for x, y in zip(a, e)]
            c -= l * ce
    if not any(a):
        raise GeometryError("degenerate inequality")
    pa = primitive(a)
    k = next(i for i, x in enumerate(pa) if x)
    s = Fraction(pa[k]) / Fraction(a[k])
    return pa, normalize(Fraction(c) * s)


class Polyhedron:
    """A convex polyhedron with cached H- and V-representations.

    Inequalities are pairs ``(a, c)`` meaning ``<a, x> + c >= 0`` with ``a``
    primitive; equations are pairs meaning ``<a, x> + c = 0``.
    """

    def __init__(self, d, vertices, rays, inequalities, equations, space=None):
        self.d = d
        self.space = space if space is not None else LatticeSpace(d)
        self.vertices = tuple(vertices)
        self.rays = tuple(rays)
        self.inequalities = tuple(inequalities)
        self.equations = tuple(equations)
        self.dim = d - len(self.equations)
        nv = len(self.vertices)
        self._nv = nv
        inc = []
        for a, c in self.inequalities:
            vm = 0
            for i, v in enumerate(self.vertices):
                if dot(a, v) + c == 0:
                    vm |= 1 << i
            rm = 0
            for j, r in enumerate(self.rays):
                if dot(a, r) == 0:
                    rm |= 1 << j
            inc.append(vm | (rm << nv))
        self._facet_masks = tuple(inc)

    # -- basic queries ------------------------------------------------------

    def __repr__(self):
        return f"Polyhedron(dim={self.dim}, vertices={len(self.vertices)}, rays={len(self.rays)})"

    def __eq__(self, other):
        return (
            isinstance(other, Polyhedron)
            and self.d == other.d
            and self.vertices == other.vertices
            and self.rays == other.rays
        )

    def __hash__(self):
        return hash((self.d, self.vertices, self.rays))

    @property
    def is_bounded(self) -> bool:
        return not self.rays

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def facets(self):
        """Facet inequalities as (primitive normal, offset) pairs."""
        return self.inequalities

    def contains(self, x) -> bool:
        x = _to_vec(x)
        return all(dot(a, x) + c == 0 for a, c in self.equations) and all(
            dot(a, x) + c >= 0 for a, c in self.inequalities
        )

    def interior_contains(self, x) -> bool:
        """Membership in the relative interior."""
        x = _to_vec(x)
        return all(dot(a, x) + c == 0 for a, c in self.equations) and all(
            dot(a, x) + c > 0 for a, c in self.inequalities
        )

    def barycenter(self) -> tuple:
        n = len(self.vertices)
        return tuple(normalize(Fraction(sum(v[i] for v in self.vertices), n)) for i in range(self.d))

    def relative_interior_point(self) -> tuple:
        b = [Fraction(x) for x in self.barycenter()]
        for r in self.rays:
            b = [x + y for x, y in zip(b, r)]
        return tuple(normalize(x) for x in b)

    def linear_span_basis(self) -> list:
        """Basis of the linear space parallel to the affine hull."""
        v0 = self.vertices[0]
        vecs = [sub(v, v0) for v in self.vertices[1:]] + list(self.rays)
        return row_space_basis(vecs)

    def translate(self, t) -> "Polyhedron":
        t = _to_vec(t)
        verts = [tuple(normalize(Fraction(x) + y) for x, y in zip(v, t)) for v in self.vertices]
        return convex_hull(verts, self.rays, space=self.space)

    def dilate(self, k) -> "Polyhedron":
        verts = [tuple(normalize(Fraction(k) * x) for x in v) for v in self.vertices]
        return convex_hull(verts, self.rays, space=self.space)

    def has_integral_vertices(self) -> bool:
        return all(is_integral(v) for v in self.vertices)

    def min_value(self, u):
        """Minimum of <u, .> on the polyhedron, or None if unbounded below."""
        if any(dot(u, r) < 0 for r in self.rays):
            return None
        return min(dot(u, v) for v in self.vertices)

    def face_minimizing(self, u) -> "Face":
        m = self.min_value(u)
        if m is None:
            raise GeometryError("functional is unbounded below on the polyhedron")
        vm = 0
        for i, v in enumerate(self.vertices):
            if dot(u, v) == m:
                vm |= 1 << i
        rm = 0
        for j, r in enumerate(self.rays):
            if dot(u, r) == 0:
                rm |= 1 << j
        return self.face_from_mask(vm | (rm << self._nv))

    def support_value(self, n):
        """The support function -inf <., n> (None when unbounded)."""
        m = self.min_value(n)
        return None if m is None else -m

    # -- faces ---------------------------------------------------------------

    def face_from_mask(self, mask: int) -> "Face":
        return Face(self, mask)

    def closure_mask(self, mask: int) -> int:
        """Smallest face containing the given generators, as a generator mask."""
        full = (1 << (self._nv + len(self.rays))) - 1
        out = full
        for fm in self._facet_masks:
            if fm & mask == mask:
                out &= fm
        return out

    def face_containing(self, points=(), rays=()) -> "Face":
        """Smallest face containing the given points of the polyhedron."""
        u = [0] * self.d
        pts = [_to_vec(p) for p in points]
        rs = [tuple(r) for r in rays]
        for (a, c), fm in zip(self.inequalities, self._facet_masks):
            if all(dot(a, p) + c == 0 for p in pts) and all(dot(a, r) == 0 for r in rs):
                u = [x + y for x, y in zip(u, a)]
        return self.face_minimizing(tuple(u))

    @cached_property
    def face_lattice(self) -> "FaceLattice":
        return FaceLattice(self)

    def faces(self, dim=None) -> list:
        fl = self.face_lattice
        if dim is None:
            return [f for k in sorted(fl.by_dim) for f in fl.by_dim[k]]
        return list(fl.by_dim.get(dim, []))

    def f_vector(self) -> tuple:
        fl = self.face_lattice
        return tuple(len(fl.by_dim.get(k, [])) for k in range(self.dim))

    def facet_faces(self) -> list:
        return [Face(self, m) for m in self._facet_masks]

    # -- lattice points ------------------------------------------------------

    def lattice_points(self) -> list:
        if self.rays:
            raise GeometryError("lattice points of an unbounded polyhedron")
        lo = [floor(min(Fraction(v[i]) for v in self.vertices)) for i in range(self.d)]
        hi = [ceil(max(Fraction(v[i]) for v in self.vertices)) for i in range(self.d)]
        out = []
        cons = [(a, c) for a, c in self.inequalities]
        eqs = list(self.equations)
        for p in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
            if all(dot(a, p) + c == 0 for a, c in eqs) and all(dot(a, p) + c >= 0 for a, c in cons):
                out.append(tuple(p))
        return out

    def is_simplex(self) -> bool:
        return not self.rays and len(self.vertices) == self.dim + 1


def convex_hull(points: Iterable, rays: Iterable = (), space: LatticeSpace | None = None) -> Polyhedron:
    """Irredundant double representation of Conv(points) + Cone(rays)."""
    pts = [_to_vec(p) for p in points]
    rs = [primitive(r) for r in rays if any(r)]
    if not pts:
        raise GeometryError("convex hull of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts) or any(len(r) != d for r in rs):
        raise GeometryError("points of mixed ambient dimension")
    if space is not None and space.rank != d:
        raise GeometryError("ambient space rank mismatch")
    pts = sorted(set(pts))
    rs = sorted(set(rs))
    gens = [_homog_point(p) for p in pts] + [(0,) + tuple(r) for r in rs]
    order = sorted(range(len(gens)), key=lambda i: _order_key(gens[i]))
    lin, cone_rays = double_description([gens[i] for i in order], d + 1)
    eqs = _canonical_equations([(l[1:], l[0]) for l in lin], d)
    vbits = 0
    for pos, i in enumerate(order):
        if i < len(pts):
            vbits |= 1 << pos
    ineqs = set()
    for y, m in cone_rays:
        if m & vbits == 0:
            continue
        ineqs.add(_reduce_inequality(y[1:], y[0], eqs, d))
    ineqs = sorted(ineqs)
    eq_normals = [a for a, _ in eqs]
    verts = []
    for p in pts:
        tight = [a for a, c in ineqs if dot(a, p) + c == 0]
        if rank(tight + eq_normals) == d:
            verts.append(p)
    if not verts:
        raise GeometryError("polyhedron contains a line")
    rays_out = []
    for r in rs:
        if any(dot(a, r) < 0 for a, _ in ineqs):
            raise GeometryError("inconsistent ray")
        tight = [a for a, c in ineqs if dot(a, r) == 0]
        if rank(tight + eq_normals) == d - 1:
            rays_out.append(r)
    if rs and rank(rays_out + eq_normals) < rank(rs + eq_normals):
        raise GeometryError("polyhedron contains a line")
    return Polyhedron(d, verts, rays_out, ineqs, eqs, space=space)


def _order_key(g):
    return tuple(-abs(x) for x in g[1:]) + tuple(g)


def from_inequalities(d: int, inequalities: Iterable, equations: Iterable = (), space=None):
    """The polyhedron {x : <a,x> + c >= 0, <e,x> + f = 0}, or None if empty."""
    rows = []
    for a, c in inequalities:
        rows.append(integer_scaling((c,) + tuple(a)))
    for a, c in equations:
        v = integer_scaling((c,) + tuple(a))
        rows.append(v)
        rows.append(tuple(-x for x in v))
    rows.sort(key=_order_key)
    rows.append((1,) + (0,) * d)
    lin, rays = double_description(rows, d + 1)
    if lin:
        if any(l[0] for l in lin):
            raise GeometryError("internal: lineality with nonzero height")
        raise GeometryError("polyhedron contains a line")
    pts, rs = [], []
    for y, _ in rays:
        if y[0] > 0:
            pts.append(tuple(normalize(Fraction(x, y[0])) for x in y[1:]))
        elif y[0] == 0:
            rs.append(y[1:])
    if not pts:
        return None
    return convex_hull(pts, rs, space=space)


# ---------------------------------------------------------------------------
# faces


class Face:
    """A nonempty face of a polyhedron, identified by the generators it contains."""

    __slots__ = ("parent", "mask", "_dim", "_poly")

    def __init__(self, parent: Polyhedron, mask: int):
        self.parent = parent
        self.mask = mask
        self._dim = None
        self._poly = None

    def __eq__(self, other):
        return isinstance(other, Face) and self.parent is other.parent and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.parent), self.mask))

    def __repr__(self):
        return f"Face(dim={self.dim}, vertices={self.vertex_indices}, rays={self.ray_indices})"

    @property
    def vertex_indices(self) -> tuple:
        nv = self.parent._nv
        return tuple(i for i in range(nv) if self.mask >> i & 1)

    @property
    def ray_indices(self) -> tuple:
        nv = self.parent._nv
        return tuple(j for j in range(len(self.parent.rays)) if self.mask >> (nv + j) & 1)

    @property
    def vertices(self) -> tuple:
        return tuple(self.parent.vertices[i] for i in self.vertex_indices)

    @property
    def rays(self) -> tuple:
        return tuple(self.parent.rays[j] for j in self.ray_indices)

    @property
    def dim(self) -> int:
        if self._dim is None:
            vs = self.vertices
            if not vs:
                self._dim = -1
            else:
                self._dim = rank([sub(v, vs[0]) for v in vs[1:]] + list(self.rays))
        return self._dim

    def as_polyhedron(self) -> Polyhedron:
        if self._poly is None:
            self._poly = convex_hull(self.vertices, self.rays, space=self.parent.space)
        return self._poly

    def contains_face(self, other: "Face") -> bool:
        return other.mask & self.mask == other.mask

    def normal_functional(self) -> tuple:
        """Sum of the facet normals of facets containing the face."""
        u = [0] * self.parent.d
        for (a, _), fm in zip(self.parent.inequalities, self.parent._facet_masks):
            if fm & self.mask == self.mask:
                u = [x + y for x, y in zip(u, a)]
        return tuple(u)

    def containing_facets(self) -> list:
        return [
            i for i, fm in enumerate(self.parent._facet_masks) if fm & self.mask == self.mask
        ]


class FaceLattice:
    """All faces of a polyhedron graded by dimension with covering relations.

    The empty face is represented by mask 0 in dimension -1.
    """

    def __init__(self, P: Polyhedron):
        self.polyhedron = P
        nv = P._nv
        vbits = (1 << nv) - 1
        top = (1 << (nv + len(P.rays))) - 1
        self.masks_by_dim: dict[int, list] = {P.dim: [top]}
        self.covers: dict[int, list] = {}
        level = [top]
        k = P.dim
        while k > 0:
            nxt = set()
            for G in level:
                cands = set()
                for fm in P._facet_masks:
                    c = G & fm
                    if c != G and c & vbits:
                        cands.add(c)
                maximal = [c for c in cands if not any(c != e and c & e == c for e in cands)]
                self.covers[G] = sorted(maximal)
                nxt.update(maximal)
            k -= 1
            level = sorted(nxt)
            self.masks_by_dim[k] = level
        for G in level:
            self.covers[G] = [0]
        self.masks_by_dim[-1] = [0]
        self.covers[0] = []
        self.by_dim = {
            k: [Face(P, m) for m in ms] for k, ms in self.masks_by_dim.items() if k >= 0
        }
        for k, fs in self.by_dim.items():
            for f in fs:
                f._dim = k

    def all_faces(self) -> list:
        return [f for k in sorted(self.by_dim) for f in self.by_dim[k]]

    def f_vector(self) -> tuple:
        return tuple(len(self.by_dim.get(k, [])) for k in range(self.polyhedron.dim))

    def face(self, mask: int) -> Face:
        return Face(self.polyhedron, mask)


# ---------------------------------------------------------------------------
# cones


class Cone:
    """A rational polyhedral cone L + cone(generators) with lineality space L."""

    def __init__(self, generators: Iterable = (), lineality: Iterable = (), d: int | None = None):
        gens = [primitive(g) for g in generators if any(g)]
        lin = [tuple(l) for l in lineality if any(l)]
        if d is None:
            if gens:
                d = len(gens[0])
            elif lin:
                d = len(lin[0])
            else:
                raise GeometryError("ambient dimension of the empty cone is unknown")
        self.d = d
        self.lineality = tuple(row_space_basis(lin)) if lin else ()
        if self.lineality:
            gens = [self._reduce(g) for g in gens]
            gens = [primitive(g) for g in gens if any(g)]
        gens = sorted(set(gens))
        P = convex_hull([(0,) * d], gens)
        if P.vertices != ((0,) * d,):
            raise GeometryError("generators do not span a pointed cone modulo lineality")
        self.rays = P.rays
        self._P = P

    def _reduce(self, g):
        """Orthogonal projection onto the complement of the lineality space."""
        E = list(self.lineality)
        G = [[Fraction(dot(x, y)) for y in E] for x in E]
        lam = solve(G, [Fraction(dot(x, g)) for x in E])
        v = [Fraction(x) for x in g]
        for l, e in zip(lam, E):
            v = [x - l * y for x, y in zip(v, e)]
        return tuple(v)

    def __repr__(self):
        return f"Cone(dim={self.dim}, rays={list(self.rays)}, lineality={len(self.lineality)})"

    def __eq__(self, other):
        return (
            isinstance(other, Cone)
            and self.d == other.d
            and self.rays == other.rays
            and self.lineality == other.lineality
        )

    def __hash__(self):
        return hash((self.d, self.rays, self.lineality))

    @property
    def dim(self) -> int:
        return self._P.dim + len(self.lineality)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    def contains(self, x) -> bool:
        x = _to_vec(x)
        if self.lineality:
            x = self._reduce(x)
        return self._P.contains(x)

    def relative_interior_contains(self, x) -> bool:
        x = _to_vec(x)
        if self.lineality:
            x = self._reduce(x)
        return self._P.interior_contains(x)

    def interior_point(self) -> tuple:
        s = [0] * self.d
        for r in self.rays:
            s = [a + b for a, b in zip(s, r)]
        return tuple(s)

    @property
    def facet_normals(self) -> list:
        """Inner normals of the facets (in the span of the cone)."""
        return [a for a, _ in self._P.inequalities]

    @property
    def span_equations(self) -> list:
        return [a for a, _ in self._P.equations if not any(dot(a, l) for l in self.lineality)]

    def faces(self) -> list:
        """All faces as cones, lowest dimension first."""
        out = []
        for f in self._P.face_lattice.all_faces():
            out.append(Cone(f.rays, self.lineality, d=self.d))
        return out

    def face_ray_sets(self) -> list:
        """All faces as frozensets of indices into ``self.rays``."""
        return [frozenset(f.ray_indices) for f in self._P.face_lattice.all_faces()]

    def dual(self) -> "Cone":
        """The dual cone {y : <y, x> >= 0 on the cone}."""
        gens = list(self.facet_normals)
        lin = [a for a, _ in self._P.equations]
        return Cone(gens, lin, d=self.d)


# ---------------------------------------------------------------------------
# operations


def polar_dual(P: Polyhedron) -> Polyhedron:
    """{n : <m, n> >= -1 for all m in P}."""
    if P.rays or not P.is_full_dimensional:
        raise GeometryError("polar dual needs a bounded full-dimensional polytope")
    if any(c <= 0 for _, c in P.inequalities):
        raise GeometryError("0 is not an interior point")
    space = P.space.dual()
    return from_inequalities(P.d, [(v, 1) for v in P.vertices], space=space)


def is_reflexive(P: Polyhedron) -> bool:
    if P.rays or not P.is_full_dimensional or not P.has_integral_vertices():
        return False
    return all(c == 1 for _, c in P.inequalities)


def minkowski_sum(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    if P.d != Q.d:
        raise GeometryError("Minkowski sum of polyhedra in different spaces")
    pts = {tuple(normalize(Fraction(a) + b) for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
    return convex_hull(sorted(pts), list(P.rays) + list(Q.rays), space=P.space)


def minkowski_sum_all(polys: Sequence[Polyhedron]) -> Polyhedron:
    out = polys[0]
    for Q in polys[1:]:
        out = minkowski_sum(out, Q)
    return out


def face_minkowski_decompose(F: Face, P: Polyhedron, Q: Polyhedron) -> tuple:
    """The unique pair of faces (F_P, F_Q) with F = F_P + F_Q."""
    S = F.parent
    if S.d != P.d or S.d != Q.d:
        raise GeometryError("ambient mismatch")
    u = F.normal_functional()
    FP = P.face_minimizing(u)
    FQ = Q.face_minimizing(u)
    sums = {tuple(normalize(Fraction(a) + b) for a, b in zip(p, q)) for p in FP.vertices for q in FQ.vertices}
    if set(F.vertices) - sums or any(not F.as_polyhedron().contains(s) for s in sums):
        raise GeometryError("face is not a face of the Minkowski sum P + Q")
    return FP, FQ


def normal_cone(P: Polyhedron, F: Face) -> Cone:
    """Cone of functionals whose minimizing set on P contains F."""
    if F.parent is not P:
        F = P.face_containing(F.vertices, F.rays)
    gens = [P.inequalities[i][0] for i in F.containing_facets()]
    lin = [a for a, _ in P.equations]
    return Cone(gens, lin, d=P.d)


def is_elementary_simplex(P: Polyhedron) -> bool:
    if not P.has_integral_vertices():
        raise GeometryError("elementary simplex test needs integral vertices")
    if not P.is_simplex():
        return False
    return len(P.lattice_points()) == len(P.vertices)


def dual_face(P: Polyhedron, F: Face) -> Face:
    """The face of the reflexive P pairing to -1 with all of the face F of P*."""
    if F.dim < 0 or F.dim >= F.parent.dim:
        raise GeometryError("improper face")
    u = tuple(sum(v[i] for v in F.vertices) for i in range(P.d))
    G = P.face_minimizing(u)
    if G.vertices and dot(u, G.vertices[0]) != -len(F.vertices):
        raise GeometryError("face does not pair to -1 with any face of P")
    return G


def cayley_polytope(polys: Sequence[Polyhedron]) -> Polyhedron:
    """Conv(P_1 x {e_1}, ..., P_r x {e_r}) in M_R x R^r."""
    r = len(polys)
    pts = []
    for i, Pi in enumerate(polys):
        e = tuple(1 if j == i else 0 for j in range(r))
        pts.extend(tuple(v) + e for v in Pi.vertices)
    return convex_hull(pts)


def point_polyhedron(p) -> Polyhedron:
    return convex_hull([p])


def canonical_vertex_set(P: Polyhedron) -> tuple:
    return tuple(sorted(P.vertices))


__all__ = [
    "Cone",
    "Face",
    "FaceLattice",
    "GeometryError",
    "LatticeSpace",
    "Polyhedron",
    "canonical_sign",
    "cayley_polytope",
    "convex_hull",
    "double_description",
    "dual_face",
    "face_minkowski_decompose",
    "from_inequalities",
    "is_elementary_simplex",
    "is_reflexive",
    "lattice_points",
    "minkowski_sum",
    "minkowski_sum_all",
    "normal_cone",
    "polar_dual",
]


def lattice_points(P: Polyhedron) -> list:
    return P.lattice_points()
