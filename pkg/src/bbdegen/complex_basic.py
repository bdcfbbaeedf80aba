"""Cell complexes of a nef-partition with anticanonical heights.

Cells of the nabla-side complex are the Minkowski sums of the beta_i^* pieces
of the proper faces of Delta^*.  The delta-side complex is the nabla-side
complex of the swapped partition, so its cells live in M.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .fans import DescendedFunction, Fan, descend_pl, newton_polytope, quotient_fan
from .geometry import Cone, Face, Polyhedron, convex_hull, dual_face, minkowski_sum_all
from .lattice import (
    QuotientLattice,
    det,
    dot,
    is_integral,
    normalize,
    row_space_basis,
    smith_invariants,
    solve,
    sub,
    transpose,
)
from .nef import NefPartition


class ComplexError(ValueError):
    pass


def _fsum(vs, d):
    out = [Fraction(0)] * d
    for v in vs:
        out = [a + b for a, b in zip(out, v)]
    return tuple(normalize(x) for x in out)


# ---------------------------------------------------------------------------
# face quartets


@dataclass
class FaceQuartet:
    sigma_star: Face
    sigma: Face
    sigma_i_star: list
    msig: Polyhedron
    msig_face: Face
    msig_star: Face
    msig_i_star: list
    dims: dict = field(default_factory=dict)


def _vset(P) -> frozenset:
    return frozenset(P.vertices)


def face_quartet(np_: NefPartition, sigma_star: Face):
    """The six faces attached to a proper face of Delta^*, or None when beta is empty.

    Every identity relating them is asserted; a failure raises ComplexError.
    """
    P = np_.delta_star
    if sigma_star.parent is not P:
        raise ComplexError("face of the wrong polytope")
    if sigma_star.dim < 0 or sigma_star.dim >= P.dim:
        raise ComplexError("improper face")
    r = np_.r
    n = np_.n
    verts = sigma_star.vertices
    sigma = dual_face(np_.delta, sigma_star)
    pieces = []
    for i in range(r):
        keep = [v for v in verts if np_.phi_i(i, v) == 1]
        pieces.append(convex_hull(keep, space=P.space) if keep else None)
    # sigma^* = Conv(sigma_i^*)
    got = set()
    for p in pieces:
        if p is not None:
            got |= set(p.vertices)
    if got != set(verts):
        raise ComplexError("sigma^* is not the hull of its beta pieces")
    if any(p is None for p in pieces):
        return None
    msig = minkowski_sum_all(pieces)
    msig_face = np_.nabla.face_containing(msig.vertices)
    if set(msig_face.vertices) != set(msig.vertices):
        raise ComplexError("sum of beta pieces is not a face of nabla")
    msig_star = dual_face(np_.nabla_star, msig_face)
    # two independent descriptions of check-sigma_i^*
    msig_i_star = []
    u = _fsum(verts, n)
    for i in range(r):
        a = [m for m in msig_star.vertices if np_.check_phi_i(i, m) == 1]
        b = np_.parts[i].face_minimizing(u)
        ok_b = all(
            dot(m, v) == -np_.phi_i(i, v) for m in b.vertices for v in verts
        )
        if not ok_b or set(a) != set(b.vertices):
            raise ComplexError(f"check-sigma_{i}^* descriptions disagree")
        msig_i_star.append(convex_hull(a, space=np_.nabla_star.space))
    got = set()
    for p in msig_i_star:
        got |= set(p.vertices)
    if got != set(msig_star.vertices):
        raise ComplexError("check-sigma^* is not the hull of its pieces")
    ssum = minkowski_sum_all(msig_i_star)
    if _vset(ssum) != frozenset(sigma.vertices):
        raise ComplexError("sigma is not the sum of the check-sigma_i^*")
    dims = {
        "sigma_star": sigma_star.dim,
        "sigma": sigma.dim,
        "msig": msig.dim,
        "msig_star": msig_star.dim,
    }
    return FaceQuartet(sigma_star, sigma, pieces, msig, msig_face, msig_star, msig_i_star, dims)


def dimension_violations(np_: NefPartition, q: FaceQuartet) -> list:
    """The dimension identities that fail for a quartet."""
    r, n = np_.r, np_.n
    d = q.dims
    bad = []
    if d["msig"] != d["sigma_star"] - r + 1:
        bad.append("dim msig = dim sigma* - r + 1")
    if d["sigma"] != d["msig_star"] - r + 1:
        bad.append("dim sigma = dim msig* - r + 1")
    if d["msig"] != (n - r) - d["sigma"]:
        bad.append("dim msig = (n - r) - dim sigma")
    return bad


def all_quartets(np_: NefPartition) -> list:
    out = []
    for F in np_.delta_star.faces():
        if F.dim >= np_.delta_star.dim:
            continue
        q = face_quartet(np_, F)
        if q is not None:
            out.append(q)
    return out


# ---------------------------------------------------------------------------
# the complex


@dataclass
class Cell:
    id: int
    dim: int
    poly: Polyhedron
    cone: frozenset
    pieces: tuple
    label: object = None


@dataclass
class MonodromyMatrix:
    basis: list
    matrix: list

    @property
    def size(self) -> int:
        return len(self.matrix)

    def is_identity(self) -> bool:
        return all(
            self.matrix[i][j] == (1 if i == j else 0) for i in range(self.size) for j in range(self.size)
        )

    def determinant(self):
        return det(self.matrix) if self.matrix else 1


@dataclass
class AffineComplex:
    """A polyhedral complex with the data needed for charts and monodromy.

    ``fan`` is the fan whose cones index the cells (via ``Cell.cone``) and
    ``embed`` maps tangent vectors of the cells into the ambient space of
    that fan.  ``vertex_parts`` stores the decomposition n_1 + ... + n_r (+ w)
    of each vertex, ``max_covectors`` the covectors m_j defining -phi_j on the
    cone of each maximal cell and ``max_heights`` the values h(m_j).
    """

    side: str
    rank: int
    r: int
    cells: list
    fan: Fan
    level: bool
    vertex_parts: dict
    max_covectors: dict
    max_heights: dict
    opposite: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.by_cone = {c.cone: c.id for c in self.cells}
        self.below = {}
        self.covers = {}
        cones = [(c.id, c.cone) for c in self.cells]
        for c in self.cells:
            lower = {i for i, S in cones if S < c.cone}
            self.below[c.id] = frozenset(lower)
        for c in self.cells:
            self.covers[c.id] = sorted(
                i for i in self.below[c.id] if self.cells[i].dim == c.dim - 1
            )
        self.above = {c.id: set() for c in self.cells}
        for c in self.cells:
            for i in self.below[c.id]:
                self.above[i].add(c.id)

    @property
    def dim(self) -> int:
        return self.rank - self.r

    @property
    def vertices(self) -> list:
        return [c.id for c in self.cells if c.dim == 0]

    @property
    def maximal(self) -> list:
        return [c.id for c in self.cells if c.dim == self.dim]

    def cells_of_dim(self, k: int) -> list:
        return [c.id for c in self.cells if c.dim == k]

    def f_vector(self) -> tuple:
        return tuple(len(self.cells_of_dim(k)) for k in range(self.dim + 1))

    def point(self, v: int) -> tuple:
        return self.cells[v].poly.vertices[0]

    def maximal_containing(self, c: int) -> list:
        return sorted(i for i in self.above[c] | {c} if self.cells[i].dim == self.dim)

    def vertices_of(self, c: int) -> list:
        return sorted(i for i in self.below[c] | {c} if self.cells[i].dim == 0)

    def to_fan_space(self, x) -> tuple:
        return tuple(x) + (0,) if self.level else tuple(x)


def _faces_closed(ac: AffineComplex) -> list:
    """Faces of cells (as vertex sets) that are not cells themselves."""
    verts = {c.id: frozenset(c.poly.vertices) for c in ac.cells}
    known = set(verts.values())
    bad = []
    for c in ac.cells:
        for F in c.poly.faces():
            if F.dim < c.dim and frozenset(F.vertices) not in known:
                bad.append((c.id, F.vertices))
    return bad


def build_complex(np_: NefPartition, side: str = "nabla") -> AffineComplex:
    """The anticanonical complex on the given side."""
    if side not in ("nabla", "delta"):
        raise ComplexError(f"unknown side {side!r}")
    work = np_ if side == "nabla" else np_.swapped
    cells = []
    quartets = {}
    for q in all_quartets(work):
        cone = frozenset(q.sigma_star.vertex_indices)
        cid = len(cells)
        cells.append(Cell(cid, q.msig.dim, q.msig, cone, tuple(q.sigma_i_star), label=q.sigma_star))
        quartets[cid] = q
    vertex_parts = {}
    max_covectors = {}
    max_heights = {}
    top = work.n - work.r
    for c in cells:
        q = quartets[c.id]
        if c.dim == 0:
            vertex_parts[c.id] = (tuple(p.vertices[0] for p in q.sigma_i_star), (0,) * work.n)
        if c.dim == top:
            ms = tuple(p.vertices[0] for p in q.msig_i_star)
            if any(len(p.vertices) != 1 for p in q.msig_i_star):
                raise ComplexError("covector not unique on a maximal cone")
            max_covectors[c.id] = ms
            max_heights[c.id] = tuple(1 for _ in ms)
    ac = AffineComplex(
        side=side,
        rank=work.n,
        r=work.r,
        cells=cells,
        fan=work.sigma,
        level=False,
        vertex_parts=vertex_parts,
        max_covectors=max_covectors,
        max_heights=max_heights,
        opposite={cid: q.sigma for cid, q in quartets.items()},
        meta={"partition": work, "quartets": quartets},
    )
    bad = _faces_closed(ac)
    if bad:
        raise ComplexError(f"cells not closed under faces: {bad[:3]}")
    return ac


def order_reversal_violations(ac: AffineComplex) -> list:
    """Pairs of comparable cells whose opposite faces are not reverse-comparable."""
    bad = []
    for c in ac.cells:
        for i in ac.below[c.id]:
            A, B = ac.opposite[i], ac.opposite[c.id]
            if not A.contains_face(B) or A == B:
                bad.append((i, c.id))
    return bad


# ---------------------------------------------------------------------------
# charts and monodromy


def _tangent_basis(ms, d) -> list:
    """Lattice basis of {x in Z^d : <m, x> = 0 for all m}."""
    Q = QuotientLattice([tuple(int(Fraction(x)) for x in m) for m in ms], d) if ms else None
    if Q is None:
        return [tuple(1 if j == i else 0 for j in range(d)) for i in range(d)]
    return list(Q.dual_basis())


@dataclass
class VertexChart:
    vertex: int
    parts: tuple
    lattice: QuotientLattice
    fan: Fan
    cell_cones: dict
    span_points: dict
    checks: dict


def vertex_chart(ac: AffineComplex, v: int) -> VertexChart:
    """Projection N -> N / Span(n_1, ..., n_r) at a vertex with its consistency checks."""
    if ac.cells[v].dim != 0:
        raise ComplexError("not a vertex")
    parts, w = ac.vertex_parts[v]
    d = ac.rank
    Q = QuotientLattice(list(parts), d)
    if Q.k != ac.r:
        raise ComplexError("vertex summands are linearly dependent")
    checks = {}
    span_points = {}
    iso_ok = True
    point_ok = True
    for c in ac.maximal_containing(v):
        ms = ac.max_covectors[c]
        hs = ac.max_heights[c]
        for i, m in enumerate(ms):
            for j, nj in enumerate(parts):
                if dot(m, nj) != (-1 if i == j else 0):
                    raise ComplexError("covectors do not pair to -delta with the vertex summands")
        poly = ac.cells[c].poly
        if any(dot(m, x) != -h for m, h in zip(ms, hs) for x in poly.vertices):
            point_ok = False
        # A ∩ Span(n_i) is the single point sum h(m_i) n_i
        p = _fsum([tuple(h * x for x in nj) for h, nj in zip(hs, parts)], d)
        span_points[c] = p
        if any(dot(m, p) != -h for m, h in zip(ms, hs)):
            point_ok = False
        # projection of the tangent lattice is unimodular
        basis = _tangent_basis(ms, d)
        M = [Q.project(b) for b in basis]
        if len(M) != Q.rank or abs(det(M)) != 1:
            iso_ok = False
    checks["affine span meets Span(n_i) in one point"] = point_ok
    checks["tangent lattice maps isomorphically"] = iso_ok
    # tangent wedges assemble to the quotient fan
    fan = ac.fan
    tau = ac.cells[v].cone
    qfan, QF = quotient_fan(fan, tau)
    qcones = set()
    for S in qfan.cones:
        qcones.add(frozenset(qfan.rays[i] for i in S))
    cell_cones = {}
    fan_ok = True
    p0 = ac.point(v)
    for c in sorted(ac.above[v] | {v}):
        poly = ac.cells[c].poly
        gens = [QF.project(ac.to_fan_space(sub(x, p0))) for x in poly.vertices]
        gens = [g for g in gens if any(g)]
        C = Cone(gens, d=QF.rank) if gens else None
        key = frozenset(C.rays) if C is not None else frozenset()
        cell_cones[c] = key
        S = ac.cells[c].cone
        gens2 = [QF.project(fan.rays[i]) for i in S if i not in tau]
        gens2 = [g for g in gens2 if any(g)]
        key2 = frozenset(Cone(gens2, d=QF.rank).rays) if gens2 else frozenset()
        if key != key2 or key not in qcones:
            fan_ok = False
    if len(set(cell_cones.values())) != len(cell_cones) or len(cell_cones) != len(qcones):
        fan_ok = False
    checks["cells biject with cones of the quotient fan"] = fan_ok
    return VertexChart(v, parts, Q, qfan, cell_cones, span_points, checks)


def _check_loop(ac: AffineComplex, v, c, v2, c2):
    for x in (v, v2):
        if ac.cells[x].dim != 0:
            raise ComplexError("loop endpoints must be vertices")
    for y in (c, c2):
        if ac.cells[y].dim != ac.dim:
            raise ComplexError("loop cells must be maximal")
        if v not in ac.below[y] and ac.dim > 0 or v2 not in ac.below[y] and ac.dim > 0:
            raise ComplexError("incidence violated: both vertices must lie in both cells")


def monodromy(ac: AffineComplex, v: int, c: int, v2: int, c2: int) -> MonodromyMatrix:
    """Transport around v -> c -> v2 -> c2 -> v as a matrix on Lambda_v.

    T(n) = n + sum_j <m'_j - m_j, n> (n'_j - n_j) with m_j, m'_j the covectors
    of c and c2 and n_j, n'_j the summands of v and v2.
    """
    _check_loop(ac, v, c, v2, c2)
    d = ac.rank
    nv, _ = ac.vertex_parts[v]
    nv2, _ = ac.vertex_parts[v2]
    ms = ac.max_covectors[c]
    ms2 = ac.max_covectors[c2]
    Q = QuotientLattice(list(nv), d)
    basis = Q.quotient_basis()
    cols = []
    for u in basis:
        img = list(u)
        for m, m2, a, a2 in zip(ms, ms2, nv, nv2):
            coef = dot(m2, u) - dot(m, u)
            if coef:
                img = [x + coef * (y2 - y1) for x, y1, y2 in zip(img, a, a2)]
        cols.append(Q.project(img))
    mat = [tuple(int(cols[j][i]) for j in range(len(cols))) for i in range(len(cols))]
    M = MonodromyMatrix(basis, mat)
    if abs(M.determinant()) != 1:
        raise ComplexError("monodromy is not invertible over the integers")
    return M


def _lift_into(ms, hs, parts, n, d):
    """The point n + sum a_j parts_j lying on the tangent space {<m_i, .> = 0}."""
    A = [[dot(m, p) for p in parts] for m in ms]
    b = [-dot(m, n) for m in ms]
    a = solve(A, b)
    if a is None:
        raise ComplexError("chart lift has no solution")
    out = list(n)
    for coef, p in zip(a, parts):
        out = [x + coef * y for x, y in zip(out, p)]
    return tuple(normalize(Fraction(x)) for x in out)


def monodromy_oracle(ac: AffineComplex, v: int, c: int, v2: int, c2: int) -> MonodromyMatrix:
    """The same transport by composing the four chart maps directly."""
    _check_loop(ac, v, c, v2, c2)
    d = ac.rank
    nv, _ = ac.vertex_parts[v]
    nv2, _ = ac.vertex_parts[v2]
    ms = ac.max_covectors[c]
    ms2 = ac.max_covectors[c2]
    Q = QuotientLattice(list(nv), d)
    Q2 = QuotientLattice(list(nv2), d)
    basis = Q.quotient_basis()
    cols = []
    for u in basis:
        x = _lift_into(ms, None, nv, u, d)  # psi_1^{-1}
        y = Q2.lift(Q2.project(x))  # psi_2, then a representative
        z = _lift_into(ms2, None, nv2, y, d)  # psi_3^{-1}
        cols.append(Q.project(z))  # psi_4
    mat = [tuple(normalize(Fraction(cols[j][i])) for j in range(len(cols))) for i in range(len(cols))]
    return MonodromyMatrix(basis, mat)


def loops(ac: AffineComplex) -> list:
    """All (v, c, v2, c2) with distinct vertices in two distinct maximal cells."""
    out = []
    mx = ac.maximal
    for i, c in enumerate(mx):
        vs = set(ac.vertices_of(c))
        for c2 in mx[i + 1:]:
            common = sorted(vs & set(ac.vertices_of(c2)))
            for a in common:
                for b in common:
                    if a != b:
                        out.append((a, c, b, c2))
    return out


# ---------------------------------------------------------------------------
# multi-valued PL functions and the Legendre check


@dataclass
class MultiPL:
    representatives: dict
    overlap_ok: bool
    lattice_ok: bool


def attach_mpl(ac: AffineComplex, np_: Optional[NefPartition] = None) -> MultiPL:
    """Local representatives of phi on the star of each cell."""
    work = ac.meta["partition"]
    reps = {}
    for c in ac.cells:
        reps[c.id] = descend_pl(work.phi, c.cone)
    overlap_ok = True
    for c in ac.cells:
        for i in ac.below[c.id]:
            diff = sub(reps[i].shift, reps[c.id].shift)
            if not is_integral(diff):
                overlap_ok = False
    lattice_ok = all(newton_polytope(r.function).has_integral_vertices() for r in reps.values())
    return MultiPL(reps, overlap_ok, lattice_ok)


def lift_newton(desc: DescendedFunction) -> set:
    """Vertices of the Newton polytope of a descended function, moved back to M."""
    NP = newton_polytope(desc.function)
    Q = desc.lattice
    dual = Q.dual_basis()
    d = Q.d
    out = set()
    for y in NP.vertices:
        m = [Fraction(0)] * d
        for yi, w in zip(y, dual):
            m = [a + yi * b for a, b in zip(m, w)]
        out.add(tuple(normalize(a - Fraction(s)) for a, s in zip(m, desc.shift)))
    return out


@dataclass
class LegendreReport:
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def _dlt_one_side(np_: NefPartition) -> LegendreReport:
    ac = build_complex(np_, "nabla")
    fails = []
    count = 0
    for v in ac.vertices:
        cell = ac.cells[v]
        desc = descend_pl(np_.phi, cell.cone)
        got = lift_newton(desc)
        want = set(ac.opposite[v].vertices)
        count += 1
        if got != want:
            fails.append((v, sorted(got), sorted(want)))
    return LegendreReport(count, fails)


def dlt_verify(np_: NefPartition) -> dict:
    """Newton polytopes of the local representatives at vertices against the dual cells."""
    return {"nabla": _dlt_one_side(np_), "delta": _dlt_one_side(np_.swapped)}


# ---------------------------------------------------------------------------
# cellular homology


def _orientation(poly: Polyhedron) -> list:
    return row_space_basis([sub(v, poly.vertices[0]) for v in poly.vertices[1:]])


def _incidence(cell: Polyhedron, face: Polyhedron, Bc, Bf) -> int:
    bc = [Fraction(x) for x in cell.barycenter()]
    bf = [Fraction(x) for x in face.barycenter()]
    out = tuple(b - a for a, b in zip(bc, bf))
    vecs = [out] + list(Bf)
    A = transpose(Bc)
    coords = []
    for x in vecs:
        s = solve(A, x)
        if s is None:
            raise ComplexError("face direction leaves the cell span")
        coords.append(s)
    D = det(coords)
    return 1 if D > 0 else -1


def boundary_matrices(ac: AffineComplex) -> dict:
    """Integer boundary matrices d_k : C_k -> C_{k-1}, keyed by k."""
    orient = {c.id: _orientation(c.poly) for c in ac.cells}
    index = {}
    for k in range(ac.dim + 1):
        index[k] = {cid: i for i, cid in enumerate(ac.cells_of_dim(k))}
    mats = {}
    for k in range(1, ac.dim + 1):
        rows = [[0] * len(index[k]) for _ in range(len(index[k - 1]))]
        for cid, j in index[k].items():
            c = ac.cells[cid]
            for f in ac.covers[cid]:
                s = _incidence(c.poly, ac.cells[f].poly, orient[cid], orient[f])
                rows[index[k - 1][f]][j] = s
        mats[k] = rows
    return mats


def cellular_homology(ac: AffineComplex) -> list:
    """Integral homology groups as (free rank, torsion coefficients) per degree."""
    mats = boundary_matrices(ac)
    sizes = [len(ac.cells_of_dim(k)) for k in range(ac.dim + 1)]
    ranks = {}
    torsion = {}
    for k, M in mats.items():
        inv = smith_invariants(M) if M and M[0] else []
        ranks[k] = len(inv)
        torsion[k] = [x for x in inv if x > 1]
    out = []
    for k in range(ac.dim + 1):
        rk_out = ranks.get(k, 0)
        rk_in = ranks.get(k + 1, 0)
        out.append((sizes[k] - rk_out - rk_in, torsion.get(k + 1, [])))
    return out


def boundary_squares_vanish(ac: AffineComplex) -> bool:
    mats = boundary_matrices(ac)
    for k in range(2, ac.dim + 1):
        A, B = mats[k - 1], mats[k]
        for i in range(len(A)):
            for j in range(len(B[0]) if B else 0):
                if sum(A[i][t] * B[t][j] for t in range(len(B))):
                    return False
    return True


__all__ = [
    "AffineComplex",
    "Cell",
    "ComplexError",
    "FaceQuartet",
    "LegendreReport",
    "MonodromyMatrix",
    "MultiPL",
    "VertexChart",
    "all_quartets",
    "attach_mpl",
    "boundary_matrices",
    "boundary_squares_vanish",
    "build_complex",
    "cellular_homology",
    "dimension_violations",
    "dlt_verify",
    "face_quartet",
    "lift_newton",
    "loops",
    "monodromy",
    "monodromy_oracle",
    "order_reversal_violations",
    "vertex_chart",
]
