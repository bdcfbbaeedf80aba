"""Barycentric subdivision, the discriminant locus and its components."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .complex_basic import AffineComplex, ComplexError, MonodromyMatrix, monodromy
from .lattice import rank


@dataclass
class BarycentricComplex:
    """Simplices are chains of cells, stored as tuples sorted by dimension."""

    ac: AffineComplex
    simplices: list
    carrier: dict

    def of_dim(self, k: int) -> list:
        return [s for s in self.simplices if len(s) == k + 1]

    @property
    def top(self) -> list:
        return self.of_dim(self.ac.dim)


def _chains(ac: AffineComplex, allowed=None):
    """All nonempty chains c_0 < c_1 < ... of cells, optionally restricted to a cell set."""
    cells = [c.id for c in ac.cells if allowed is None or c.id in allowed]
    order = sorted(cells, key=lambda i: ac.cells[i].dim)
    out = []

    def extend(chain):
        out.append(tuple(chain))
        last = chain[-1]
        for j in sorted(ac.above[last]):
            if allowed is None or j in allowed:
                chain.append(j)
                extend(chain)
                chain.pop()

    for i in order:
        extend([i])
    return out


def barycentric(ac: AffineComplex) -> BarycentricComplex:
    simplices = sorted(_chains(ac), key=lambda s: (len(s), s))
    carrier = {s: s[-1] for s in simplices}
    return BarycentricComplex(ac, simplices, carrier)


def count_maximal_chains(ac: AffineComplex) -> int:
    """Number of full flags vertex < edge < ... < maximal cell, by dynamic programming."""
    ways = {}
    for c in sorted(ac.cells, key=lambda c: c.dim):
        if c.dim == 0:
            ways[c.id] = 1
        else:
            ways[c.id] = sum(ways[i] for i in ac.covers[c.id])
    return sum(ways[i] for i in ac.maximal)


@dataclass
class LoopTransport:
    simplex: tuple
    loop: tuple
    matrix: MonodromyMatrix
    family: int | None


@dataclass
class DiscriminantLocus:
    ac: AffineComplex
    simplices: set
    transports: dict = field(default_factory=dict)
    pruned: bool = False

    @property
    def top(self) -> list:
        k = self.ac.dim - 2
        return sorted(s for s in self.simplices if len(s) == k + 1)

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)


def initial_gamma(bc: BarycentricComplex) -> DiscriminantLocus:
    """Chains avoiding the vertices and the maximal cells of the complex."""
    ac = bc.ac
    top = ac.dim
    keep = {s for s in bc.simplices if all(0 < ac.cells[c].dim < top for c in s)}
    return DiscriminantLocus(ac, keep)


def loop_of(ac: AffineComplex, s: tuple) -> tuple:
    """(v, rho, v', rho') around a full flag c_1 < ... < c_{d-1} of Gamma."""
    c1, cl = s[0], s[-1]
    if ac.cells[c1].dim != 1 or ac.cells[cl].dim != ac.dim - 1:
        raise ComplexError("loops are defined around full flags")
    ends = ac.vertices_of(c1)
    rhos = ac.maximal_containing(cl)
    if len(ends) != 2:
        raise ComplexError("edge without two endpoints")
    if len(rhos) != 2:
        raise ComplexError(f"codimension-one cell in {len(rhos)} maximal cells")
    return ends[0], rhos[0], ends[1], rhos[1]


def _family(ac: AffineComplex, v, v2):
    a, _ = ac.vertex_parts[v]
    b, _ = ac.vertex_parts[v2]
    diff = [i for i, (x, y) in enumerate(zip(a, b)) if tuple(x) != tuple(y)]
    return diff[0] if len(diff) == 1 else None


def transport(ac: AffineComplex, s: tuple) -> LoopTransport:
    loop = loop_of(ac, s)
    T = monodromy(ac, *loop)
    return LoopTransport(s, loop, T, _family(ac, loop[0], loop[2]))


def _face_closure(simplices) -> set:
    out = set()
    for s in simplices:
        n = len(s)
        for mask in range(1, 1 << n):
            out.add(tuple(s[i] for i in range(n) if mask >> i & 1))
    return out


def prune(dl: DiscriminantLocus, jobs: int = 1) -> DiscriminantLocus:
    """Drop top simplices with trivial transport and re-close under faces.

    Lower simplices survive only as faces of surviving top simplices, so one
    pass already reaches the fixpoint; running it again changes nothing.
    """
    ac = dl.ac
    tops = dl.top
    if jobs > 1 and len(tops) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(transport, [ac] * len(tops), tops, chunksize=max(1, len(tops) // (4 * jobs))))
    else:
        results = [dl.transports.get(s) or transport(ac, s) for s in tops]
    keep = {t.simplex: t for t in results if not t.matrix.is_identity()}
    simplices = _face_closure(keep) & dl.simplices
    return DiscriminantLocus(ac, simplices, keep, True)


@dataclass
class ComponentSummary:
    simplices: list
    kind: str
    families: tuple
    trace: int
    rank_t_minus_i: int
    square_zero: bool
    primitive: bool
    uniform: bool

    @property
    def size(self) -> int:
        return len(self.simplices)

    @property
    def is_primitive_transvection(self) -> bool:
        return self.rank_t_minus_i == 1 and self.square_zero and self.primitive


def _invariants(T: MonodromyMatrix) -> tuple:
    M = T.matrix
    n = len(M)
    A = [[M[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    sq = [[sum(A[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    g = 0
    for row in A:
        for x in row:
            g = gcd(g, int(x))
    return (
        sum(M[i][i] for i in range(n)),
        rank(A),
        all(x == 0 for row in sq for x in row),
        g == 1,
    )


def components(dl: DiscriminantLocus) -> list:
    """Connected components through shared faces, with monodromy summaries."""
    simplices = sorted(dl.simplices, key=lambda s: (len(s), s))
    parent = {s: s for s in simplices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for s in simplices:
        if len(s) > 1:
            for i in range(len(s)):
                f = s[:i] + s[i + 1 :]
                if f in parent:
                    union(s, f)
    groups: dict = {}
    for s in simplices:
        groups.setdefault(find(s), []).append(s)
    out = []
    top_dim = dl.ac.dim - 2
    for members in groups.values():
        members.sort(key=lambda s: (len(s), s))
        tops = [s for s in members if len(s) == top_dim + 1]
        kind = "point" if top_dim == 0 else "complex"
        if top_dim == 1:
            degree: dict = {}
            for e in tops:
                for x in e:
                    degree[(x,)] = degree.get((x,), 0) + 1
            verts = [s for s in members if len(s) == 1]
            kind = "circle" if verts and all(degree.get(v, 0) == 2 for v in verts) else "not a 1-manifold"
        invs = []
        fams = set()
        for s in tops:
            t = dl.transports.get(s) or transport(dl.ac, s)
            invs.append(_invariants(t.matrix))
            fams.add(t.family)
        base = invs[0] if invs else (None, None, None, None)
        out.append(
            ComponentSummary(
                members,
                kind,
                tuple(sorted(fams, key=lambda x: -1 if x is None else x)),
                base[0],
                base[1],
                base[2],
                base[3],
                all(x == base for x in invs),
            )
        )
    out.sort(key=lambda c: (tuple(-1 if f is None else f for f in c.families), c.simplices[0]))
    return out


def family_counts(comps: list) -> dict:
    out: dict = {}
    for c in comps:
        key = c.families[0] if len(c.families) == 1 else None
        out[key] = out.get(key, 0) + 1
    return out


__all__ = [
    "BarycentricComplex",
    "ComponentSummary",
    "DiscriminantLocus",
    "LoopTransport",
    "barycentric",
    "components",
    "count_maximal_chains",
    "family_counts",
    "initial_gamma",
    "loop_of",
    "prune",
    "transport",
]
