"""Rational polyhedral fans and piecewise linear functions on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .geometry import Cone, GeometryError, Polyhedron, convex_hull, from_inequalities
from .lattice import (
    QuotientLattice,
    dot,
    inverse,
    is_integral,
    normalize,
    primitive,
    solve,
    transpose,
)


class FanError(ValueError):
    pass


def _frac_vec(v):
    return tuple(normalize(Fraction(x)) for x in v)


class Fan:
    """A fan given by a ray table, maximal cones as ray-index sets, and a
    lineality space shared by all cones.

    ``support`` is a free-form descriptor: ``"complete"``, ``"halfspace"`` or
    ``"partial"``.
    """

    def __init__(self, d, rays, maximal_cones, lineality=(), support="partial"):
        self.d = d
        self.rays = tuple(tuple(r) for r in rays)
        self.lineality = tuple(tuple(l) for l in lineality)
        self.maximal_cones = tuple(sorted((frozenset(c) for c in maximal_cones), key=sorted))
        self.support = support

    @classmethod
    def from_cones(cls, cones: Iterable[Cone], d=None, support="partial", lineality=()):
        cones = list(cones)
        if d is None:
            d = cones[0].d
        lin = cones[0].lineality if cones else tuple(lineality)
        ray_index: dict = {}
        maxi = []
        for C in cones:
            if C.lineality != lin:
                raise FanError("cones with different lineality spaces")
            idx = set()
            for r in C.rays:
                if r not in ray_index:
                    ray_index[r] = None
                idx.add(r)
            maxi.append(idx)
        rays = sorted(ray_index)
        pos = {r: i for i, r in enumerate(rays)}
        maxi = [frozenset(pos[r] for r in s) for s in maxi]
        # drop cones that are faces of others
        maxi = [s for s in set(maxi) if not any(s < t for t in maxi)]
        return cls(d, rays, maxi, lin, support)

    def __repr__(self):
        return f"Fan(d={self.d}, rays={len(self.rays)}, maximal={len(self.maximal_cones)})"

    def cone(self, S: Iterable[int]) -> Cone:
        return Cone([self.rays[i] for i in sorted(S)], self.lineality, d=self.d)

    @cached_property
    def _cone_cache(self) -> dict:
        return {}

    def cone_obj(self, S) -> Cone:
        S = frozenset(S)
        C = self._cone_cache.get(S)
        if C is None:
            C = self._cone_cache[S] = self.cone(S)
        return C

    @cached_property
    def cones(self) -> dict:
        """All cones as ray-index sets mapped to their dimension."""
        out = {}
        for S in self.maximal_cones:
            C = self.cone_obj(S)
            idx = sorted(S)
            local = {r: idx[k] for k, r in enumerate([self.rays[i] for i in idx])}
            for f in C._P.face_lattice.all_faces():
                T = frozenset(local[r] for r in f.rays)
                out[T] = f.dim + len(self.lineality)
        return out

    def cones_of_dim(self, k: int) -> list:
        return sorted((S for S, dd in self.cones.items() if dd == k), key=sorted)

    @property
    def dim(self) -> int:
        return max(self.cones.values())

    def cones_containing(self, T) -> list:
        T = frozenset(T)
        return sorted((S for S in self.cones if T <= S), key=lambda S: (len(S), sorted(S)))

    def maximal_containing(self, T) -> list:
        T = frozenset(T)
        return [S for S in self.maximal_cones if T <= S]

    def interior_point(self, S) -> tuple:
        s = [0] * self.d
        for i in S:
            s = [a + b for a, b in zip(s, self.rays[i])]
        return tuple(s)

    @cached_property
    def _simplex_cache(self) -> dict:
        return {}

    def _coordinates(self, S, x):
        """Coefficients of x in the rays of S when S is simplicial of full dimension, else None."""
        S = frozenset(S)
        cache = self._simplex_cache
        if S not in cache:
            inv = None
            if not self.lineality and len(S) == self.d:
                try:
                    inv = inverse(transpose([self.rays[i] for i in sorted(S)]))
                except (ValueError, ZeroDivisionError):
                    inv = None
            cache[S] = inv
        inv = cache[S]
        if inv is None:
            return None
        return [sum(a * b for a, b in zip(row, x)) for row in inv]

    def contains(self, S, x) -> bool:
        """Whether the cone S contains x."""
        c = self._coordinates(S, x)
        if c is not None:
            return all(t >= 0 for t in c)
        return self.cone_obj(S).contains(x)

    def find_maximal(self, x) -> frozenset:
        """Some maximal cone containing x."""
        x = _frac_vec(x)
        for S in self.maximal_cones:
            if self.contains(S, x):
                return S
        raise FanError(f"point {x} outside the support of the fan")

    def find_cone(self, x) -> frozenset:
        """The smallest cone containing the point x."""
        x = _frac_vec(x)
        best = self.find_maximal(x)
        c = self._coordinates(best, x)
        if c is not None:
            idx = sorted(best)
            return frozenset(i for i, t in zip(idx, c) if t != 0)
        cand = [S for S in self.cones if S <= best]
        cand.sort(key=len)
        for S in cand:
            if self.cone_obj(S).contains(x):
                return S
        return best

    def walls(self) -> list:
        """Codimension-one cones with the maximal cones adjacent to them."""
        top = max(self.cones[S] for S in self.maximal_cones)
        out = []
        for W in self.cones_of_dim(top - 1):
            adj = self.maximal_containing(W)
            out.append((W, adj))
        return out

    def is_complete(self) -> bool:
        """Every interior wall has exactly two neighbours and no wall is a boundary."""
        if len(self.lineality) == self.d:
            return True
        full = all(self.cones[S] == self.d for S in self.maximal_cones)
        return full and all(len(adj) == 2 for _, adj in self.walls())

    def boundary_walls(self) -> list:
        return [W for W, adj in self.walls() if len(adj) == 1]

    def refines(self, other: "Fan") -> bool:
        """Every maximal cone lies in some cone of ``other``."""
        for S in self.maximal_cones:
            p = self.interior_point(S)
            rays = [_frac_vec(self.rays[i]) for i in S]
            if not any(other.contains(T, p) and all(other.contains(T, r) for r in rays) for T in other.maximal_cones):
                return False
        return True

    def check_axioms(self) -> list:
        """Pairs of maximal cones whose intersection is not their common face."""
        if self.lineality:
            raise FanError("axiom check is implemented for pointed fans")
        bad = []
        ms = self.maximal_cones
        for i in range(len(ms)):
            for j in range(i + 1, len(ms)):
                A, B = ms[i], ms[j]
                CA, CB = self.cone_obj(A), self.cone_obj(B)
                ineqs = [(a, 0) for a in CA.facet_normals + CB.facet_normals]
                eqs = [(a, 0) for a in CA.span_equations + CB.span_equations]
                P = from_inequalities(self.d, ineqs, eqs)
                expect = self.cone_obj(A & B)
                if set(P.rays) != set(expect.rays):
                    bad.append((A, B))
        return bad


# ---------------------------------------------------------------------------
# piecewise linear functions


class PLFunction:
    """A continuous function on the support of a fan, linear on each cone.

    Stored as one covector per maximal cone.
    """

    def __init__(self, fan: Fan, covectors: Mapping):
        self.fan = fan
        self.covectors = {frozenset(S): _frac_vec(m) for S, m in covectors.items()}
        for S in fan.maximal_cones:
            if S not in self.covectors:
                raise FanError("missing covector for a maximal cone")

    @classmethod
    def from_ray_values(cls, fan: Fan, values: Mapping | Sequence, lineality_values=None):
        """Build from values on the rays (and on the lineality basis)."""
        if not isinstance(values, Mapping):
            values = dict(enumerate(values))
        lv = list(lineality_values or [0] * len(fan.lineality))
        covs = {}
        for S in fan.maximal_cones:
            idx = sorted(S)
            A = [fan.rays[i] for i in idx] + list(fan.lineality)
            b = [Fraction(values[i]) for i in idx] + [Fraction(x) for x in lv]
            if not A:
                covs[S] = (0,) * fan.d
                continue
            m = solve(A, b)
            if m is None:
                raise FanError(f"ray values are not linear on cone {sorted(S)}")
            covs[S] = m
        return cls(fan, covs)

    def __repr__(self):
        return f"PLFunction({self.fan!r})"

    def covector(self, S) -> tuple:
        S = frozenset(S)
        if S in self.covectors:
            return self.covectors[S]
        for T in self.fan.maximal_cones:
            if S <= T:
                return self.covectors[T]
        raise FanError("cone not in fan")

    def __call__(self, x):
        x = _frac_vec(x)
        S = self.fan.find_maximal(x)
        return normalize(Fraction(dot(self.covectors[S], x)))

    def ray_value(self, i: int):
        return normalize(Fraction(dot(self.covector(frozenset([i])), self.fan.rays[i])))

    @property
    def ray_values(self) -> list:
        return [self.ray_value(i) for i in range(len(self.fan.rays))]

    def is_continuous(self) -> bool:
        for S in self.fan.maximal_cones:
            m = self.covectors[S]
            for T in self.fan.maximal_cones:
                if T == S:
                    continue
                m2 = self.covectors[T]
                for i in S & T:
                    if dot(m, self.fan.rays[i]) != dot(m2, self.fan.rays[i]):
                        return False
                for l in self.fan.lineality:
                    if dot(m, l) != dot(m2, l):
                        return False
        return True

    def is_integral(self) -> bool:
        return all(is_integral(m) for m in self.covectors.values()) and all(
            Fraction(v).denominator == 1 for v in self.ray_values
        )

    def wall_defects(self) -> list:
        """Per interior wall: (wall, A, B, margin) where margin >= 0 means convex.

        The margin is g(r) - m_A(r) for a ray r of B off the wall, i.e. how far
        the function bends up across the wall.
        """
        out = []
        for W, adj in self.fan.walls():
            if len(adj) != 2:
                continue
            A, B = adj
            mA, mB = self.covectors[A], self.covectors[B]
            r = next(i for i in B if i not in W)
            x = self.fan.rays[r]
            margin = normalize(Fraction(dot(mB, x) - dot(mA, x)))
            out.append((W, A, B, margin))
        return out

    def is_convex(self) -> bool:
        return all(m >= 0 for *_, m in self.wall_defects())

    def is_strictly_convex(self) -> bool:
        return all(m > 0 for *_, m in self.wall_defects())

    def first_nonconvex_wall(self):
        for W, A, B, m in self.wall_defects():
            if m < 0:
                return W
        return None

    # -- arithmetic on a common fan ------------------------------------------

    def on_fan(self, fan: Fan) -> "PLFunction":
        """Re-express on a fan whose cones are each contained in a cone of ours."""
        covs = {}
        for S in fan.maximal_cones:
            T = self.fan.find_maximal(fan.interior_point(S))
            m = self.covectors[T]
            for i in S:
                if dot(m, fan.rays[i]) != self(fan.rays[i]):
                    raise FanError("target fan does not refine the domains of linearity")
            covs[S] = m
        return PLFunction(fan, covs)

    def _combine(self, other: "PLFunction", f) -> "PLFunction":
        if other.fan is not self.fan:
            other = other.on_fan(self.fan)
        return PLFunction(
            self.fan,
            {S: tuple(f(a, b) for a, b in zip(self.covectors[S], other.covectors[S])) for S in self.fan.maximal_cones},
        )

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def scale(self, c) -> "PLFunction":
        return PLFunction(self.fan, {S: tuple(c * x for x in m) for S, m in self.covectors.items()})

    def add_linear(self, m) -> "PLFunction":
        return PLFunction(self.fan, {S: tuple(a + b for a, b in zip(v, m)) for S, v in self.covectors.items()})

    def equals(self, other: "PLFunction") -> bool:
        if other.fan is not self.fan:
            try:
                other = other.on_fan(self.fan)
            except (FanError, GeometryError):
                return False
        return all(self.covectors[S] == other.covectors[S] for S in self.fan.maximal_cones)

    def is_linear(self) -> bool:
        return len(set(self.covectors.values())) <= 1


# ---------------------------------------------------------------------------
# constructions


def normal_fan(P: Polyhedron) -> Fan:
    """Inner normal fan: maximal cones are the normal cones of the vertices."""
    cones = []
    lin = [a for a, _ in P.equations]
    for i, v in enumerate(P.vertices):
        gens = [a for a, c in P.inequalities if dot(a, v) + c == 0]
        cones.append(Cone(gens, lin, d=P.d))
    support = "complete" if not P.rays else "partial"
    F = Fan.from_cones(cones, d=P.d, support=support, lineality=[] if not lin else cones[0].lineality)
    return F


def normal_fan_with_faces(P: Polyhedron):
    """Normal fan together with the order-reversing map cone -> face of P."""
    F = normal_fan(P)
    face_of = {}
    for S in F.cones:
        u = F.interior_point(S)
        face_of[S] = P.face_minimizing(u)
    return F, face_of


def support_function(P: Polyhedron, fan: Fan) -> PLFunction:
    """g(n) = -min_{x in P} <x, n>, requiring the fan to refine the normal fan."""
    covs = {}
    ray_min = {}
    for S in fan.maximal_cones:
        u = fan.interior_point(S)
        if P.min_value(u) is None:
            raise FanError("fan leaves the domain of the support function")
        F = P.face_minimizing(u) if any(u) else None
        v = F.vertices[0] if F is not None else P.vertices[0]
        for i in S:
            r = fan.rays[i]
            if i not in ray_min:
                ray_min[i] = P.min_value(r)
            mv = ray_min[i]
            if mv is None or dot(v, r) != mv:
                raise FanError("fan does not refine the normal fan of the polytope")
        for l in fan.lineality:
            if P.min_value(l) != dot(v, l) or P.min_value(tuple(-x for x in l)) != -dot(v, l):
                raise FanError("support function is not linear on the lineality space")
        covs[S] = tuple(-x for x in v)
    return PLFunction(fan, covs)


def newton_polytope(g: PLFunction) -> Polyhedron:
    """{m : <m, n> >= -g(n) for all n}."""
    if not g.is_convex():
        raise FanError("Newton polytope of a non-convex function")
    F = g.fan
    ineqs = [(r, g.ray_value(i)) for i, r in enumerate(F.rays)]
    any_cov = next(iter(g.covectors.values()))
    eqs = [(l, dot(any_cov, l)) for l in F.lineality]
    if not F.rays and not F.lineality:
        return convex_hull([tuple(-x for x in any_cov)])
    P = from_inequalities(F.d, ineqs, eqs)
    if P is None:
        raise FanError("empty Newton polytope")
    return P


def linearity_fan(g: PLFunction) -> Fan:
    """Coarsest fan on whose cones g is linear (g convex, fan complete)."""
    return normal_fan(newton_polytope(g))


def quotient_fan(F: Fan, tau) -> tuple:
    """The fan of images of the cones containing tau in N / span(tau).

    Returns ``(fan, quotient_lattice)``.
    """
    tau = frozenset(tau)
    if tau not in F.cones:
        raise FanError("cone not in fan")
    Q = QuotientLattice([F.rays[i] for i in tau] + list(F.lineality), F.d)
    cones = []
    for S in F.maximal_containing(tau):
        gens = [Q.project(F.rays[i]) for i in S if i not in tau]
        gens = [g for g in gens if any(g)]
        if Q.rank == 0:
            continue
        cones.append(Cone(gens, d=Q.rank))
    if Q.rank == 0:
        return Fan(0, [], [frozenset()], (), "complete"), Q
    support = "complete" if F.support == "complete" else "partial"
    if not any(c.rays for c in cones):
        return Fan(Q.rank, [], [frozenset()], (), support), Q
    return Fan.from_cones(cones, d=Q.rank, support=support), Q


@dataclass
class DescendedFunction:
    function: PLFunction
    shift: tuple
    lattice: QuotientLattice


def descend_pl(g: PLFunction, tau) -> DescendedFunction:
    """Subtract a linear function agreeing with g on tau and pass to N/span(tau).

    The shift m is pinned down by requiring it to vanish on the complementary
    basis vectors of the unimodular completion of span(tau); see the
    ``QuotientLattice`` conventions.
    """
    tau = frozenset(tau)
    F = g.fan
    if tau not in F.cones:
        raise FanError("cone not in fan")
    covs = {g.covector(S) for S in F.maximal_containing(tau)}
    Qf, Q = quotient_fan(F, tau)
    sub_basis = Q.sub_basis()
    m0 = next(iter(covs))
    for m in covs:
        for u in sub_basis:
            if dot(m, u) != dot(m0, u):
                raise FanError("function is not linear on the cone")
    # m(x) = sum_{i<k} (W x)_i g(u_i)
    W = Q.W
    vals = [Fraction(dot(m0, u)) for u in sub_basis]
    shift = [Fraction(0)] * F.d
    for i, val in enumerate(vals):
        shift = [s + val * w for s, w in zip(shift, W[i])]
    shift = _frac_vec(shift)
    qb = Q.quotient_basis()
    qcovs = {}
    if Q.rank == 0:
        return DescendedFunction(PLFunction(Qf, {frozenset(): ()}), shift, Q)
    for S in F.maximal_containing(tau):
        m = g.covector(S)
        diff = tuple(a - b for a, b in zip(m, shift))
        cbar = tuple(normalize(Fraction(dot(diff, u))) for u in qb)
        gens = [Q.project(F.rays[i]) for i in S if i not in tau]
        C = Cone([x for x in gens if any(x)], d=Q.rank) if any(any(x) for x in gens) else None
        key = None
        for T in Qf.maximal_cones:
            if C is None or set(Qf.rays[i] for i in T) == set(C.rays):
                key = T
                break
        qcovs[key] = cbar
    return DescendedFunction(PLFunction(Qf, qcovs), shift, Q)


@dataclass
class SubdivisionCertificate:
    coarse: Fan
    fine: Fan
    containment: dict = field(default_factory=dict)
    unused: list = field(default_factory=list)


def regular_subdivision(rho: Cone, boundary_heights: Mapping, interior_points: Sequence = ()) -> tuple:
    """Coherent subdivision of a cone from heights on generators.

    ``boundary_heights`` maps generators of rho to heights; ``interior_points``
    is a list of ``(generator, height)`` pairs.  The function is the lower
    envelope of the cone over the lifted generators.
    """
    gens = [(tuple(g), Fraction(h)) for g, h in boundary_heights.items()]
    gens += [(tuple(p), Fraction(h)) for p, h in interior_points]
    d = rho.d
    lifted = [g + (h,) for g, h in gens]
    vert = tuple([0] * d + [1])
    L = convex_hull([(0,) * (d + 1)], [primitive(x) for x in lifted] + [vert])
    used_dirs = set(L.rays)
    cones, covs = [], []
    for a, c in L.inequalities:
        if a[-1] <= 0:
            continue
        on = [g for g, h in gens if dot(a[:-1], g) + a[-1] * h == 0]
        C = Cone(on, rho.lineality, d=d)
        if C.dim != rho.dim:
            continue
        cones.append(C)
        covs.append(tuple(normalize(-Fraction(x) / a[-1]) for x in a[:-1]))
    fine = Fan.from_cones(cones, d=d, support="partial")
    cov_map = {}
    for C, m in zip(cones, covs):
        S = frozenset(fine.rays.index(r) for r in C.rays)
        cov_map[S] = m
    func = PLFunction(fine, cov_map)
    unused = [g for g, h in gens if primitive(g + (h,)) not in used_dirs]
    coarse = Fan.from_cones([rho], d=d)
    cert = SubdivisionCertificate(coarse, fine, {S: next(iter(coarse.maximal_cones)) for S in fine.maximal_cones}, unused)
    return cert, func
