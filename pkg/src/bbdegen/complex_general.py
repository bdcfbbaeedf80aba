"""Degenerations with general heights: lifted polytopes, good subdivisions,
the general cell complex, simplicity, dual good data and the Legendre check.

Lifted objects live in N + Z (fans) and M + Z (polytopes); the last
coordinate is the level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor

from .complex_basic import AffineComplex, Cell, ComplexError, lift_newton, monodromy
from .fans import Fan, FanError, PLFunction, descend_pl, newton_polytope, normal_fan, regular_subdivision, support_function
from .geometry import (
    Cone,
    GeometryError,
    LatticeSpace,
    Polyhedron,
    cayley_polytope,
    convex_hull,
    from_inequalities,
    is_elementary_simplex,
)
from .lattice import common_denominator, dot, is_integral, lcm, normalize, vector_gcd
from .nef import NefPartition, support_value


class HeightError(ValueError):
    pass


def _frac(v):
    return tuple(normalize(Fraction(x)) for x in v)


def _vadd(a, b):
    return tuple(normalize(Fraction(x) + y) for x, y in zip(a, b))


def _vsum(vs, d):
    out = (0,) * d
    for v in vs:
        out = _vadd(out, v)
    return out


# ---------------------------------------------------------------------------
# heights


def heights_from_values(d: int, values: dict, space: LatticeSpace | None = None) -> PLFunction:
    """The convex PL function with the given values on the given primitive vectors.

    The function is the support function of {x : <p, x> >= -value(p)} on its
    normal fan.  A HeightError lists the points whose value is not attained,
    i.e. the points that fail to span a ray of the induced fan.
    """
    ineqs = [(p, Fraction(v)) for p, v in values.items()]
    P = from_inequalities(d, ineqs, space=space.dual() if space is not None else None)
    if P is None or P.rays:
        raise HeightError("heights do not bound a polytope")
    fan = normal_fan(P)
    g = support_function(P, fan)
    missed = [p for p, v in values.items() if support_value(P, p) != v]
    if missed:
        raise HeightError(f"{len(missed)} heights are not attained, e.g. at {missed[0]}")
    return g


def anticanonical_heights(np_: NefPartition) -> tuple:
    return np_.phi, np_.check_phi


def boundary_lattice_points(P: Polyhedron) -> list:
    return [p for p in P.lattice_points() if not P.interior_contains(p)]


def quadratic_heights(P: Polyhedron, scale: int = 1) -> dict:
    """Heights 1 + scale * q(p) on the boundary lattice points of a reflexive P.

    q(p) = |p|^2 + (sum p)^2 restricts to every facet as a hexagonal form in
    suitable coordinates; this is a heuristic starting point for MPCP data and
    the result still has to be checked with ``mpcp_report``.
    """
    out = {}
    for p in boundary_lattice_points(P):
        q = sum(x * x for x in p) + sum(p) ** 2
        out[tuple(p)] = 1 + scale * q
    return out


def mpcp_report(g: PLFunction, P: Polyhedron) -> dict:
    """Whether the fan of g cuts the boundary of the reflexive P into elementary simplices.

    Also lists boundary lattice points off the relative interiors of facets
    that are not rays of the fan.
    """
    fan = g.fan
    bad = []
    for S in fan.maximal_cones:
        pts = [fan.rays[i] for i in S]
        ok = len(pts) == fan.d and all(P.contains(p) and not P.interior_contains(p) for p in pts)
        if ok:
            Q = convex_hull(pts)
            ok = is_elementary_simplex(Q)
        if not ok:
            bad.append(S)
    used = set(fan.rays)
    missing = [p for p in boundary_lattice_points(P) if p not in used and not _interior_of_facet(P, p)]
    return {"elementary": not bad, "bad_cones": bad, "unused_points": missing, "ok": not bad and not missing}


def _interior_of_facet(P: Polyhedron, p) -> bool:
    tight = [1 for a, c in P.inequalities if dot(a, p) + c == 0]
    return len(tight) == 1


@dataclass
class HeightData:
    np: NefPartition
    h: PLFunction
    check_h: PLFunction
    h_prime: PLFunction
    check_h_prime: PLFunction
    delta_h: Polyhedron
    delta_hp: Polyhedron
    nabla_h: Polyhedron
    nabla_hp: Polyhedron

    @cached_property
    def lin_fan_hp(self) -> Fan:
        return normal_fan(self.delta_hp)

    @cached_property
    def lin_fan_chp(self) -> Fan:
        return normal_fan(self.nabla_hp)

    def is_trivial_dual(self) -> bool:
        return self.nabla_hp.vertices == ((0,) * self.np.n,)

    def is_trivial(self) -> bool:
        return self.delta_hp.vertices == ((0,) * self.np.n,)

    def swapped(self) -> "HeightData":
        return build_height_data(self.np.swapped, self.check_h, self.h)


def _check_height(g: PLFunction, base: Fan, base_phi: PLFunction, name: str):
    if not g.fan.refines(base):
        raise HeightError(f"{name}: fan does not refine the anticanonical fan")
    if not g.is_integral():
        raise HeightError(f"{name}: not integral")
    if not g.is_strictly_convex():
        W = next((W for W, _, _, m in g.wall_defects() if m <= 0), None)
        raise HeightError(f"{name}: not strictly convex at wall {sorted(W) if W else W}")
    gp = g - base_phi.on_fan(g.fan)
    if not gp.is_convex():
        W = gp.first_nonconvex_wall()
        rays = [g.fan.rays[i] for i in sorted(W)]
        raise HeightError(f"{name}': not convex at the wall spanned by {rays}")
    return gp


def build_height_data(np_: NefPartition, h: PLFunction, check_h: PLFunction) -> HeightData:
    hp = _check_height(h, np_.sigma, np_.phi, "h")
    chp = _check_height(check_h, np_.check_sigma, np_.check_phi, "check-h")
    return HeightData(
        np=np_,
        h=h,
        check_h=check_h,
        h_prime=hp,
        check_h_prime=chp,
        delta_h=newton_polytope(h),
        delta_hp=newton_polytope(hp),
        nabla_h=newton_polytope(check_h),
        nabla_hp=newton_polytope(chp),
    )


def anticanonical_height_data(np_: NefPartition) -> HeightData:
    return build_height_data(np_, np_.phi, np_.check_phi)


# ---------------------------------------------------------------------------
# lifted data


def _up(d):
    return (0,) * d + (1,)


@dataclass
class LiftedData:
    hd: HeightData
    parts: list
    total: Polyhedron
    fan: Fan
    phi_parts: list
    phi: PLFunction
    checks: dict = field(default_factory=dict)

    @property
    def np(self) -> NefPartition:
        return self.hd.np

    @property
    def n(self) -> int:
        return self.hd.np.n

    def phi_i(self, i: int, x):
        return support_value(self.parts[i], x)

    def with_heights(self, hd: HeightData) -> "LiftedData":
        if hd.check_h is not self.hd.check_h:
            raise HeightError("lifted data depends on check-h, which differs")
        return LiftedData(hd, self.parts, self.total, self.fan, self.phi_parts, self.phi, self.checks)


def _graph_points(P: Polyhedron, g: PLFunction) -> list:
    return [tuple(p) + (g(p),) for p in P.lattice_points()]


def build_lifted(hd: HeightData, check: bool = True) -> LiftedData:
    np_ = hd.np
    n = np_.n
    up = _up(n)
    chp = hd.check_h_prime
    parts = []
    for Di in np_.parts:
        parts.append(convex_hull(_graph_points(Di, chp), [up]))
    total = convex_hull(
        sorted({_vsum(vs, n + 1) for vs in _product([P.vertices for P in parts])}), [up]
    )
    checks = {}
    if check:
        # the epigraph of check-h' over Delta
        ineqs = [(tuple(a) + (0,), c) for a, c in np_.delta.inequalities]
        for cov in set(chp.covectors.values()):
            ineqs.append((tuple(-x for x in cov) + (1,), 0))
        epi = from_inequalities(n + 1, ineqs)
        checks["lifted sum is the epigraph"] = (
            epi is not None and set(epi.vertices) == set(total.vertices) and set(epi.rays) == set(total.rays)
        )
    fan = normal_fan(total)
    fan.support = "halfspace"
    phi_parts = [support_function(P, fan) for P in parts]
    phi = support_function(total, fan)
    if check:
        lvl_ok = True
        for r in fan.rays:
            if r[-1] < 0 or (r[-1] > 0 and r[-1] != 1):
                lvl_ok = False
        checks["rays at levels 0 and 1"] = lvl_ok
        checks["phi = 1 on level-0 rays"] = all(phi.ray_value(i) == 1 for i, r in enumerate(fan.rays) if r[-1] == 0)
        checks["phi = 0 on level-1 rays"] = all(
            phi.ray_value(i) == 0 and hd.nabla_hp.contains(r[:-1]) for i, r in enumerate(fan.rays) if r[-1] == 1
        )
        checks["phi = sum of phi_i"] = phi.equals(_sum_pl(phi_parts))
        checks["level-0 slice is the anticanonical fan"] = _slice_cones(fan) == _cone_sets(np_.sigma)
        failed = [k for k, v in checks.items() if not v]
        if failed:
            raise HeightError("lifted data check failed: " + ", ".join(failed))
    return LiftedData(hd, parts, total, fan, phi_parts, phi, checks)


def _product(lists):
    out = [()]
    for L in lists:
        out = [p + (x,) for p in out for x in L]
    return out


def _sum_pl(fs):
    out = fs[0]
    for f in fs[1:]:
        out = out + f
    return out


def _cone_sets(fan: Fan) -> set:
    return {frozenset(fan.rays[i] for i in S) for S in fan.cones if S}


def _slice_cones(fan: Fan) -> set:
    out = set()
    for S in fan.cones:
        if S and all(fan.rays[i][-1] == 0 for i in S):
            out.add(frozenset(fan.rays[i][:-1] for i in S))
    return out


# ---------------------------------------------------------------------------
# good data


@dataclass
class ConeInfo:
    kind: str
    level0: tuple
    level1: tuple
    relevant: bool = False
    beta: tuple = ()


class GoodData:
    """A refinement of the lifted fan with a PL function on it."""

    def __init__(self, ld: LiftedData, fan: Fan, h_tilde: PLFunction):
        self.ld = ld
        self.fan = fan
        self.h_tilde = h_tilde

    @property
    def np(self) -> NefPartition:
        return self.ld.np

    @cached_property
    def phi_tilde(self) -> PLFunction:
        return self.ld.phi.on_fan(self.fan)

    @cached_property
    def h_tilde_prime(self) -> PLFunction:
        return self.h_tilde - self.phi_tilde

    @cached_property
    def classification(self) -> dict:
        return classify_cones(self)

    @cached_property
    def relevant(self) -> list:
        return sorted((S for S, c in self.classification.items() if c.relevant), key=lambda S: (len(S), sorted(S)))

    def h_prime_at_level_one(self, x):
        return self.h_tilde_prime(tuple(x) + (1,))


def _lift_cone(S_rays, d):
    return Cone(list(S_rays), d=d)


def trivial_good_data(ld: LiftedData) -> GoodData:
    """Level-0 copy of Sigma' joined with the ray (0, 1); needs nabla^{check h'} = {0}."""
    hd = ld.hd
    if not hd.is_trivial_dual():
        raise HeightError("trivial good data needs check-h' = 0")
    n = ld.n
    up = _up(n)
    base = hd.h.fan
    rays = [tuple(r) + (0,) for r in base.rays] + [up]
    k = len(base.rays)
    maxi = [frozenset(S) | {k} for S in base.maximal_cones]
    fan = Fan(n + 1, rays, maxi, (), "halfspace")
    covs = {}
    for S in base.maximal_cones:
        covs[frozenset(S) | {k}] = tuple(hd.h.covector(S)) + (0,)
    return GoodData(ld, fan, PLFunction(fan, covs))


def lifted_good_data(ld: LiftedData) -> GoodData:
    """The lifted fan itself with phi-tilde; good when h = phi on Sigma' = Sigma."""
    return GoodData(ld, ld.fan, ld.phi)


@dataclass
class GoodReport:
    ok: bool
    diagnostics: list


def is_good(ld: LiftedData, gd: GoodData) -> GoodReport:
    diag = []
    fan = gd.fan
    hd = ld.hd
    if not fan.refines(ld.fan):
        diag.append("fan does not refine the lifted fan")
    for r in fan.rays:
        if r[-1] < 0:
            diag.append(f"ray {r} below level 0")
        elif r[-1] > 1:
            diag.append(f"new ray not at level 1: {r}")
        elif r[-1] == 1 and not hd.nabla_hp.contains(r[:-1]):
            diag.append(f"new ray {r} not over the dual Newton polytope")
    if _slice_cones(fan) != _cone_sets(hd.h.fan):
        diag.append("level-0 slice differs from Sigma'")
    for i, r in enumerate(fan.rays):
        if r[-1] == 0 and gd.h_tilde.ray_value(i) != hd.h(r[:-1]):
            diag.append(f"h-tilde differs from h on level-0 ray {r}")
    if not gd.h_tilde.is_integral():
        diag.append("h-tilde not integral")
    defects = gd.h_tilde.wall_defects()
    bad = [W for W, _, _, m in defects if m <= 0]
    if bad:
        diag.append(f"h-tilde not strictly convex at {len(bad)} walls")
    try:
        hp = gd.h_tilde_prime
        if not hp.is_convex():
            diag.append("h-tilde' not convex")
    except (FanError, GeometryError) as e:
        diag.append(f"phi-tilde not linear on the cones: {e}")
    for W, adj in fan.walls():
        if len(adj) == 1 and any(fan.rays[i][-1] != 0 for i in W):
            diag.append("support is not the upper halfspace")
            break
    return GoodReport(not diag, diag)


def standard_good_data(np_: NefPartition, check_h: PLFunction, side: str = "delta") -> GoodData:
    """Good data for h = phi and the given check-h.

    On the delta side the roles swap and the data is trivial; on the nabla
    side it is the lifted fan with phi-tilde.
    """
    if side == "delta":
        sw = np_.swapped
        hd = build_height_data(sw, check_h, sw.check_phi)
        return trivial_good_data(build_lifted(hd))
    if side == "nabla":
        hd = build_height_data(np_, np_.phi, check_h)
        return lifted_good_data(build_lifted(hd))
    raise ValueError(f"unknown side {side!r}")


# ---------------------------------------------------------------------------
# cone types and cells


def classify_cones(gd: GoodData) -> dict:
    """Each cone tagged I (level 0), II (mixed) or III (level 1) with relevance."""
    fan = gd.fan
    np_ = gd.np
    out = {}
    for S in fan.cones:
        if not S:
            continue
        a, b = [], []
        for i in sorted(S):
            r = fan.rays[i]
            if r[-1] == 0:
                x = r[:-1]
                a.append(_frac(Fraction(c) / np_.phi_value(x) for c in x))
            else:
                b.append(_frac(Fraction(c) / r[-1] for c in r[:-1]))
        if not b:
            info = ConeInfo("I", tuple(a), ())
        elif not a:
            info = ConeInfo("III", (), tuple(b))
        else:
            beta = []
            for i in range(np_.r):
                beta.append(tuple(p for p in a if np_.phi_i(i, p) == 1))
            info = ConeInfo("II", tuple(a), tuple(b), all(beta), tuple(beta))
        out[S] = info
    return out


def cell_of(gd: GoodData, S) -> Polyhedron:
    info = gd.classification.get(frozenset(S))
    if info is None or not info.relevant:
        raise ComplexError("cone is not relevant")
    pts = {_vsum(c, gd.np.n) for c in _product(list(info.beta) + [info.level1])}
    return convex_hull(sorted(pts))


def build_complex_general(gd: GoodData, side: str = "nabla") -> AffineComplex:
    np_ = gd.np
    n, r = np_.n, np_.r
    hd = gd.ld.hd
    cells = []
    for S in gd.relevant:
        poly = cell_of(gd, S)
        dim_expect = gd.fan.cones[S] - r - 1
        if poly.dim != dim_expect:
            raise ComplexError(f"cell dimension {poly.dim} != {dim_expect}")
        info = gd.classification[S]
        pieces = tuple(convex_hull(b) for b in info.beta) + (convex_hull(info.level1),)
        cells.append(Cell(len(cells), poly.dim, poly, S, pieces, label=info))
    vertex_parts = {}
    max_covectors = {}
    max_heights = {}
    top = n - r
    for c in cells:
        info = c.label
        if c.dim == 0:
            vertex_parts[c.id] = (tuple(b[0] for b in info.beta), info.level1[0])
        if c.dim == top:
            ms, hs = [], []
            for i in range(r):
                cov = _phi_i_covector(gd, i, c.cone)
                m = tuple(-x for x in cov[:-1])
                l = -cov[-1]
                if l != hd.check_h_prime(m):
                    raise ComplexError("lifted vertex is not on the lower boundary")
                val = hd.check_h(m)
                if val != 1 + l:
                    raise ComplexError("covector is not on the boundary of nabla^*")
                ms.append(m)
                hs.append(val)
            max_covectors[c.id] = tuple(ms)
            max_heights[c.id] = tuple(hs)
    ac = AffineComplex(
        side=side,
        rank=n,
        r=r,
        cells=cells,
        fan=gd.fan,
        level=True,
        vertex_parts=vertex_parts,
        max_covectors=max_covectors,
        max_heights=max_heights,
        meta={"partition": np_, "good": gd},
    )
    boundary = hd.nabla_h
    for c in cells:
        for x in c.poly.vertices:
            if not boundary.contains(x) or boundary.interior_contains(x):
                raise ComplexError("cell leaves the boundary of nabla^{check h}")
    return ac


def _phi_i_covector(gd: GoodData, i: int, S) -> tuple:
    """Covector of phi-tilde_i on the cone S of the fine fan."""
    u = gd.fan.interior_point(S)
    P = gd.ld.parts[i]
    F = P.face_minimizing(u)
    if len(F.vertices) != 1:
        # S is maximal, so a single vertex attains the minimum
        raise ComplexError("phi-tilde_i has no unique covector on the cone")
    return tuple(-x for x in F.vertices[0])


def monodromy_general(ac: AffineComplex, v, c, v2, c2):
    return monodromy(ac, v, c, v2, c2)


# ---------------------------------------------------------------------------
# simplicity


@dataclass
class CellSimplicity:
    cell: int
    edges: dict
    omega: dict
    deltas: list
    dual_pieces: list
    primal_ok: bool
    dual_ok: bool
    problems: list


@dataclass
class SimplicityReport:
    verdict: str
    cells: list
    mpcp: dict
    label: str = "proof-level characterization"

    @property
    def simple(self) -> bool:
        return self.verdict == "simple"


def _elementary(polys) -> bool:
    try:
        return is_elementary_simplex(cayley_polytope(polys))
    except GeometryError:
        return False


def simplicity_check(gd: GoodData, ac: AffineComplex | None = None) -> SimplicityReport:
    if ac is None:
        ac = build_complex_general(gd)
    np_ = gd.np
    n, r = np_.n, np_.r
    info_of = gd.classification
    out = []
    verdict = True
    for c in ac.cells:
        if not (1 <= c.dim <= n - r - 1):
            continue
        problems = []
        edges = {}
        omega = {i: [] for i in range(r)}
        for e in sorted(ac.below[c.id] | {c.id}):
            if ac.cells[e].dim != 1:
                continue
            info = info_of[ac.cells[e].cone]
            k = len(info.level0)
            if k == r:
                edges[e] = None
            elif k == r + 1:
                p = next(i for i, b in enumerate(info.beta) if len(b) == 2)
                edges[e] = p
                omega[p].append(e)
                a, b = info.beta[p]
                diff = tuple(Fraction(x) - y for x, y in zip(b, a))
                if not is_integral(diff) or vector_gcd(int(x) for x in diff) != 1:
                    problems.append(f"edge {e}: n'_p - n_p not primitive")
            else:
                edges[e] = "bad"
                problems.append(f"edge {e}: level-0 part has {k} generators")
        deltas = []
        for i in range(r):
            pts = {ac.max_covectors[m][i] for m in ac.maximal_containing(c.id)}
            deltas.append(convex_hull(sorted(pts)))
        primal_ok = all(P.has_integral_vertices() for P in deltas) and _elementary(deltas)
        info = info_of[c.cone]
        dual_pieces = [convex_hull(b) for b in info.beta]
        dual_ok = all(P.has_integral_vertices() for P in dual_pieces) and _elementary(dual_pieces)
        ok = primal_ok and dual_ok and not problems
        verdict = verdict and ok
        out.append(CellSimplicity(c.id, edges, omega, deltas, dual_pieces, primal_ok, dual_ok, problems))
    hd = gd.ld.hd
    mp = {
        "h": mpcp_report(hd.h, np_.delta_star),
        "check_h": mpcp_report(hd.check_h, np_.nabla_star),
    }
    return SimplicityReport("simple" if verdict else "not simple", out, mp)


# ---------------------------------------------------------------------------
# dual good data, involution, alpha, Legendre


def _epigraph_from_rays(gd: GoodData) -> Polyhedron:
    """Conv{(n, h-tilde'(n, 1))} over level-1 rays, plus the upward ray."""
    n = gd.ld.n
    hp = gd.h_tilde_prime
    pts = []
    for i, r in enumerate(gd.fan.rays):
        if r[-1] == 1:
            pts.append(tuple(r[:-1]) + (hp.ray_value(i),))
    if not pts:
        pts = [(0,) * (n + 1)]
    return convex_hull(pts, [_up(n)])


@dataclass
class DualGoodData:
    source: GoodData
    nabla_tilde: Polyhedron
    nabla_tilde_prime: Polyhedron
    total: Polyhedron
    dual: GoodData
    delta_tilde_prime: Polyhedron
    checks: dict


def _minkowski(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    pts = sorted({_vadd(p, q) for p in P.vertices for q in Q.vertices})
    return convex_hull(pts, list(P.rays) + list(Q.rays))


def dual_good_data(gd: GoodData, ld_dual: LiftedData | None = None) -> DualGoodData:
    ld = gd.ld
    hd = ld.hd
    n = ld.n
    if ld_dual is None:
        ld_dual = build_lifted(hd.swapped())
    nabla_tilde = ld_dual.total
    ntp = _epigraph_from_rays(gd)
    total = _minkowski(nabla_tilde, ntp)
    fan = normal_fan(total)
    fan.support = "halfspace"
    chk = support_function(total, fan)
    dual = GoodData(ld_dual, fan, chk)
    checks = {}
    # total = {(x, l) : x in nabla^{check h}, l >= h-tilde'(x, 1)}
    ineqs = [(tuple(a) + (0,), c) for a, c in hd.nabla_h.inequalities]
    for cov in set(gd.h_tilde_prime.covectors.values()):
        ineqs.append((tuple(-x for x in cov[:-1]) + (1,), -cov[-1]))
    epi = from_inequalities(n + 1, ineqs)
    checks["redescribe (base nabla^{check h})"] = (
        epi is not None and set(epi.vertices) == set(total.vertices) and set(epi.rays) == set(total.rays)
    )
    rep = is_good(ld_dual, dual)
    checks["dual data is good"] = rep.ok
    checks["_diagnostics"] = rep.diagnostics
    dtp = _epigraph_from_rays(dual)
    return DualGoodData(gd, nabla_tilde, ntp, total, dual, dtp, checks)


@dataclass
class InvolutionReport:
    ok: bool
    first_discrepancy: object = None


def verify_involution(gd: GoodData, dgd: DualGoodData) -> InvolutionReport:
    """h-tilde recomputed as the support function of Delta-tilde + Delta-tilde'."""
    T = _minkowski(gd.ld.total, dgd.delta_tilde_prime)
    Dp = dgd.delta_tilde_prime
    for S in gd.fan.maximal_cones:
        u = gd.fan.interior_point(S)
        F = T.face_minimizing(u)
        if len(F.vertices) != 1:
            return InvolutionReport(False, ("h-tilde", sorted(S), "no unique minimizer"))
        want = tuple(-x for x in F.vertices[0])
        if _frac(gd.h_tilde.covector(S)) != _frac(want):
            return InvolutionReport(False, ("h-tilde", sorted(S), gd.h_tilde.covector(S), want))
        G = Dp.face_minimizing(u)
        if len(G.vertices) != 1:
            return InvolutionReport(False, ("h-tilde'", sorted(S), "no unique minimizer"))
        want2 = tuple(-x for x in G.vertices[0])
        if _frac(gd.h_tilde_prime.covector(S)) != _frac(want2):
            return InvolutionReport(False, ("h-tilde'", sorted(S), gd.h_tilde_prime.covector(S), want2))
    return InvolutionReport(True)


def _lift_cell(gd: GoodData, poly: Polyhedron) -> list:
    return [tuple(x) + (gd.h_prime_at_level_one(x),) for x in poly.vertices]


def _alpha_map(src: GoodData, S_poly: Polyhedron, target: GoodData) -> dict:
    """Relevant cones of src mapped to cones of target via normal cones of S_poly."""
    ray_index = {r: i for i, r in enumerate(target.fan.rays)}
    out = {}
    for S in src.relevant:
        pts = _lift_cell(src, cell_of(src, S))
        F = S_poly.face_containing(pts)
        normals = [S_poly.inequalities[i][0] for i in F.containing_facets()]
        try:
            out[S] = frozenset(ray_index[tuple(a)] for a in normals)
        except KeyError:
            out[S] = None
    return out


@dataclass
class AlphaReport:
    alpha: dict
    alpha_check: dict
    inverse_ok: bool
    relevance_ok: bool
    reversal_ok: bool
    dimension_ok: bool

    @property
    def ok(self) -> bool:
        return self.inverse_ok and self.relevance_ok and self.reversal_ok and self.dimension_ok


def alpha_check(gd: GoodData, dgd: DualGoodData) -> AlphaReport:
    dual = dgd.dual
    n, r = gd.np.n, gd.np.r
    a = _alpha_map(gd, dgd.total, dual)
    T = _minkowski(gd.ld.total, dgd.delta_tilde_prime)
    b = _alpha_map(dual, T, gd)
    rel_dual = set(dual.relevant)
    relevance_ok = all(x in rel_dual for x in a.values())
    inverse_ok = relevance_ok and all(b.get(a[S]) == S for S in a) and all(a.get(b[S]) == S for S in b)
    reversal_ok = True
    if relevance_ok:
        for S in a:
            for S2 in a:
                if S < S2 and not a[S2] < a[S]:
                    reversal_ok = False
    dimension_ok = relevance_ok and all(
        dual.fan.cones[a[S]] == n - gd.fan.cones[S] + r + 2 for S in a
    )
    return AlphaReport(a, b, inverse_ok, relevance_ok, reversal_ok, dimension_ok)


def alpha(gd: GoodData, dgd: DualGoodData, S) -> frozenset:
    return _alpha_map_single(gd, dgd.total, dgd.dual, frozenset(S))


def _alpha_map_single(src, S_poly, target, S):
    if S not in set(src.relevant):
        raise ComplexError("cone is not relevant")
    ray_index = {r: i for i, r in enumerate(target.fan.rays)}
    pts = _lift_cell(src, cell_of(src, S))
    F = S_poly.face_containing(pts)
    return frozenset(ray_index[tuple(S_poly.inequalities[i][0])] for i in F.containing_facets())


@dataclass
class GeneralLegendreReport:
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def _dlt_general_side(src: GoodData, amap: dict, target: GoodData) -> GeneralLegendreReport:
    fails = []
    count = 0
    for S in src.relevant:
        T = amap.get(S)
        if T is None:
            fails.append((sorted(S), "no image"))
            continue
        desc = descend_pl(src.h_tilde, S)
        got = lift_newton(desc)
        want = set(_lift_cell(target, cell_of(target, T)))
        count += 1
        if got != want:
            fails.append((sorted(S), sorted(got), sorted(want)))
    return GeneralLegendreReport(count, fails)


def dlt_general_verify(gd: GoodData, dgd: DualGoodData | None = None) -> dict:
    if dgd is None:
        dgd = dual_good_data(gd)
    rep = alpha_check(gd, dgd)
    return {
        "alpha": rep,
        "nabla": _dlt_general_side(gd, rep.alpha, dgd.dual),
        "delta": _dlt_general_side(dgd.dual, rep.alpha_check, gd),
    }


# ---------------------------------------------------------------------------
# existence of good data


@dataclass
class ExistenceResult:
    m0: int
    n0: int
    good: GoodData
    report: GoodReport
    subdivisions: int


def existence_construction(np_: NefPartition, h: PLFunction, check_h: PLFunction, ld: LiftedData | None = None):
    """Good data for (m0 h + n0 phi, Sigma') built from per-cone lower hulls.

    h-tilde is h at level 0 and 0 on the cone over the dual Newton polytope at
    level 1; each maximal cone of the lifted fan is subdivided by the lower
    hull of its lifted generators.  m0 clears denominators and n0 is the least
    n for which m0 h-tilde + n phi-tilde is strictly convex and
    m0 h-tilde + (n - 1) phi-tilde is convex.
    """
    hd = build_height_data(np_, h, check_h)
    if ld is None:
        ld = build_lifted(hd)
    else:
        ld = ld.with_heights(hd)
    n = np_.n
    base = h.fan
    cones, covs = [], []
    for S in ld.fan.maximal_cones:
        rho = ld.fan.cone_obj(S)
        heights = {}
        for i, x in enumerate(base.rays):
            y = tuple(x) + (0,)
            if rho.contains(y):
                heights[y] = h.ray_value(i)
        for j in S:
            r = ld.fan.rays[j]
            if r[-1] == 1:
                heights[r] = 0
        cert, f = regular_subdivision(rho, heights)
        for T in f.fan.maximal_cones:
            cones.append(f.fan.cone_obj(T))
            covs.append(f.covectors[T])
    fine = Fan.from_cones(cones, d=n + 1, support="halfspace")
    index = {r: i for i, r in enumerate(fine.rays)}
    cov_map = {}
    for C, m in zip(cones, covs):
        cov_map[frozenset(index[r] for r in C.rays)] = m
    ht = PLFunction(fine, cov_map)
    if not ht.is_continuous():
        raise HeightError("per-cone subdivisions do not agree on shared faces")
    m0 = 1
    for m in cov_map.values():
        m0 = lcm(m0, common_denominator(m))
    phi = ld.phi.on_fan(fine)
    base_h = ht.scale(m0)
    need = 1
    dh = {W: m for W, _, _, m in base_h.wall_defects()}
    dp = {W: m for W, _, _, m in phi.wall_defects()}
    for W, a in dh.items():
        b = dp[W]
        if b < 0:
            raise HeightError(f"phi-tilde is not convex at wall {sorted(W)}")
        if b == 0:
            if a <= 0:
                raise HeightError(f"wall {sorted(W)} cannot be made strictly convex")
            continue
        strict = floor(Fraction(-a) / b) + 1
        weak = ceil(Fraction(-a) / b) + 1
        need = max(need, strict, weak)
    n0 = need
    h_new = h.scale(m0) + np_.phi.on_fan(base).scale(n0)
    hd_new = build_height_data(np_, h_new, check_h)
    ld_new = ld.with_heights(hd_new)
    ht_new = base_h + phi.scale(n0)
    gd = GoodData(ld_new, fine, ht_new)
    return ExistenceResult(m0, n0, gd, is_good(ld_new, gd), len(cones))


__all__ = [
    "AlphaReport",
    "ConeInfo",
    "DualGoodData",
    "ExistenceResult",
    "GoodData",
    "GoodReport",
    "HeightData",
    "HeightError",
    "InvolutionReport",
    "LiftedData",
    "SimplicityReport",
    "alpha",
    "alpha_check",
    "anticanonical_height_data",
    "anticanonical_heights",
    "boundary_lattice_points",
    "build_complex_general",
    "build_height_data",
    "build_lifted",
    "cell_of",
    "classify_cones",
    "dlt_general_verify",
    "dual_good_data",
    "existence_construction",
    "heights_from_values",
    "is_good",
    "lifted_good_data",
    "monodromy_general",
    "mpcp_report",
    "quadratic_heights",
    "simplicity_check",
    "standard_good_data",
    "trivial_good_data",
    "verify_involution",
]
