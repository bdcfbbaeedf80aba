"""Nef-partitions of reflexive polytopes and their Batyrev-Borisov duals."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .fans import Fan, PLFunction, normal_fan, support_function
from .geometry import (
    Face,
    LatticeSpace,
    Polyhedron,
    convex_hull,
    is_reflexive,
    minkowski_sum_all,
    polar_dual,
)
from .lattice import dot, normalize


class NefError(ValueError):
    """A nef-partition condition failed; ``condition`` names which one."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"{condition}: {detail}" if detail else condition)


def support_value(P: Polyhedron, n) -> Fraction:
    """-min_{m in P} <m, n>, evaluated straight from the vertices."""
    return normalize(-min(Fraction(dot(m, n)) for m in P.vertices))


def face_fan(P: Polyhedron) -> Fan:
    """The fan over the proper faces of a polytope with 0 in its interior.

    Rays are the vertices of ``P`` in their stored order, so cones and faces
    share index sets.
    """
    maxi = [frozenset(F.vertex_indices) for F in P.facet_faces()]
    return Fan(P.d, P.vertices, maxi, (), "complete")


@dataclass
class NefPartition:
    delta: Polyhedron
    parts: list
    sigma: Fan
    phi: PLFunction
    phi_parts: list
    nabla_parts: list
    nabla: Polyhedron
    delta_star: Polyhedron
    nabla_star: Polyhedron
    checks: dict = field(default_factory=dict)
    degenerate_parts: list = field(default_factory=list)

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return self.delta.d

    @property
    def space(self) -> LatticeSpace:
        return self.delta.space

    # -- evaluation ----------------------------------------------------------

    def phi_i(self, i: int, n):
        return support_value(self.parts[i], n)

    def phi_all(self, n) -> tuple:
        return tuple(self.phi_i(i, n) for i in range(self.r))

    def phi_value(self, n):
        return support_value(self.delta, n)

    @cached_property
    def check_sigma(self) -> Fan:
        return normal_fan(self.nabla)

    @cached_property
    def check_phi_parts(self) -> list:
        return [support_function(Q, self.check_sigma) for Q in self.nabla_parts]

    @cached_property
    def check_phi(self) -> PLFunction:
        return support_function(self.nabla, self.check_sigma)

    def check_phi_i(self, i: int, m):
        return support_value(self.nabla_parts[i], m)

    # -- duality -------------------------------------------------------------

    @cached_property
    def swapped(self) -> "NefPartition":
        sw = validate(self.nabla, self.nabla_parts)
        sw.__dict__["swapped"] = self
        return sw

    def sigma_cone_of_face(self, F: Face) -> frozenset:
        """Cone of Sigma over a face of Delta^*."""
        if F.parent is not self.delta_star:
            raise NefError("face of the wrong polytope")
        return frozenset(F.vertex_indices)


def validate(delta: Polyhedron, parts: Sequence[Polyhedron]) -> NefPartition:
    """Check every nef-partition condition and build the dual data."""
    parts = list(parts)
    d = delta.d
    if not parts:
        raise NefError("empty partition")
    for P in parts:
        if P.d != d:
            raise NefError("ambient mismatch", "parts live in a different space")
        if not P.has_integral_vertices():
            raise NefError("non-lattice part", f"vertices {P.vertices}")
        if not P.contains((0,) * d):
            raise NefError("part does not contain 0")
    if not is_reflexive(delta):
        raise NefError("not reflexive", "Delta is not a reflexive polytope")
    total = minkowski_sum_all(parts)
    if set(total.vertices) != set(delta.vertices) or total.dim != delta.dim:
        raise NefError("Minkowski sum mismatch", "the parts do not sum to Delta")
    space = delta.space
    dual_space = space.dual()
    delta_star = polar_dual(delta)
    sigma = face_fan(delta_star)
    phi_parts = [support_function(P, sigma) for P in parts]
    phi = support_function(delta, sigma)
    for i, f in enumerate(phi_parts):
        for j, val in enumerate(f.ray_values):
            if val not in (0, 1):
                raise NefError(
                    "phi_i(e_j) not in {0,1}",
                    f"part {i} takes value {val} on ray {sigma.rays[j]}",
                )
    if any(v != 1 for v in phi.ray_values):
        raise NefError("phi is not 1 on the rays")
    nabla_parts = []
    degenerate = []
    zero = (0,) * d
    for i, f in enumerate(phi_parts):
        pts = [zero] + [sigma.rays[j] for j, val in enumerate(f.ray_values) if val == 1]
        if len(pts) == 1:
            degenerate.append(i)
        nabla_parts.append(convex_hull(pts, space=dual_space))
    nabla = minkowski_sum_all(nabla_parts)
    nabla = convex_hull(nabla.vertices, space=dual_space)
    checks = {}
    if not nabla.is_full_dimensional:
        raise NefError("degenerate nabla", "the dual Minkowski sum is not full-dimensional")
    nabla_star = polar_dual(nabla)
    conv_d = convex_hull([v for P in parts for v in P.vertices], space=space)
    checks["nabla_star = Conv(parts)"] = set(conv_d.vertices) == set(nabla_star.vertices)
    conv_n = convex_hull([v for Q in nabla_parts for v in Q.vertices], space=dual_space)
    checks["delta_star = Conv(nabla parts)"] = set(conv_n.vertices) == set(delta_star.vertices)
    bound_ok = True
    for j, P in enumerate(parts):
        for i, Q in enumerate(nabla_parts):
            lo = -1 if i == j else 0
            if any(dot(m, n) < lo for m in P.vertices for n in Q.vertices):
                bound_ok = False
    checks["pairing bound"] = bound_ok
    checks["nabla reflexive"] = is_reflexive(nabla)
    np_ = NefPartition(
        delta=delta,
        parts=parts,
        sigma=sigma,
        phi=phi,
        phi_parts=phi_parts,
        nabla_parts=nabla_parts,
        nabla=nabla,
        delta_star=delta_star,
        nabla_star=nabla_star,
        checks=checks,
        degenerate_parts=degenerate,
    )
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise NefError("identity check failed", ", ".join(failed))
    return np_


def build_nabla_parts(np_: NefPartition) -> list:
    return list(np_.nabla_parts)


def swap_sides(np_: NefPartition) -> NefPartition:
    """The dual nef-partition: Delta is replaced by nabla with parts nabla_i."""
    return np_.swapped


# ---------------------------------------------------------------------------
# beta maps


def _face_of_boundary(np_: NefPartition, points) -> Face:
    """The smallest face of Delta^* containing the points, which must lie on the boundary."""
    P = np_.delta_star
    for p in points:
        if not P.contains(p) or P.interior_contains(p):
            raise NefError("not in the boundary", f"point {p} is not on the boundary of Delta^*")
    F = P.face_containing(points)
    if F.dim >= P.dim:
        raise NefError("not in the boundary", "the set is not contained in a proper face")
    return F


def beta_star(np_: NefPartition, points, i: int):
    """Vertices of {n in sigma : phi_i(n) = 1} for sigma = Conv(points) on the boundary of Delta^*.

    Returns a Polyhedron or None when the set is empty.
    """
    pts = list(convex_hull(points).vertices)
    _face_of_boundary(np_, pts)
    keep = [p for p in pts if np_.phi_i(i, p) == 1]
    if not keep:
        return None
    return convex_hull(keep, space=np_.delta_star.space)


def beta_star_all(np_: NefPartition, points) -> list:
    pts = list(convex_hull(points).vertices)
    _face_of_boundary(np_, pts)
    out = []
    for i in range(np_.r):
        keep = [p for p in pts if np_.phi_i(i, p) == 1]
        out.append(convex_hull(keep, space=np_.delta_star.space) if keep else None)
    return out


def mbeta(np_: NefPartition, points):
    """The Minkowski sum of the beta_i^* sets, or None if one of them is empty."""
    parts = beta_star_all(np_, points)
    if any(p is None for p in parts):
        return None
    return minkowski_sum_all(parts)


__all__ = [
    "NefError",
    "NefPartition",
    "beta_star",
    "beta_star_all",
    "build_nabla_parts",
    "face_fan",
    "mbeta",
    "support_value",
    "swap_sides",
    "validate",
]
