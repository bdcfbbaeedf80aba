"""Line-oriented text formats for polytopes, partitions, fans and heights.

Blank lines and text after ``#`` are ignored.  Numbers are integers or
fractions ``p/q``.

polytope:   dim d / vertex x1 .. xd / ray x1 .. xd
partition:  dim d / delta / vertex .. / part / vertex .. / part / ..
            (the delta block is optional; without it Delta is the sum of the parts)
fan:        dim d / support complete|partial|halfspace / ray .. / cone i j ..
heights:    dim d / ray n1 .. nd : value
"""

from __future__ import annotations

from fractions import Fraction

from .fans import Fan, PLFunction
from .geometry import Polyhedron, convex_hull, minkowski_sum_all
from .lattice import normalize


class ParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}" if line_no else message)


def _num(tok: str, line_no: int):
    try:
        return normalize(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        raise ParseError(line_no, f"not a number: {tok!r}") from None


def _fmt(x) -> str:
    x = normalize(Fraction(x))
    return str(x)


def _lines(text: str):
    for k, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line.split()


def _vector(toks, d, line_no):
    if d is None:
        raise ParseError(line_no, "'dim' must come first")
    if len(toks) != d:
        raise ParseError(line_no, f"expected {d} coordinates, got {len(toks)}")
    return tuple(_num(t, line_no) for t in toks)


def _dim(toks, line_no):
    if len(toks) != 2:
        raise ParseError(line_no, "usage: dim d")
    try:
        d = int(toks[1])
    except ValueError:
        raise ParseError(line_no, "dimension must be an integer") from None
    if d < 1:
        raise ParseError(line_no, "dimension must be positive")
    return d


# ---------------------------------------------------------------------------
# polytopes and partitions


def parse_polytope(text: str) -> Polyhedron:
    d = None
    pts, rays = [], []
    for k, toks in _lines(text):
        key = toks[0]
        if key == "dim":
            d = _dim(toks, k)
        elif key == "vertex":
            pts.append(_vector(toks[1:], d, k))
        elif key == "ray":
            rays.append(_vector(toks[1:], d, k))
        else:
            raise ParseError(k, f"unknown keyword {key!r}")
    if not pts:
        raise ParseError(0, "no vertices")
    return convex_hull(pts, rays)


def emit_polytope(P: Polyhedron) -> str:
    out = [f"dim {P.d}"]
    out += ["vertex " + " ".join(_fmt(x) for x in v) for v in sorted(P.vertices)]
    out += ["ray " + " ".join(_fmt(x) for x in r) for r in sorted(P.rays)]
    return "\n".join(out) + "\n"


def parse_partition(text: str) -> tuple:
    """Returns (delta, parts) ready for nef.validate."""
    d = None
    blocks: list = []
    delta_pts = None
    current = None
    for k, toks in _lines(text):
        key = toks[0]
        if key == "dim":
            d = _dim(toks, k)
        elif key == "delta":
            if delta_pts is not None:
                raise ParseError(k, "second delta block")
            delta_pts = []
            current = delta_pts
        elif key == "part":
            blocks.append([])
            current = blocks[-1]
        elif key == "vertex":
            if current is None:
                raise ParseError(k, "vertex outside a delta or part block")
            current.append(_vector(toks[1:], d, k))
        else:
            raise ParseError(k, f"unknown keyword {key!r}")
    if not blocks:
        raise ParseError(0, "no part blocks")
    if any(not b for b in blocks):
        raise ParseError(0, "empty part block")
    parts = [convex_hull(b) for b in blocks]
    if delta_pts:
        delta = convex_hull(delta_pts)
    else:
        delta = minkowski_sum_all(parts)
    return delta, parts


def emit_partition(delta: Polyhedron, parts) -> str:
    out = [f"dim {delta.d}", "delta"]
    out += ["vertex " + " ".join(_fmt(x) for x in v) for v in sorted(delta.vertices)]
    for P in parts:
        out.append("part")
        out += ["vertex " + " ".join(_fmt(x) for x in v) for v in sorted(P.vertices)]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# fans


def parse_fan(text: str) -> Fan:
    d = None
    support = "partial"
    rays, cones = [], []
    for k, toks in _lines(text):
        key = toks[0]
        if key == "dim":
            d = _dim(toks, k)
        elif key == "support":
            if len(toks) != 2 or toks[1] not in ("complete", "partial", "halfspace"):
                raise ParseError(k, "support must be complete, partial or halfspace")
            support = toks[1]
        elif key == "ray":
            rays.append(_vector(toks[1:], d, k))
        elif key == "cone":
            try:
                idx = frozenset(int(t) for t in toks[1:])
            except ValueError:
                raise ParseError(k, "cone indices must be integers") from None
            if not idx or any(i < 0 or i >= len(rays) for i in idx):
                raise ParseError(k, "cone index out of range")
            cones.append(idx)
        else:
            raise ParseError(k, f"unknown keyword {key!r}")
    if d is None or not cones:
        raise ParseError(0, "fan needs dim and at least one cone")
    return Fan(d, rays, cones, (), support)


def emit_fan(F: Fan) -> str:
    out = [f"dim {F.d}", f"support {F.support}"]
    out += ["ray " + " ".join(_fmt(x) for x in r) for r in F.rays]
    out += ["cone " + " ".join(str(i) for i in sorted(S)) for S in sorted(F.maximal_cones, key=sorted)]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# heights


def parse_heights(text: str) -> tuple:
    """Returns (d, {primitive vector: value})."""
    d = None
    vals: dict = {}
    for k, toks in _lines(text):
        key = toks[0]
        if key == "dim":
            d = _dim(toks, k)
        elif key == "ray":
            if ":" not in toks:
                raise ParseError(k, "usage: ray n1 .. nd : value")
            c = toks.index(":")
            if len(toks) != c + 2:
                raise ParseError(k, "exactly one value after ':'")
            v = _vector(toks[1:c], d, k)
            if v in vals:
                raise ParseError(k, f"duplicate ray {v}")
            vals[v] = _num(toks[c + 1], k)
        else:
            raise ParseError(k, f"unknown keyword {key!r}")
    if d is None or not vals:
        raise ParseError(0, "heights need dim and at least one ray")
    return d, vals


def emit_heights(d: int, values: dict, header: str = "") -> str:
    out = [f"# {line}" if line else "#" for line in header.splitlines()]
    out.append(f"dim {d}")
    for p in sorted(values):
        out.append("ray " + " ".join(_fmt(x) for x in p) + " : " + _fmt(values[p]))
    return "\n".join(out) + "\n"


def heights_of(g: PLFunction) -> dict:
    return {tuple(r): g.ray_value(i) for i, r in enumerate(g.fan.rays)}


__all__ = [
    "ParseError",
    "emit_fan",
    "emit_heights",
    "emit_partition",
    "emit_polytope",
    "heights_of",
    "parse_fan",
    "parse_heights",
    "parse_partition",
    "parse_polytope",
]
