"""Command-line interface.

Exit codes: 0 success, 1 a finding (invalid input data, not simple, failed
verification), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .complex_basic import (
    ComplexError,
    all_quartets,
    build_complex,
    cellular_homology,
    dimension_violations,
    dlt_verify,
    loops,
    monodromy,
)
from .complex_general import (
    HeightError,
    build_complex_general,
    dlt_general_verify,
    dual_good_data,
    existence_construction,
    heights_from_values,
    simplicity_check,
    standard_good_data,
    verify_involution,
)
from .discriminant import barycentric, components, family_counts, initial_gamma, prune
from .examples import EXAMPLES, data_text, example
from .fans import FanError
from .geometry import GeometryError
from .io import ParseError, parse_heights, parse_partition
from .nef import NefError, validate

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# inputs


def load_partition(spec: str):
    if spec.startswith("example:"):
        name = spec.split(":", 1)[1]
        if name not in EXAMPLES:
            raise UsageError(f"unknown example {name!r}; known: {', '.join(sorted(EXAMPLES))}")
        return example(name)
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"no such file: {spec}")
    delta, parts = parse_partition(path.read_text())
    return validate(delta, parts)


def load_heights(np_, source: str | None, input_spec: str):
    """Check-h on the boundary of nabla^*, or None for the unsubdivided case."""
    if source is None:
        return None
    if source == "anticanonical":
        return np_.check_phi
    if source == "mpcp":
        name = input_spec.split(":", 1)[1] if input_spec.startswith("example:") else None
        rec = EXAMPLES.get(name) if name else None
        if rec is None or rec.mpcp_heights is None:
            raise UsageError("no bundled MPCP heights for this input; pass --heights FILE")
        text = data_text(rec.mpcp_heights)
    else:
        path = Path(source)
        if not path.is_file():
            raise UsageError(f"no such file: {source}")
        text = path.read_text()
    d, vals = parse_heights(text)
    if d != np_.n:
        raise ParseError(0, f"heights live in dimension {d}, the partition in {np_.n}")
    return heights_from_values(d, vals)


# ---------------------------------------------------------------------------
# output


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _scalar(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (list, tuple)):
        return "[" + " ".join(_scalar(v) for v in x) + "]"
    if x is None:
        return "none"
    return str(x)


def render_text(report: dict) -> str:
    """One line per scalar field; lists of records as indented '- k=v' lines."""
    out = []
    for k, v in report.items():
        if isinstance(v, list) and v and isinstance(v[0], dict):
            out.append(f"{k}:")
            for item in v:
                out.append("  - " + " ".join(f"{a}={_scalar(b)}" for a, b in item.items()))
        elif isinstance(v, dict):
            out.append(f"{k}:")
            for a, b in v.items():
                out.append(f"  {a}: {_scalar(b)}")
        else:
            out.append(f"{k}: {_scalar(v)}")
    return "\n".join(out) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(report), indent=2, sort_keys=False) + "\n"
    return render_text(report)


# ---------------------------------------------------------------------------
# commands


def _complex_for(np_, args):
    ch = load_heights(np_, args.heights, args.input)
    if ch is None:
        return build_complex(np_, args.side), None
    gd = standard_good_data(np_, ch, args.side)
    return build_complex_general(gd, args.side), gd


def cmd_validate(args) -> tuple:
    try:
        np_ = load_partition(args.input)
    except NefError as e:
        return {"valid": False, "condition": e.condition, "detail": str(e)}, EXIT_FINDING
    rep = {"valid": True, "dimension": np_.n, "parts": np_.r}
    rep["checks"] = {k: v for k, v in np_.checks.items()}
    rep["nabla_vertices"] = len(np_.nabla.vertices)
    rep["degenerate_parts"] = list(np_.degenerate_parts)
    return rep, EXIT_OK


def cmd_complex(args) -> tuple:
    np_ = load_partition(args.input)
    ac, _ = _complex_for(np_, args)
    hom = cellular_homology(ac)
    rep = {
        "side": args.side,
        "heights": args.heights or "none",
        "f_vector": list(ac.f_vector()),
        "maximal_cells": len(ac.maximal),
        "homology": [{"degree": k, "free_rank": a, "torsion": list(t)} for k, (a, t) in enumerate(hom)],
    }
    if not args.heights:
        viol = sum(len(dimension_violations(np_, q)) for q in all_quartets(np_))
        rep["dimension_violations"] = viol
    rep["cells"] = [
        {"id": c.id, "dim": c.dim, "vertices": [list(v) for v in sorted(c.poly.vertices)]} for c in ac.cells
    ]
    return rep, EXIT_OK


def cmd_monodromy(args) -> tuple:
    np_ = load_partition(args.input)
    ac, _ = _complex_for(np_, args)
    rows = []
    for lp in loops(ac):
        T = monodromy(ac, *lp)
        if not T.is_identity():
            rows.append({"loop": list(lp), "matrix": [list(r) for r in T.matrix]})
    rep = {"side": args.side, "loops": len(loops(ac)), "nontrivial": len(rows), "transports": rows}
    return rep, EXIT_OK


def cmd_discriminant(args) -> tuple:
    np_ = load_partition(args.input)
    ac, _ = _complex_for(np_, args)
    gamma = initial_gamma(barycentric(ac))
    pruned = prune(gamma, jobs=args.jobs)
    comps = components(pruned)
    fams = family_counts(comps)
    fam_text = " + ".join(str(fams[k]) for k in sorted(fams, key=lambda x: -1 if x is None else x))
    rep = {
        "side": args.side,
        "initial_simplices": len(gamma.simplices),
        "pruned_simplices": len(pruned.simplices),
        "summary": f"{len(comps)} components ({fam_text})" if comps else "0 components",
        "families": {("unlabelled" if k is None else f"summand {k}"): v for k, v in sorted(fams.items(), key=lambda kv: -1 if kv[0] is None else kv[0])},
        "components": [
            {
                "index": i,
                "kind": c.kind,
                "family": list(c.families),
                "simplices": c.size,
                "trace": c.trace,
                "rank_T_minus_I": c.rank_t_minus_i,
                "square_zero": c.square_zero,
                "primitive": c.primitive,
                "uniform": c.uniform,
            }
            for i, c in enumerate(comps)
        ],
    }
    if args.chains:
        rep["chains"] = [{"component": i, "chain": list(s)} for i, c in enumerate(comps) for s in c.simplices]
    return rep, EXIT_OK


def cmd_simplicity(args) -> tuple:
    np_ = load_partition(args.input)
    ch = load_heights(np_, args.heights or "anticanonical", args.input)
    gd = standard_good_data(np_, ch, args.side)
    ac = build_complex_general(gd, args.side)
    sr = simplicity_check(gd, ac)
    bad = [c for c in sr.cells if not (c.primal_ok and c.dual_ok and not c.problems)]
    rep = {
        "verdict": sr.verdict,
        "criterion": sr.label,
        "cells_checked": len(sr.cells),
        "cells_failing": len(bad),
        "mpcp_h": sr.mpcp["h"]["ok"],
        "mpcp_check_h": sr.mpcp["check_h"]["ok"],
        "failures": [
            {"cell": c.cell, "primal": c.primal_ok, "dual": c.dual_ok, "problems": list(c.problems)} for c in bad[:50]
        ],
    }
    return rep, EXIT_OK if sr.simple else EXIT_FINDING


def cmd_legendre(args) -> tuple:
    np_ = load_partition(args.input)
    if not args.verify:
        raise UsageError("legendre needs --verify")
    rep = {}
    ok = True
    if args.heights is None:
        res = dlt_verify(np_)
        for side, r in res.items():
            rep[f"basic_{side}"] = {"checked": r.checked, "failures": len(r.failures)}
            ok = ok and r.ok
        sources = ["anticanonical"]
    else:
        sources = [args.heights]
    for src in sources:
        ch = load_heights(np_, src, args.input)
        gd = standard_good_data(np_, ch, args.side)
        dgd = dual_good_data(gd)
        inv = verify_involution(gd, dgd)
        res = dlt_general_verify(gd, dgd)
        a = res["alpha"]
        checks = {k: v for k, v in dgd.checks.items() if not k.startswith("_")}
        rep[f"general_{src if src in ('anticanonical', 'mpcp') else 'file'}"] = {
            "dual_checks": all(checks.values()),
            "involution": inv.ok,
            "alpha_inverse": a.inverse_ok,
            "alpha_reverses_order": a.reversal_ok,
            "alpha_dimensions": a.dimension_ok,
            "checked": res["nabla"].checked + res["delta"].checked,
            "failures": len(res["nabla"].failures) + len(res["delta"].failures),
        }
        ok = ok and all(checks.values()) and inv.ok and a.ok and res["nabla"].ok and res["delta"].ok
    rep["result"] = "all checks pass" if ok else "verification failed"
    return rep, EXIT_OK if ok else EXIT_FINDING


def cmd_goodsub(args) -> tuple:
    np_ = load_partition(args.input)
    ch = load_heights(np_, args.heights or "anticanonical", args.input)
    res = existence_construction(np_, np_.phi, ch)
    rep = {
        "m0": res.m0,
        "n0": res.n0,
        "good": res.report.ok,
        "diagnostics": list(res.report.diagnostics),
        "subdivided_cones": res.subdivisions,
        "rays": len(res.good.fan.rays),
        "maximal_cones": len(res.good.fan.maximal_cones),
    }
    return rep, EXIT_OK if res.report.ok else EXIT_FINDING


COMMANDS = {
    "validate": cmd_validate,
    "complex": cmd_complex,
    "discriminant": cmd_discriminant,
    "monodromy": cmd_monodromy,
    "simplicity": cmd_simplicity,
    "legendre": cmd_legendre,
    "goodsub": cmd_goodsub,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bbdegen", description="Toric degenerations of Calabi-Yau complete intersections.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("input", help="partition file or example:NAME")
        s.add_argument("--side", choices=("nabla", "delta"), default="delta" if name == "discriminant" else "nabla")
        s.add_argument("--heights", help="FILE, mpcp or anticanonical")
        s.add_argument("--out", help="write the report to FILE")
        s.add_argument("--format", choices=("text", "json"), default="text")
        s.add_argument("--jobs", type=int, default=1)
        if name == "legendre":
            s.add_argument("--verify", action="store_true")
        if name == "discriminant":
            s.add_argument("--chains", action="store_true", help="list every simplex by its chain of cells")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        report, code = COMMANDS[args.command](args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NefError, HeightError, ComplexError, FanError, GeometryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FINDING
    text = render({"command": args.command, "input": args.input, **report}, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
