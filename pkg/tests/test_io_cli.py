import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bbdegen.cli import main
from bbdegen.examples import example
from bbdegen.fans import normal_fan
from bbdegen.geometry import convex_hull
from bbdegen.io import (
    ParseError,
    emit_fan,
    emit_heights,
    emit_partition,
    emit_polytope,
    parse_fan,
    parse_heights,
    parse_partition,
    parse_polytope,
)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# file formats


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)), min_size=1, max_size=8))
def test_polytope_roundtrip(pts):
    P = convex_hull(pts)
    Q = parse_polytope(emit_polytope(P))
    assert set(Q.vertices) == set(P.vertices)
    assert emit_polytope(Q) == emit_polytope(P)


def test_partition_roundtrip():
    np_ = example("schoen")
    text = emit_partition(np_.delta, np_.parts)
    delta, parts = parse_partition(text)
    assert set(delta.vertices) == set(np_.delta.vertices)
    assert [set(P.vertices) for P in parts] == [set(P.vertices) for P in np_.parts]


def test_partition_delta_defaults_to_sum():
    text = "dim 2\npart\nvertex -1 0\nvertex 1 0\npart\nvertex 0 -1\nvertex 0 1\n"
    delta, parts = parse_partition(text)
    assert len(delta.vertices) == 4 and len(parts) == 2


def test_fan_roundtrip():
    F = normal_fan(convex_hull([(-1, -1), (2, -1), (-1, 2)]))
    G = parse_fan(emit_fan(F))
    assert G.rays == F.rays and set(G.maximal_cones) == set(F.maximal_cones)


def test_heights_roundtrip_with_fractions():
    vals = {(1, 0): 1, (0, 1): Fraction(3, 2), (-1, -1): 2}
    text = emit_heights(2, vals, "a header\nwith two lines")
    assert text.startswith("# a header\n# with two lines\n")
    d, back = parse_heights(text)
    assert d == 2 and back == vals


@pytest.mark.parametrize(
    "text, line",
    [
        ("dim 2\nvertex 1\n", 2),
        ("dim x\n", 1),
        ("dim 2\nvertex 1 a\n", 2),
        ("dim 2\nfrobnicate 1 2\n", 2),
    ],
)
def test_polytope_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as e:
        parse_polytope(text)
    assert e.value.line_no == line


def test_heights_parse_errors():
    with pytest.raises(ParseError):
        parse_heights("dim 2\nray 1 0 2\n")
    with pytest.raises(ParseError):
        parse_heights("dim 2\nray 1 0 : 1\nray 1 0 : 2\n")
    with pytest.raises(ParseError):
        parse_heights("# only a comment\n")


def test_partition_parse_errors():
    with pytest.raises(ParseError):
        parse_partition("dim 2\nvertex 0 0\n")
    with pytest.raises(ParseError):
        parse_partition("dim 2\ndelta\nvertex 1 1\n")


# ---------------------------------------------------------------------------
# command line


def test_validate_example(capsys):
    code, out, _ = run(["validate", "example:schoen"], capsys)
    assert code == 0
    assert "command: validate" in out


def test_validate_file_and_bad_file(tmp_path, capsys):
    good = tmp_path / "quadric.txt"
    good.write_text("dim 2\npart\nvertex -1 0\nvertex 1 0\npart\nvertex 0 -1\nvertex 0 1\n")
    assert run(["validate", str(good)], capsys)[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("dim 2\npart\nvertex -1 zero\n")
    code, _, err = run(["validate", str(bad)], capsys)
    assert code == 2 and "line 3" in err


def test_invalid_partition_exits_one(tmp_path, capsys):
    f = tmp_path / "big.txt"
    f.write_text("dim 2\npart\nvertex -2 -2\nvertex 2 -2\nvertex -2 2\nvertex 2 2\n")
    code, out, _ = run(["validate", str(f)], capsys)
    assert code == 1
    assert "valid: false" in out and "condition: not reflexive" in out


def test_usage_errors(capsys):
    assert run(["validate", "example:nope"], capsys)[0] == 2
    assert run(["validate", "/no/such/file"], capsys)[0] == 2
    assert run(["complex", "example:quintic", "--heights", "mpcp"], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["complex", "example:square", "--jobs", "0"], capsys)[0] == 2


def test_complex_report(capsys):
    code, out, _ = run(["complex", "example:schoen", "--side", "delta"], capsys)
    assert code == 0
    assert "f_vector: [18 45 42 15]" in out


def test_json_mirrors_text(capsys):
    _, text, _ = run(["complex", "example:quintic"], capsys)
    _, js, _ = run(["complex", "example:quintic", "--format", "json"], capsys)
    data = json.loads(js)
    for k, v in data.items():
        if isinstance(v, bool):
            assert f"{k}: {'true' if v else 'false'}" in text
        elif isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
            assert f"{k}: [" + " ".join(str(x) for x in v) + "]" in text
        elif not isinstance(v, (dict, list)):
            assert f"{k}: {v}" in text


def test_simplicity_exit_codes(capsys):
    assert run(["simplicity", "example:quintic", "--heights", "anticanonical"], capsys)[0] == 1
    assert run(["simplicity", "example:quartic", "--heights", "mpcp", "--side", "delta"], capsys)[0] == 0


def test_discriminant_and_goodsub(capsys):
    code, out, _ = run(["discriminant", "example:quartic", "--heights", "mpcp"], capsys)
    assert code == 0 and "24 components" in out
    code, out, _ = run(["goodsub", "example:quartic", "--heights", "mpcp"], capsys)
    assert code == 0 and "good: true" in out


def test_monodromy_and_legendre(capsys):
    assert run(["monodromy", "example:quintic"], capsys)[0] == 0
    code, out, _ = run(["legendre", "example:quadric", "--verify"], capsys)
    assert code == 0 and "all checks pass" in out


def test_output_file_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for f in (a, b):
        assert run(["discriminant", "example:quartic", "--heights", "mpcp", "--chains", "--out", str(f)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "bbdegen.cli", "validate", "example:square"], capture_output=True, text=True)
    assert r.returncode == 0 and "validate" in r.stdout
