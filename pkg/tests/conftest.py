import time

import pytest

from bbdegen.complex_general import (
    build_complex_general,
    dual_good_data,
    heights_from_values,
    standard_good_data,
)
from bbdegen.examples import data_text, example
from bbdegen.io import parse_heights

ACCEPTANCE_LINES: list = []
# Seconds spent building shared session fixtures, so timed criteria can include them.
FIXTURE_SECONDS: dict = {}


def record_acceptance(number: int, title: str, ok: bool, detail: str = ""):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    ACCEPTANCE_LINES.append((number, line))
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def bundled_heights(name: str, filename: str):
    np_ = example(name)
    d, vals = parse_heights(data_text(filename))
    return np_, heights_from_values(d, vals)


@pytest.fixture(scope="session")
def schoen():
    return example("schoen")


@pytest.fixture(scope="session")
def schoen_mpcp():
    """(partition, check-h) for the bundled MPCP heights."""
    return bundled_heights("schoen", "schoen_mpcp.heights")


@pytest.fixture(scope="session")
def schoen_mpcp_delta(schoen_mpcp):
    t = time.perf_counter()
    np_, ch = schoen_mpcp
    gd = standard_good_data(np_, ch, "delta")
    out = gd, build_complex_general(gd, "delta")
    FIXTURE_SECONDS["schoen_mpcp_delta"] = time.perf_counter() - t
    return out


@pytest.fixture(scope="session")
def schoen_mpcp_dual(schoen_mpcp_delta):
    t = time.perf_counter()
    gd, _ = schoen_mpcp_delta
    out = dual_good_data(gd)
    FIXTURE_SECONDS["schoen_mpcp_dual"] = time.perf_counter() - t
    return out


@pytest.fixture(scope="session")
def quartic_mpcp():
    t = time.perf_counter()
    np_, ch = bundled_heights("quartic", "quartic_mpcp.heights")
    gd = standard_good_data(np_, ch, "delta")
    out = np_, ch, gd, build_complex_general(gd, "delta")
    FIXTURE_SECONDS["quartic_mpcp"] = time.perf_counter() - t
    return out
