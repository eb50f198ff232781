from pathlib import Path

import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

from cirquent.syntax import (
    BOT, CHALL, CHAND, CHEXISTS, CHOR, TOP, Atom, Chall, Chand, Chexists, Chor, Const, Pand,
    Por, Var,
)

settings.register_profile(
    "default", max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FIXTURE = Path(__file__).resolve().parents[1] / "src" / "cirquent" / "data" / "example_4_1.clproof"

NAMES = {CHAND: ("a", "e"), CHOR: ("b", "f"), CHALL: ("c", "g"), CHEXISTS: ("d", "h")}
VARS = ("x", "y")


@pytest.fixture
def fixture_text():
    return FIXTURE.read_text()


def terms(bound, constants=(0, 1, 2)):
    options = [st.builds(Const, st.sampled_from(constants))]
    if bound:
        options.append(st.builds(Var, st.sampled_from(sorted(bound))))
    return st.one_of(*options)


@st.composite
def literals(draw, bound=(), constants=(0, 1, 2)):
    kind = draw(st.integers(0, 4))
    if kind == 0:
        return TOP
    if kind == 1:
        return BOT
    neg = draw(st.booleans())
    if kind == 2:
        return Atom("q", (), neg)
    if kind == 3:
        return Atom("p", (draw(terms(bound, constants)),), neg)
    return Atom("r", (draw(terms(bound, constants)), draw(terms(bound, constants))), neg)


@st.composite
def cirquents(draw, height=4, bound=(), constants=(0, 1, 2), names=NAMES):
    """Closed (relative to `bound`) cirquents of height at most `height`."""
    if height <= 1 or draw(st.integers(0, 3)) == 0:
        return draw(literals(bound, constants))
    op = draw(st.sampled_from(("pand", "por", CHAND, CHOR, CHALL, CHEXISTS)))
    if op in (CHALL, CHEXISTS):
        var = draw(st.sampled_from(VARS))
        body = draw(cirquents(height - 1, tuple(sorted(set(bound) | {var})), constants, names))
        node = Chall if op == CHALL else Chexists
        return node(draw(st.sampled_from(names[op])), var, body)
    left = draw(cirquents(height - 1, bound, constants, names))
    right = draw(cirquents(height - 1, bound, constants, names))
    if op == "pand":
        return Pand(left, right)
    if op == "por":
        return Por(left, right)
    node = Chand if op == CHAND else Chor
    return node(draw(st.sampled_from(names[op])), left, right)


SMALL_NAMES = {CHAND: ("a",), CHOR: ("b",), CHALL: ("c",), CHEXISTS: ("d",)}


def small_cirquents(height=3):
    """Closed cirquents with at most one cluster per kind and constants {0, 1}:
    always within the oracle's default limits."""
    return cirquents(height, (), (0, 1), SMALL_NAMES)


# one line per acceptance criterion, printed after the run even under capture
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
