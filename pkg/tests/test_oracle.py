import pytest
from hypothesis import given

from conftest import small_cirquents
from cirquent.oracle import (
    GameState, LimitError, OracleLimits, eval_state, game_domain, oracle_valid,
)
from cirquent.semantics import Run, is_tautology, residue
from cirquent.syntax import CHALL, CHOR, TOP, Atom, Cluster, CirquentError, parse

MERGED = "ex[a] x. p(x) | ex[a] x. p(x) -> ex[c] x. p(x)"
DISTINCT = "ex[a] x. p(x) | ex[b] x. p(x) -> ex[c] x. p(x)"


def test_oracle_examples():
    assert oracle_valid(parse("~p(0) | p(0)"))
    assert not oracle_valid(parse("ex[c] x. p(x)"))
    assert oracle_valid(parse(MERGED))
    assert not oracle_valid(parse(DISTINCT))


def test_eval_state_examples():
    assert eval_state(GameState(parse("p &[a] q"))) == TOP
    c = parse("p |[c] q")
    assert eval_state(GameState(c, frozenset({(Cluster(CHOR, "c"), 1)}))) == Atom("q")
    c = parse("all[a] x. p(x)")
    assert eval_state(GameState(c, frozenset({(Cluster(CHALL, "a"), 3)}))) == parse("p(3)")


def test_game_domain():
    assert game_domain(parse("p(2) | all[a] x. p(x)")) == (2, 0, 1)
    assert game_domain(parse("p(0)"), extra=2) == (0, 1, 2)


def test_limits():
    with pytest.raises(LimitError):
        oracle_valid(parse("(p |[b] q) | (p |[e] q)"), OracleLimits(max_clusters=1))
    with pytest.raises(LimitError):
        oracle_valid(parse("p(0) | p(1) | p(2)"), OracleLimits(max_domain=3))


def test_open_input_is_an_error():
    with pytest.raises(CirquentError):
        oracle_valid(parse("p(x)"))


def test_machine_must_commit_before_the_environment_moves():
    # the machine cannot wait for the environment's choice and must answer uniformly
    assert oracle_valid(parse("(~p &[a] ~q) | (p |[b] q)"))
    assert oracle_valid(parse("all[a] x. ~p(x) | ex[d] x. p(x)"))
    assert not oracle_valid(parse("all[a] x. ~p(x) | p(0)"))


@given(small_cirquents(height=3))
def test_memo_does_not_change_verdicts(c):
    assert oracle_valid(c) == oracle_valid(c, memo=False)


@given(small_cirquents(height=3))
def test_a_larger_domain_does_not_change_verdicts(c):
    assert oracle_valid(c) == oracle_valid(c, extra=2, limits=OracleLimits(max_domain=8))


@given(small_cirquents(height=3))
def test_choice_free_validity_is_tautology(c):
    r = residue(c, Run())
    assert oracle_valid(r) == is_tautology(r)
