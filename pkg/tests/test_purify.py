import pytest
from hypothesis import assume, given, strategies as st

from conftest import cirquents, small_cirquents
from cirquent.calculus import Rule, check_proof
from cirquent.oracle import LimitError, oracle_valid
from cirquent.purify import (
    Overflow, derivation_fragment, is_pure, purify, rank, tetrate,
)
from cirquent.syntax import BOT, TOP, Atom, cluster_names, parse, replace_at, to_text, walk


@pytest.mark.parametrize("text, expected", [
    ("p(0)", 1),
    ("T", 1),
    ("p & q", 25),
    ("p | q", 3125),
    ("p &[a] q", 2),
    ("all[a] x. p(x)", 2),
    ("ex[d] x. (p(x) |[b] q)", 3),
    ("(p & q) & r", 5 ** 26),
])
def test_rank_examples(text, expected):
    assert rank(parse(text)) == expected


def test_tetration():
    assert tetrate(5, 1) == 5
    assert tetrate(5, 2) == 3125
    assert tetrate(2, 3) == 16


def test_rank_overflows_past_the_tower_guard():
    r = rank(parse("(p | q) | r"))
    assert isinstance(r, Overflow)
    assert isinstance(rank(parse("p | q"), tower_guard=1), Overflow)


@pytest.mark.parametrize("text, violation", [
    ("F", None),
    ("(p & q) | r", 2),
    ("p &[c] (q &[c] r)", 7),
    ("p", None),
    ("F | p", 1),
    ("~p(0) | p(0)", 4),
])
def test_is_pure_examples(text, violation):
    assert is_pure(parse(text)) == violation


def test_purify_drops_bottom_disjunct():
    res = purify(parse("F | p"))
    assert res.pure == Atom("p")
    assert res.derivation and res.replay() == parse("F | p")
    assert Rule.PorIdentity in {s.rule for s in res.derivation}


def test_purify_excluded_middle_is_trivialized():
    res = purify(parse("~p(0) | p(0)"))
    assert res.pure == TOP
    assert res.derivation[0].rule is Rule.Trivialization
    assert res.replay() == parse("~p(0) | p(0)")


def test_purify_shared_chall_conjunction():
    c = parse("all[a] x. p(x) & all[a] x. p(x)")
    res = purify(c)
    assert is_pure(res.pure) is None
    assert res.replay() == c
    assert Rule.Challchotomy in {s.rule for s in res.derivation}
    assert check_proof(derivation_fragment(res), allow_hypotheses=True) == c


def test_purify_respects_avoid_set():
    c = parse("all[a] x. p(x) & all[a] x. p(x)")
    plain = purify(c)
    introduced = cluster_names(plain.pure) - cluster_names(c)
    assert introduced
    res = purify(c, avoid=frozenset(introduced))
    assert not (cluster_names(res.pure) & introduced)


def test_pure_input_is_unchanged():
    c = parse("p |[b] q")
    res = purify(c)
    assert res.pure == c and res.derivation == [] and res.stage_trace == []


@given(cirquents(height=4))
def test_purify_output_is_pure_and_replays(c):
    res = purify(c)
    assert is_pure(res.pure) is None, to_text(res.pure)
    assert res.replay() == c
    assert check_proof(derivation_fragment(res), allow_hypotheses=True) == c


@given(cirquents(height=4))
def test_stage_rewrites_decrease_rank(c):
    res = purify(c)
    for rw in res.stage_trace:
        before, after = rank(rw.before), rank(rw.after)
        if not isinstance(before, Overflow) and not isinstance(after, Overflow):
            assert after < before, (rw.stage, to_text(rw.before), to_text(rw.after))
    r_in, r_out = rank(c), rank(res.pure)
    if not isinstance(r_in, Overflow) and not isinstance(r_out, Overflow):
        assert r_out <= r_in


@given(cirquents(height=4), st.data())
def test_rank_is_monotone_under_replacement(c, data):
    paths = [p for p, sub in walk(c) if rank(sub) != 1]
    assume(paths)
    path = data.draw(st.sampled_from(paths))
    smaller = replace_at(c, path, data.draw(st.sampled_from((TOP, BOT))))
    big, small = rank(c), rank(smaller)
    assume(not isinstance(big, Overflow))
    assert not isinstance(small, Overflow) and small < big


@given(small_cirquents(height=3))
def test_purification_preserves_validity(c):
    res = purify(c)
    try:
        assert oracle_valid(c) == oracle_valid(res.pure)
    except LimitError:
        assume(False)
