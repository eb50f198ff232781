import random

import pytest
from hypothesis import given, strategies as st

from conftest import small_cirquents
from cirquent.experiments import all_runs, random_run, relevant_atoms
from cirquent.semantics import (
    ENVIRONMENT, MACHINE, IllegalRunError, Interpretation, Move, Run, check_legal, eval_truth,
    is_tautology, parse_run, residue, resolvent, truth_table_tautology, won,
)
from cirquent.syntax import (
    BOT, CHALL, CHAND, CHOR, TOP, Atom, Cluster, Const, Pand, atoms_of, cluster_kinds, parse,
)


def move(player, kind, name, choice):
    return Move(player, Cluster(kind, name), choice)


def test_check_legal_examples():
    assert check_legal(Run((move(ENVIRONMENT, CHAND, "a", 1),))) is None
    v = check_legal(Run((move(MACHINE, CHAND, "a", 0),)))
    assert v.condition == 2 and v.index == 0
    v = check_legal(Run((move(ENVIRONMENT, CHALL, "c", 4), move(ENVIRONMENT, CHALL, "c", 7))))
    assert v.condition == 4 and v.index == 1


def test_check_legal_binary_choice_range():
    v = check_legal(Run((move(MACHINE, CHOR, "b", 2),)))
    assert v.condition == 1


def test_check_legal_machine_moves_only_in_its_clusters():
    v = check_legal(Run((move(ENVIRONMENT, CHOR, "b", 0),)))
    assert v.condition == 3


def test_resolvent_examples():
    assert resolvent(parse("p |[c] q"), parse_run("M:c.1")) == Atom("q")
    assert resolvent(parse("all[a] x. p(x)"), parse_run("E:a.3")) == parse("p(3)")
    assert resolvent(parse("p &[a] q"), Run()) is None


def test_residue_examples():
    assert residue(parse("p |[c] q"), parse_run("M:c.0")) == Atom("p")
    assert residue(parse("(p &[a] q) & r"), Run()) == Pand(TOP, Atom("r"))
    c = parse("ex[c] x. (p(x) |[e] q)")
    assert residue(c, parse_run("M:c.2", c)) == BOT


def test_residue_rejects_illegal_runs():
    with pytest.raises(IllegalRunError):
        residue(parse("p |[c] q"), parse_run("M:c.0 M:c.1"))


def test_eval_truth_examples():
    assert eval_truth(parse("T & ~p(0)"), Interpretation())
    assert eval_truth(parse("p(1) | F"), Interpretation.of("p(1)"))
    assert not eval_truth(BOT, Interpretation.of("p(1)"))


def test_won_examples():
    assert won(parse("p &[a] q"), Run(), Interpretation())
    assert not won(parse("p |[c] q"), Run(), Interpretation.of("p", "q"))
    c = parse("ex[c] x. p(x)")
    run = parse_run("M:c.5", c)
    interp = Interpretation.of("p(5)")
    assert won(c, run, interp)
    assert won(c, run, interp) == eval_truth(residue(c, run), interp)


def test_tautology_examples():
    assert is_tautology(parse("~p(0) | p(0)"))
    assert not is_tautology(parse("p(0) | p(1)"))
    assert is_tautology(TOP)
    assert not is_tautology(parse("T & F"))


def test_interpretation_file_format():
    interp = Interpretation.parse("p(1)  # comment\n\nq\n")
    assert Atom("q") in interp and parse("p(1)") in interp
    assert parse("p(0)") not in interp


@st.composite
def choice_free(draw):
    c = draw(small_cirquents(height=4))
    return residue(c, Run())


@given(choice_free())
def test_tautology_matches_truth_table(c):
    assert not cluster_kinds(c)
    assert is_tautology(c) == truth_table_tautology(c)


@given(small_cirquents(), st.integers(0, 2**32 - 1))
def test_won_equals_truth_of_residue(c, seed):
    rng = random.Random(seed)
    domain = (0, 1, 2)
    run = random_run(rng, c, domain)
    atoms = relevant_atoms(c, domain)
    interp = Interpretation(frozenset(a for a in atoms if rng.random() < 0.5))
    assert won(c, run, interp) == eval_truth(residue(c, run), interp)


@given(small_cirquents(), st.integers(0, 2**32 - 1))
def test_moves_in_absent_clusters_are_irrelevant(c, seed):
    rng = random.Random(seed)
    run = random_run(rng, c, (0, 1))
    extra = run + Run((move(ENVIRONMENT, CHAND, "zz", 1),))
    assert residue(c, run) == residue(c, extra)


@given(small_cirquents(height=2))
def test_residues_over_all_runs_are_closed_and_choice_free(c):
    for run in all_runs(c, (0, 1)):
        assert check_legal(run) is None
        r = residue(c, run)
        assert not cluster_kinds(r)
        assert all(all(isinstance(t, Const) for t in a.args) for a in atoms_of(r))
