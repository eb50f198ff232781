import time

import pytest
from hypothesis import given

from conftest import small_cirquents
from cirquent.calculus import (
    CHOOSING, Proof, ProofCheckError, ProofFormatError, ProofLine, Rule, RuleError,
    SideConditionError, Witness, apply_rule, check_proof, check_step, derivation_lines,
    format_proof, parse_proof, rule_from_name, unapply,
)
from cirquent.experiments import backward_applications
from cirquent.syntax import TOP, KindClashError, ParseError, alpha_eq, parse, to_text

THEOREM = "(all[a] x. ~p(x) & all[a] x. ~p(x)) | ex[c] x. p(x)"


def test_fixture_checks_quickly(fixture_text):
    start = time.perf_counter()
    theorem = check_proof(parse_proof(fixture_text))
    assert time.perf_counter() - start < 1.0
    assert theorem == parse(THEOREM)
    assert theorem == parse("ex[a] x. p(x) | ex[a] x. p(x) -> ex[c] x. p(x)")


def test_fixture_has_one_rule_per_line(fixture_text):
    proof = parse_proof(fixture_text)
    assert len(proof) == 13
    assert proof.line(9).rule is Rule.ChandSplitting and proof.line(9).premises == (8, 8)
    assert [proof.line(i).rule for i in (11, 12)] == [Rule.ChallCleansing] * 2
    assert [proof.line(i).rule for i in (3, 4)] == [Rule.Trivialization] * 2


def test_each_fixture_line_checks(fixture_text):
    proof = parse_proof(fixture_text)
    for i in range(1, len(proof) + 1):
        assert check_step(proof, i) is None


def test_single_axiom_line():
    assert check_proof(parse_proof("1. T ; Axiom\n")) == TOP


def test_pand_identity_forward():
    assert apply_rule(Rule.PandIdentity, [TOP], Witness(path=())) == parse("T & T")


def test_chand_splitting_forward(fixture_text):
    proof = parse_proof(fixture_text)
    a = proof.line(8).cirquent
    assert apply_rule(Rule.ChandSplitting, [a, a], Witness(cluster="b")) == proof.line(9).cirquent


def test_chand_splitting_needs_a_fresh_cluster(fixture_text):
    a = parse_proof(fixture_text).line(8).cirquent
    with pytest.raises(RuleError):
        apply_rule(Rule.ChandSplitting, [a, a], Witness(cluster="a"))


def test_challchotomy_forward(fixture_text):
    proof = parse_proof(fixture_text)
    out = apply_rule(Rule.Challchotomy, [proof.line(12).cirquent], Witness(path=("l",), cluster="b"))
    assert out == proof.line(13).cirquent


def test_wrong_rule_yields_a_diagnostic():
    proof = parse_proof("1. T ; Axiom\n2. F ; Por-identity: 1\n")
    with pytest.raises(ProofCheckError) as info:
        check_proof(proof)
    assert info.value.diagnostic.index == 2


def test_tampered_rule_name_names_the_line(fixture_text):
    text = fixture_text.replace("Pand-distribution: 4", "Por-distribution: 4")
    with pytest.raises(ParseError):
        parse_proof(text)
    text = fixture_text.replace("Pand-distribution: 4", "Chand-distribution: 4")
    with pytest.raises(ProofCheckError) as info:
        check_proof(parse_proof(text))
    assert info.value.diagnostic.index == 5


def test_splitting_cluster_must_not_occur_in_premises():
    text = "1. T ; Axiom\n2. T &[b] T ; ChandSplitting: 1,1\n3. (T &[b] T) &[b] T ; ChandSplitting: 2,1\n"
    with pytest.raises(ProofCheckError) as info:
        check_proof(parse_proof(text))
    assert info.value.diagnostic.index == 3
    assert "b" in info.value.diagnostic.message


def test_reusing_an_occurring_cluster_in_the_fixture_is_rejected(fixture_text):
    # b -> c clashes with the chexists cluster c already in the cirquent
    lines = fixture_text.splitlines(keepends=True)
    tampered = "".join(ln.replace("&[b]", "&[c]") for ln in lines)
    with pytest.raises((ProofFormatError, KindClashError, ProofCheckError)):
        check_proof(parse_proof(tampered))


def test_premise_must_be_earlier():
    with pytest.raises(ProofFormatError):
        parse_proof("1. T ; Axiom\n2. T & T ; Pand-identity: 2\n")


def test_axiom_must_be_top():
    with pytest.raises(ProofCheckError):
        check_proof(parse_proof("1. p ; Axiom\n"))


def test_hypothesis_lines():
    text = "1. p | q ; Hypothesis\n2. q | p ; Por-commutativity: 1\n"
    proof = parse_proof(text)
    with pytest.raises(ProofCheckError):
        check_proof(proof)
    assert check_proof(proof, allow_hypotheses=True) == parse("q | p")


def test_rule_names_are_flexible():
    assert rule_from_name("Chand-splitting") is Rule.ChandSplitting
    assert rule_from_name("chandsplitting") is Rule.ChandSplitting
    with pytest.raises(ParseError):
        rule_from_name("Modus-ponens")


def test_there_are_23_rules():
    assert len(Rule) == 23
    assert len(CHOOSING) == 3


def test_format_round_trip(fixture_text):
    proof = parse_proof(fixture_text)
    assert parse_proof(format_proof(proof)) == proof


def test_derivation_lines_chain():
    step = unapply(Rule.PorCommutativity, parse("q | p"), Witness(path=()))
    assert step.premises == (parse("p | q"),)
    lines = derivation_lines(1, [step])
    proof = Proof((ProofLine(1, step.premises[0], hypothesis=True), *lines))
    assert check_proof(proof, allow_hypotheses=True) == parse("q | p")


def test_side_condition_error_on_chall_splitting():
    with pytest.raises((SideConditionError, RuleError)):
        apply_rule(Rule.ChallSplitting, [parse("all[a] x. p(x)")], Witness(cluster="a", const=0))


@given(small_cirquents(height=3))
def test_backward_then_forward_is_coherent(c):
    for step in backward_applications(c):
        assert step.conclusion == c
        if step.rule in CHOOSING:
            continue
        out = apply_rule(step.rule, step.premises, step.witness)
        assert alpha_eq(out, c), (step.rule, to_text(c), to_text(out))


@given(small_cirquents(height=3))
def test_each_backward_step_checks_as_a_line(c):
    for step in backward_applications(c):
        lines = [ProofLine(i + 1, p, hypothesis=True) for i, p in enumerate(step.premises)]
        n = len(lines)
        lines.append(ProofLine(n + 1, c, step.rule, tuple(range(1, n + 1)) if n > 1 else (1,)))
        assert check_step(Proof(tuple(lines)), n + 1, allow_hypotheses=True) is None, (
            step.rule, to_text(c))
