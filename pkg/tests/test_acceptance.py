"""Acceptance criteria 1-8, each at its stated tolerance."""

import random
import subprocess
import sys
import time

from conftest import FIXTURE, record
from cirquent.calculus import check_proof, parse_proof
from cirquent.corpus import RANDOM_SPEC, CorpusSpec, exhaustive, random_cirquent, random_corpus
from cirquent.decide import ACCEPT, REJECT, decide
from cirquent.experiments import (
    agreement, preservation, purity, residue_exhaustive, residue_random, sample_applications,
)
from cirquent.purify import rank
from cirquent.syntax import cluster_kinds, free_vars, parse, to_text

THEOREM = parse("(all[a] x. ~p(x) & all[a] x. ~p(x)) | ex[c] x. p(x)")
MERGED = "ex[a] x. p(x) | ex[a] x. p(x) -> ex[c] x. p(x)"
DISTINCT = "ex[a] x. p(x) | ex[b] x. p(x) -> ex[c] x. p(x)"


def test_criterion_1_fixture_proof():
    start = time.perf_counter()
    proof = parse_proof(FIXTURE.read_text())
    theorem = check_proof(proof)
    elapsed = time.perf_counter() - start
    ok = theorem == THEOREM and elapsed < 1.0
    record(1, ok, f"{len(proof)} lines, theorem {to_text(theorem)}, {elapsed:.3f}s")
    assert ok


def test_criterion_2_example_verdicts():
    start = time.perf_counter()
    merged = decide(parse(MERGED))
    t_merged = time.perf_counter() - start
    rechecks = merged.verdict == ACCEPT and check_proof(merged.proof) == parse(MERGED)
    start = time.perf_counter()
    distinct = decide(parse(DISTINCT))
    t_distinct = time.perf_counter() - start
    ok = rechecks and distinct.verdict == REJECT and max(t_merged, t_distinct) < 5.0
    record(2, ok, f"merged {merged.verdict} ({len(merged.proof)}-line proof rechecks: {rechecks}), "
                  f"distinct {distinct.verdict}, {t_merged:.2f}s / {t_distinct:.2f}s")
    assert ok


def test_criterion_3_oracle_agreement():
    start = time.perf_counter()
    full = agreement(exhaustive(CorpusSpec()))
    rand = agreement(random_corpus(count=1000, seed=0))
    elapsed = time.perf_counter() - start
    ok = full.ok and rand.ok and full.total == 323_492 and rand.total == 1000 and elapsed < 600
    record(3, ok, f"exhaustive {full.total - full.mismatches}/{full.total} agree "
                  f"({full.valid} valid), random {rand.total - rand.mismatches}/{rand.total} "
                  f"({rand.valid} valid), {elapsed:.0f}s")
    assert ok, (full.examples, rand.examples)


def test_criterion_4_purification():
    rep = purity(random_corpus(count=1000, seed=1))
    record(4, rep.ok and rep.total == 1000,
           f"{rep.total} instances: impure {rep.impure}, replay failures {rep.replay_failures}, "
           f"rank increases {rep.rank_increases}/{rep.rewrites_ranked} ranked rewrites, "
           f"bound violations {rep.bound_violations}/{rep.bound_checked}")
    assert rep.ok and rep.total == 1000, rep.examples


def _small_random(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        c = random_cirquent(rng, RANDOM_SPEC, 4)
        if not free_vars(c) and len(cluster_kinds(c)) <= 3:
            out.append(c)
    return out


def test_criterion_5_residue_equivalence():
    rand = residue_random(1000, seed=2)
    # every height-3 instance has at most 3 clusters
    full = residue_exhaustive(exhaustive(CorpusSpec()))
    extra = residue_exhaustive(_small_random(1000, seed=3))
    ok = rand.ok and full.ok and extra.ok and rand.triples == 1000
    record(5, ok, f"random {rand.triples} triples, exhaustive runs {full.triples} + "
                  f"{extra.triples} triples, violations {rand.violations + full.violations + extra.violations}")
    assert ok, (rand.examples, full.examples, extra.examples)


def test_criterion_6_rule_preservation():
    rep = preservation(sample_applications(500, seed=0))
    ok = rep.ok and rep.applications == 500
    record(6, ok, f"{rep.applications} applications over {len(rep.per_rule)} rules: "
                  f"upward {rep.upward_violations}/{rep.upward_checked}, "
                  f"downward {rep.downward_violations}/{rep.downward_checked} violations")
    assert ok, rep.examples


def test_criterion_7_rank_ground_truths():
    cases = {"p(0)": 1, "~q": 1, "T": 1, "p & q": 25, "p | q": 3125, "p &[a] q": 2,
             "all[a] x. p(x)": 2}
    got = {text: rank(parse(text)) for text in cases}
    ok = all(type(got[t]) is int and got[t] == v for t, v in cases.items())
    record(7, ok, ", ".join(f"rank({t})={got[t]}" for t in cases))
    assert ok


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "cirquent.cli", *argv],
                          capture_output=True, check=False).stdout


def test_criterion_8_determinism():
    commands = [
        ("--format", "json", "decide", "--trace", "-e", MERGED),
        ("--format", "json", "decide", "--trace", "-e", DISTINCT),
        ("--format", "json", "corpus", "--mode", "agreement", "--count", "200", "--seed", "7"),
        ("--format", "json", "corpus", "--mode", "preservation", "--count", "50", "--seed", "7"),
    ]
    same = [_cli(*cmd) == _cli(*cmd) for cmd in commands]
    nonempty = all(_cli(*cmd) for cmd in commands[:1])
    ok = all(same) and nonempty
    record(8, ok, f"{sum(same)}/{len(same)} commands byte-identical across two processes")
    assert ok
