"""Corpus experiments: decide/oracle agreement, purification, rule
preservation and residue equivalence.  Reports are deterministic given
their inputs and seeds, so their JSON forms can be compared byte for byte.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, Sequence

from .calculus import CHOOSING, LOCAL, Rule, SideConditionError, RuleError, Step, Witness, unapply
from .corpus import RANDOM_SPEC, CorpusSpec, copycat_instance, random_cirquent, within_limits
from .decide import ACCEPT, Decider
from .oracle import OracleLimits, oracle_valid
from .purify import Overflow, is_pure, purify, rank
from .semantics import OWNER, Interpretation, Move, Run, eval_truth, residue, won
from .syntax import (
    CHAND, CHEXISTS, CHOR, Atom, Chall, Chand, Cirquent, Cluster, Const, clusters_of,
    constants_of, fresh_cluster, fresh_constant, free_vars, to_text, walk,
)

MAX_LISTED = 20   # mismatches listed in a report; the count is always exact


# --------------------------------------------------------------------------
# Agreement between decide and the oracle

@dataclass
class AgreementReport:
    total: int = 0
    accepted: int = 0
    valid: int = 0
    mismatches: int = 0
    examples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def to_dict(self) -> dict:
        return asdict(self)


def agreement(instances: Iterable[Cirquent], limits: OracleLimits = OracleLimits()) -> AgreementReport:
    decider = Decider(proofs=False, trace=False)
    rep = AgreementReport()
    for c in instances:
        accepted = decider.decide(c).verdict == ACCEPT
        valid = oracle_valid(c, limits)
        rep.total += 1
        rep.accepted += accepted
        rep.valid += valid
        if accepted != valid:
            rep.mismatches += 1
            if len(rep.examples) < MAX_LISTED:
                rep.examples.append({"cirquent": to_text(c), "decide": accepted, "oracle": valid})
    return rep


# --------------------------------------------------------------------------
# Purification

@dataclass
class PurityReport:
    total: int = 0
    impure: int = 0
    replay_failures: int = 0
    rank_increases: int = 0
    rewrites: int = 0
    rewrites_ranked: int = 0
    bound_checked: int = 0
    bound_violations: int = 0
    examples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.impure or self.replay_failures or self.rank_increases
                    or self.bound_violations)

    def to_dict(self) -> dict:
        return asdict(self)

    def _note(self, kind: str, c: Cirquent, detail: str = "") -> None:
        if len(self.examples) < MAX_LISTED:
            self.examples.append({"kind": kind, "cirquent": to_text(c), "detail": detail})


def _ranked(r) -> bool:
    return not isinstance(r, Overflow)


def purity(instances: Iterable[Cirquent]) -> PurityReport:
    rep = PurityReport()
    for c in instances:
        rep.total += 1
        res = purify(c)
        bad = is_pure(res.pure)
        if bad is not None:
            rep.impure += 1
            rep._note("impure", c, f"condition {bad}")
        try:
            replayed = res.replay()
        except RuleError as e:
            replayed = None
            rep._note("replay", c, str(e))
        if replayed != c:
            rep.replay_failures += 1
            if replayed is not None:
                rep._note("replay", c, to_text(replayed))
        for rw in res.stage_trace:
            rep.rewrites += 1
            before, after = rank(rw.before), rank(rw.after)
            if _ranked(before) and _ranked(after):
                rep.rewrites_ranked += 1
                if not after < before:
                    rep.rank_increases += 1
                    rep._note("rank", c, f"stage {rw.stage}: {to_text(rw.before)} -> {to_text(rw.after)}")
        r_in, r_out = rank(c), rank(res.pure)
        if _ranked(r_in) and _ranked(r_out):
            rep.bound_checked += 1
            if r_out > r_in:
                rep.bound_violations += 1
                rep._note("bound", c)
    return rep


# --------------------------------------------------------------------------
# Rule preservation

def backward_applications(c: Cirquent) -> Iterator[Step]:
    """Every application of every rule having `c` as its conclusion, up to the
    choice of constants (occurring ones plus one fresh) and of fresh clusters."""
    fresh = fresh_cluster(c)
    consts = sorted(constants_of(c)) + [fresh_constant(c)]

    def attempt(rule: Rule, w: Witness) -> Step | None:
        try:
            return unapply(rule, c, w)
        except (RuleError, SideConditionError):
            return None

    for path, sub in walk(c):
        for rule in sorted(LOCAL, key=str):
            if rule in (Rule.LeftChandCleansing, Rule.RightChandCleansing):
                if not isinstance(sub, Chand):
                    continue
                side = sub.left if rule is Rule.LeftChandCleansing else sub.right
                for q, n in walk(side):
                    if isinstance(n, Chand) and n.cluster == sub.cluster:
                        if (s := attempt(rule, Witness(path=path, inner=q))):
                            yield s
            elif rule is Rule.ChallCleansing:
                if not isinstance(sub, Chall):
                    continue
                for q, n in walk(sub.body):
                    if isinstance(n, Chall) and n.cluster == sub.cluster:
                        if (s := attempt(rule, Witness(path=path, inner=q))):
                            yield s
            else:
                cluster = fresh if rule in (Rule.Chandchotomy, Rule.Challchotomy,
                                            Rule.Chandallchotomy) else None
                if (s := attempt(rule, Witness(path=path, cluster=cluster))):
                    yield s
    for name, (kind, _) in sorted(clusters_of(c).items()):
        if kind == CHOR:
            for rule in (Rule.LeftChorChoosing, Rule.RightChorChoosing):
                if (s := attempt(rule, Witness(cluster=name))):
                    yield s
        elif kind == CHEXISTS:
            for a in consts:
                if (s := attempt(Rule.ChexistsChoosing, Witness(cluster=name, const=a))):
                    yield s
    if isinstance(c, Chand):
        if (s := attempt(Rule.ChandSplitting, Witness())):
            yield s
    if isinstance(c, Chall):
        if (s := attempt(Rule.ChallSplitting, Witness(const=fresh_constant(c)))):
            yield s


@dataclass
class PreservationReport:
    applications: int = 0
    per_rule: dict[str, int] = field(default_factory=dict)
    upward_checked: int = 0
    upward_violations: int = 0      # premises valid, conclusion invalid
    downward_checked: int = 0
    downward_violations: int = 0    # conclusion valid, some premise invalid (non-Choosing)
    examples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.upward_violations or self.downward_violations)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_rule"] = dict(sorted(self.per_rule.items()))
        return d


def _admissible(c: Cirquent, limits: OracleLimits) -> bool:
    return within_limits(c, limits.max_clusters, limits.max_domain)


def sample_applications(count: int, seed: int, spec: CorpusSpec = RANDOM_SPEC,
                        limits: OracleLimits = OracleLimits(), height: int = 4,
                        tries: int = 400, copycat: float = 0.4) -> list[Step]:
    """`count` rule applications spread as evenly over the rules as the random
    conclusions allow.  A `copycat` fraction of conclusions are implications
    between cluster variants, so that valid conclusions are common."""
    rng = random.Random(seed)
    rules = sorted(Rule, key=str)
    pools: dict[Rule, list[Step]] = {r: [] for r in rules}

    def refill() -> None:
        if rng.random() < copycat:
            c = copycat_instance(rng, spec, 2 + rng.randrange(2))
        else:
            c = random_cirquent(rng, spec, height)
        if free_vars(c) or not _admissible(c, limits):
            return
        for s in backward_applications(c):
            if all(_admissible(p, limits) for p in s.premises):
                pools[s.rule].append(s)

    out: list[Step] = []
    i = 0
    while len(out) < count and i < count * 4:
        rule = rules[i % len(rules)]
        i += 1
        for _ in range(tries):
            if pools[rule]:
                break
            refill()
        if pools[rule]:
            pool = pools[rule]
            out.append(pool.pop(rng.randrange(len(pool))))
    return out


def preservation(steps: Sequence[Step], limits: OracleLimits = OracleLimits()) -> PreservationReport:
    rep = PreservationReport()
    for s in steps:
        rep.applications += 1
        rep.per_rule[str(s.rule)] = rep.per_rule.get(str(s.rule), 0) + 1
        premises_valid = [oracle_valid(p, limits) for p in s.premises]
        conclusion_valid = oracle_valid(s.conclusion, limits)
        if all(premises_valid):
            rep.upward_checked += 1
            if not conclusion_valid:
                rep.upward_violations += 1
                _note_step(rep, "upward", s)
        if s.rule not in CHOOSING and conclusion_valid:
            rep.downward_checked += 1
            if not all(premises_valid):
                rep.downward_violations += 1
                _note_step(rep, "downward", s)
    return rep


def _note_step(rep: PreservationReport, kind: str, s: Step) -> None:
    if len(rep.examples) < MAX_LISTED:
        rep.examples.append({"kind": kind, "rule": str(s.rule),
                             "premises": [to_text(p) for p in s.premises],
                             "conclusion": to_text(s.conclusion)})


# --------------------------------------------------------------------------
# Residues

def _all_clusters(c: Cirquent) -> list[Cluster]:
    return [Cluster(kind, name) for name, (kind, _) in sorted(clusters_of(c).items())]


def _move(cl: Cluster, v: int) -> Move:
    return Move(OWNER[cl.kind], cl, v)


def all_runs(c: Cirquent, domain: Sequence[int]) -> Iterator[Run]:
    """Every legal run of `c` over `domain`, in every move order."""
    cls = _all_clusters(c)
    for size in range(len(cls) + 1):
        for chosen in itertools.combinations(cls, size):
            values = [(0, 1) if cl.kind in (CHAND, CHOR) else domain for cl in chosen]
            for vals in itertools.product(*values):
                moves = [_move(cl, v) for cl, v in zip(chosen, vals)]
                for order in itertools.permutations(moves):
                    yield Run(tuple(order))


def random_run(rng: random.Random, c: Cirquent, domain: Sequence[int]) -> Run:
    moves = []
    for cl in _all_clusters(c):
        if rng.random() < 0.7:
            v = rng.choice((0, 1) if cl.kind in (CHAND, CHOR) else domain)
            moves.append(_move(cl, v))
    rng.shuffle(moves)
    return Run(tuple(moves))


def relevant_atoms(c: Cirquent, domain: Sequence[int]) -> list[tuple[str, tuple[int, ...]]]:
    """Ground atoms that can occur in a residue of `c` with moves from `domain`."""
    keys = set()
    for _, n in walk(c):
        if isinstance(n, Atom):
            choices = [(a.value,) if isinstance(a, Const) else tuple(domain) for a in n.args]
            for args in itertools.product(*choices):
                keys.add((n.pred, args))
    return sorted(keys)


@dataclass
class ResidueReport:
    triples: int = 0
    violations: int = 0
    examples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return asdict(self)


def _check_triple(rep: ResidueReport, c: Cirquent, run: Run, interp: Interpretation) -> None:
    rep.triples += 1
    if won(c, run, interp) != eval_truth(residue(c, run), interp):
        rep.violations += 1
        if len(rep.examples) < MAX_LISTED:
            rep.examples.append({"cirquent": to_text(c), "run": str(run),
                                 "true_atoms": sorted(map(str, interp.true_atoms))})


def residue_random(count: int, seed: int, spec: CorpusSpec = RANDOM_SPEC) -> ResidueReport:
    rng = random.Random(seed)
    rep = ResidueReport()
    while rep.triples < count:
        c = random_cirquent(rng, spec)
        if free_vars(c):
            continue
        domain = sorted(constants_of(c) | {0, 1}) + [fresh_constant(c)]
        run = random_run(rng, c, domain)
        atoms = relevant_atoms(c, domain)
        interp = Interpretation(frozenset(a for a in atoms if rng.random() < 0.5))
        _check_triple(rep, c, run, interp)
    return rep


def residue_exhaustive(instances: Iterable[Cirquent]) -> ResidueReport:
    """Every legal run over {0, 1, fresh} and every interpretation of the
    relevant atoms, for each instance (meant for at most 3 clusters)."""
    rep = ResidueReport()
    for c in instances:
        domain = (0, 1, max(constants_of(c) | {1}) + 1)
        atoms = relevant_atoms(c, domain)
        interps = [Interpretation(frozenset(a for a, b in zip(atoms, bits) if b))
                   for bits in itertools.product((False, True), repeat=len(atoms))]
        for run in all_runs(c, domain):
            for interp in interps:
                _check_triple(rep, c, run, interp)
    return rep
