"""Rank, purity, and the eight-stage purification procedure.

Purification rewrites a cirquent conclusion-to-premise, one rule application
at a time, so that reading the log backwards derives the original cirquent
from its purification.  Choosing and Splitting are never used, which keeps
validity unchanged in both directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

from .calculus import (
    Proof, ProofLine, Rule, Step, Witness, apply_rule, derivation_lines, unapply,
)
from .syntax import (
    ROOT, Atom, Bot, Chall, Chand, Chexists, Chor, Cirquent, Pand, Path, Por, Top,
    cluster_names, fresh_cluster, subterm_at, surface_walk, walk,
)

# --------------------------------------------------------------------------
# Rank

TOWER_GUARD = 3          # largest tetration height materialized: 5^5^5
MAX_EXPONENT = 100_000   # largest k materialized in 5^k


@dataclass(frozen=True)
class Overflow:
    """A rank too large to materialize; `expr` says where it blew up."""

    expr: str

    def __str__(self):
        return f"overflow({self.expr})"


Rank = int | Overflow


def _magnitude(k: int) -> str:
    if k < 10 ** 12:
        return str(k)
    return f"~10^{int(k.bit_length() * math.log10(2))}"


def tetrate(base: int, height: int) -> int:
    value = base
    for _ in range(height - 1):
        value = base ** value
    return value


def rank(c: Cirquent, tower_guard: int = TOWER_GUARD, max_exponent: int = MAX_EXPONENT) -> Rank:
    """Termination measure: literals 1, choice sums, quantifiers +1,
    conjunction 5^k and disjunction a tower of k fives, k the children's sum."""
    if isinstance(c, (Top, Bot, Atom)):
        return 1
    if isinstance(c, (Chall, Chexists)):
        r = rank(c.body, tower_guard, max_exponent)
        return r if isinstance(r, Overflow) else r + 1
    left = rank(c.left, tower_guard, max_exponent)
    if isinstance(left, Overflow):
        return left
    right = rank(c.right, tower_guard, max_exponent)
    if isinstance(right, Overflow):
        return right
    k = left + right
    if isinstance(c, (Chand, Chor)):
        return k
    if isinstance(c, Pand):
        if k > max_exponent:
            return Overflow(f"5^{_magnitude(k)}")
        return 5 ** k
    if k > tower_guard:
        return Overflow(f"tower of {_magnitude(k)} fives")
    return tetrate(5, k)


# --------------------------------------------------------------------------
# Purity

def disjuncts(c: Cirquent) -> list[Cirquent]:
    """Components of a disjunction, flattened in left-to-right order."""
    if isinstance(c, Por):
        return disjuncts(c.left) + disjuncts(c.right)
    return [c]


def conjuncts(c: Cirquent) -> list[Cirquent]:
    if isinstance(c, Pand):
        return conjuncts(c.left) + conjuncts(c.right)
    return [c]


def complementary_pair(components: list[Cirquent]) -> tuple[int, int] | None:
    """(index of negated, index of positive) for the first complementary pair."""
    for i, a in enumerate(components):
        if not isinstance(a, Atom):
            continue
        for j in range(i + 1, len(components)):
            if components[j] == a.flip():
                return (i, j) if a.negated else (j, i)
    return None


def _surface_with_or_scope(c: Cirquent, under_or: bool = False) -> Iterator[tuple[Cirquent, bool]]:
    yield c, under_or
    if isinstance(c, (Pand, Por)):
        inner = under_or or isinstance(c, Por)
        yield from _surface_with_or_scope(c.left, inner)
        yield from _surface_with_or_scope(c.right, inner)


def _maximal_disjunctions(c: Cirquent) -> Iterator[Cirquent]:
    if isinstance(c, Por):
        yield c
        for d in disjuncts(c):
            yield from _maximal_disjunctions(d)
    elif isinstance(c, Pand):
        yield from _maximal_disjunctions(c.left)
        yield from _maximal_disjunctions(c.right)


def is_pure(c: Cirquent) -> int | None:
    """None if `c` is pure, else the lowest-numbered purity condition it violates.

    1 no surface F (unless c is F)         5 no surface T (unless c is T)
    2 no surface & under |                 6 a top-level conjunction has a conjunct
    3 no surface &[..] / all[..] under |     that is not &[..]- or all[..]-rooted
    4 no surface disjunction containing    7 c = A &[k] B: k not in A or B
      both A and ~A                        8 c = all[k] x. A: k not in A
    """
    surface = list(_surface_with_or_scope(c))
    if not isinstance(c, Bot) and any(isinstance(n, Bot) for n, _ in surface):
        return 1
    if any(isinstance(n, Pand) and under for n, under in surface):
        return 2
    if any(isinstance(n, (Chand, Chall)) and under for n, under in surface):
        return 3
    if any(complementary_pair(disjuncts(d)) for d in _maximal_disjunctions(c)):
        return 4
    if not isinstance(c, Top) and any(isinstance(n, Top) for n, _ in surface):
        return 5
    if isinstance(c, Pand) and all(isinstance(b, (Chand, Chall)) for b in conjuncts(c)):
        return 6
    if isinstance(c, Chand) and c.cluster in cluster_names(c.left) | cluster_names(c.right):
        return 7
    if isinstance(c, Chall) and c.cluster in cluster_names(c.body):
        return 8
    return None


# --------------------------------------------------------------------------
# Purification

@dataclass(frozen=True)
class StageRewrite:
    """One modification made by a stage; may span several rule applications."""

    stage: str
    before: Cirquent
    after: Cirquent
    steps: int


@dataclass
class PurificationResult:
    original: Cirquent
    pure: Cirquent
    derivation: list[Step]            # forward order: pure first, original last
    stage_trace: list[StageRewrite] = field(default_factory=list)

    def replay(self) -> Cirquent:
        """Re-derive the original from `pure` through the forward rules."""
        cur = self.pure
        for step in self.derivation:
            cur = apply_rule(step.rule, (cur,), step.witness)
        return cur


class _Purifier:
    def __init__(self, e: Cirquent, avoid: frozenset[str]):
        self.e = e
        self.avoid = set(avoid)
        self.backward: list[Step] = []
        self.trace: list[StageRewrite] = []

    def back(self, rule: Rule, path: Path, **kw) -> None:
        step = unapply(rule, self.e, Witness(path=path, **kw))
        self.backward.append(step)
        self.e = step.premises[0]

    def run_stage(self, label: str, fn) -> None:
        while True:
            before, n = self.e, len(self.backward)
            sub = fn()
            if sub is None:
                return
            self.trace.append(StageRewrite(sub, before, self.e, len(self.backward) - n))

    def surface(self) -> list[tuple[Path, Cirquent]]:
        return list(surface_walk(self.e))

    # Stage 1: drop F from disjunctions, collapse conjunctions with F
    def stage1(self):
        for path, n in self.surface():
            if isinstance(n, Por) and isinstance(n.right, Bot):
                self.back(Rule.PorIdentity, path)
                return "1"
            if isinstance(n, Por) and isinstance(n.left, Bot):
                self.back(Rule.PorCommutativity, path)
                self.back(Rule.PorIdentity, path)
                return "1"
        for path, n in self.surface():
            if isinstance(n, Pand) and isinstance(n.right, Bot):
                self.back(Rule.PandDomination, path)
                return "1"
            if isinstance(n, Pand) and isinstance(n.left, Bot):
                self.back(Rule.PandCommutativity, path)
                self.back(Rule.PandDomination, path)
                return "1"
        return None

    def _distribute(self, inner_type, rule, label):
        for path, n in self.surface():
            if isinstance(n, Por) and isinstance(n.left, inner_type):
                self.back(rule, path)
                return label
            if isinstance(n, Por) and isinstance(n.right, inner_type):
                self.back(Rule.PorCommutativity, path)
                self.back(rule, path)
                return label
        return None

    # Stage 2: push | under &
    def stage2(self):
        return self._distribute(Pand, Rule.PandDistribution, "2")

    # Stage 3: push | under &[..], then under all[..]
    def stage3(self):
        return (self._distribute(Chand, Rule.ChandDistribution, "3a")
                or self._distribute(Chall, Rule.ChallDistribution, "3b"))

    # Stage 4: disjunctions containing A and ~A become T
    def stage4(self):
        for path, n in self.surface():
            if isinstance(n, Por):
                pair = complementary_pair(disjuncts(n))
                if pair is not None:
                    self._trivialize(path, pair)
                    return "4"
        return None

    def _comb(self, path: Path) -> None:
        """Reassociate the disjunction at `path` into a right comb."""
        while True:
            n = subterm_at(self.e, path)
            if not isinstance(n, Por):
                return
            while isinstance(n.left, Por):
                self.back(Rule.PorAssociativity, path)
                n = subterm_at(self.e, path)
            path = path + ("r",)

    def _trivialize(self, path: Path, pair: tuple[int, int]) -> None:
        self._comb(path)
        count = len(disjuncts(subterm_at(self.e, path)))
        neg, pos = pair
        order = [i for i in range(count) if i not in pair] + [neg, pos]
        target = {leaf: rank for rank, leaf in enumerate(order)}
        current = list(range(count))
        # bubble sort by target position, one adjacent transposition at a time
        for end in range(count - 1, 0, -1):
            for k in range(end):
                if target[current[k]] > target[current[k + 1]]:
                    self._swap_adjacent(path + ("r",) * k, last=(k + 1 == count - 1))
                    current[k], current[k + 1] = current[k + 1], current[k]
        at = path + ("r",) * (count - 2)
        self.back(Rule.Trivialization, at)
        for k in range(count - 3, -1, -1):
            self.back(Rule.PorDomination, path + ("r",) * k)

    def _swap_adjacent(self, at: Path, last: bool) -> None:
        if last:
            self.back(Rule.PorCommutativity, at)
            return
        # L | (M | R)  ->  (M | R) | L  ->  M | (R | L)  ->  M | (L | R)
        self.back(Rule.PorCommutativity, at)
        self.back(Rule.PorAssociativity, at)
        self.back(Rule.PorCommutativity, at + ("r",))

    # Stage 5: absorb T
    def stage5(self):
        for path, n in self.surface():
            if isinstance(n, Por) and isinstance(n.right, Top):
                self.back(Rule.PorDomination, path)
                return "5"
            if isinstance(n, Por) and isinstance(n.left, Top):
                self.back(Rule.PorCommutativity, path)
                self.back(Rule.PorDomination, path)
                return "5"
        for path, n in self.surface():
            if isinstance(n, Pand) and isinstance(n.right, Top):
                self.back(Rule.PandIdentity, path)
                return "5"
            if isinstance(n, Pand) and isinstance(n.left, Top):
                self.back(Rule.PandCommutativity, path)
                self.back(Rule.PandIdentity, path)
                return "5"
        return None

    def _fresh(self) -> str:
        return fresh_cluster(self.e, avoid=self.avoid)

    # Stage 6: conjunctions of universally chosen parts become choices
    def stage6(self):
        for path, n in self.surface():
            if isinstance(n, Pand) and isinstance(n.left, Chand) and isinstance(n.right, Chand):
                self.back(Rule.Chandchotomy, path, cluster=self._fresh())
                return "6a"
        for path, n in self.surface():
            if isinstance(n, Pand) and isinstance(n.left, Chall) and isinstance(n.right, Chall):
                self.back(Rule.Challchotomy, path, cluster=self._fresh())
                return "6b"
        for path, n in self.surface():
            if isinstance(n, Pand) and isinstance(n.left, Chand) and isinstance(n.right, Chall):
                self.back(Rule.Chandallchotomy, path, cluster=self._fresh())
                return "6c"
            if isinstance(n, Pand) and isinstance(n.left, Chall) and isinstance(n.right, Chand):
                self.back(Rule.PandCommutativity, path)
                self.back(Rule.Chandallchotomy, path, cluster=self._fresh())
                return "6c"
        return None

    # Stage 7: a root &[k] loses inner &[k] occurrences
    def stage7(self):
        e = self.e
        if not isinstance(e, Chand):
            return None
        for q, n in walk(e.left):
            if isinstance(n, Chand) and n.cluster == e.cluster:
                self.back(Rule.LeftChandCleansing, ROOT, inner=q)
                return "7"
        for q, n in walk(e.right):
            if isinstance(n, Chand) and n.cluster == e.cluster:
                self.back(Rule.RightChandCleansing, ROOT, inner=q)
                return "7"
        return None

    # Stage 8: a root all[k] loses inner all[k] occurrences
    def stage8(self):
        e = self.e
        if not isinstance(e, Chall):
            return None
        for q, n in walk(e.body):
            if isinstance(n, Chall) and n.cluster == e.cluster:
                self.back(Rule.ChallCleansing, ROOT, inner=q)
                return "8"
        return None

    def run(self) -> None:
        for stage in (self.stage1, self.stage2, self.stage3, self.stage4,
                      self.stage5, self.stage6, self.stage7, self.stage8):
            self.run_stage(stage.__name__, stage)


def purify(c: Cirquent, avoid: frozenset[str] = frozenset()) -> PurificationResult:
    """Purify `c`; fresh clusters avoid the names in `avoid` as well as those in `c`."""
    p = _Purifier(c, frozenset(avoid) | cluster_names(c))
    p.run()
    derivation = []
    for step in reversed(p.backward):
        derivation.append(step)
    return PurificationResult(c, p.e, derivation, p.trace)


def derivation_fragment(result: PurificationResult) -> Proof:
    """The derivation as proof lines: the pure cirquent as hypothesis, then each step."""
    head = ProofLine(1, result.pure, hypothesis=True)
    return Proof((head, *derivation_lines(1, result.derivation)))
