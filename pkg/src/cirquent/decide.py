"""The recursive decision procedure, with proof extraction on acceptance.

Each call purifies its input, classifies the purification into one of the
Conditions 0-7, and recurses on cirquents of smaller rank.  An accepted
input comes with a proof: the child proofs, one joining Choosing or
Splitting step, then the purification derivation read forwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .calculus import (
    Proof, ProofLine, Rule, Witness, derivation_lines, reindex, resolve_cluster,
)
from .purify import complementary_pair, conjuncts, disjuncts, is_pure, purify
from .syntax import (
    Atom, Bot, Chall, Chand, Chexists, Chor, Cirquent, CirquentError, Const, Por, Top,
    canonical, cluster_names, constants_of, free_vars, fresh_constant, substitute, to_text,
)

ACCEPT = "accept"
REJECT = "reject"


class NotClosedError(CirquentError):
    pass


class ClassificationError(CirquentError):
    """A pure cirquent matched none of the conditions; this indicates a bug."""


@dataclass(frozen=True)
class Condition:
    """Which case of the decision procedure a pure cirquent falls under.

    `tag` is 0-7; `sub` refines Condition 7 into "7.0" .. "7.3".
    `chor` and `chexists` list the clusters whose resolution is tried, in order.
    """

    tag: int
    sub: str = ""
    cluster: str | None = None
    parts: tuple[Cirquent, ...] = ()
    chor: tuple[str, ...] = ()
    chexists: tuple[str, ...] = ()
    literals: tuple[Cirquent, ...] = ()
    index: int | None = None

    @property
    def label(self) -> str:
        return self.sub or str(self.tag)


def _is_nonlogical_literal(c: Cirquent) -> bool:
    return isinstance(c, Atom)


def _disjunction_choices(c: Cirquent) -> tuple[list[str], list[str], list[Cirquent]] | None:
    """Split a Condition-6 disjunction into chor clusters, chexists clusters and
    literals; None if `c` is not such a disjunction."""
    parts = disjuncts(c)
    if len(parts) < 2 or complementary_pair(parts) is not None:
        return None
    chor: list[str] = []
    chexists: list[str] = []
    literals = []
    for d in parts:
        if isinstance(d, Chor):
            if d.cluster not in chor:
                chor.append(d.cluster)
        elif isinstance(d, Chexists):
            if d.cluster not in chexists:
                chexists.append(d.cluster)
        elif _is_nonlogical_literal(d):
            literals.append(d)
        else:
            return None
    return chor, chexists, literals


def classify(f: Cirquent) -> Condition:
    """Classify a pure closed cirquent into Conditions 0-7."""
    violated = is_pure(f)
    if violated is not None:
        raise CirquentError(f"not pure: condition {violated} fails")
    if isinstance(f, Bot) or _is_nonlogical_literal(f):
        return Condition(0)
    if isinstance(f, Top):
        return Condition(1)
    if isinstance(f, Chor):
        return Condition(2, cluster=f.cluster, parts=(f.left, f.right))
    if isinstance(f, Chexists):
        return Condition(3, cluster=f.cluster, parts=(f.body,))
    if isinstance(f, Chand):
        return Condition(4, cluster=f.cluster, parts=(f.left, f.right))
    if isinstance(f, Chall):
        return Condition(5, cluster=f.cluster, parts=(f.body,))
    if isinstance(f, Por):
        split = _disjunction_choices(f)
        if split is not None:
            chor, chexists, literals = split
            return Condition(6, parts=tuple(disjuncts(f)), chor=tuple(chor),
                             chexists=tuple(chexists), literals=tuple(literals))
    else:
        parts = tuple(conjuncts(f))
        for e, b in enumerate(parts):
            if _is_nonlogical_literal(b):
                return Condition(7, "7.0", parts=parts, index=e)
            if isinstance(b, Chor):
                return Condition(7, "7.1", cluster=b.cluster, parts=parts, index=e)
            if isinstance(b, Chexists):
                return Condition(7, "7.2", cluster=b.cluster, parts=parts, index=e)
            split = _disjunction_choices(b) if isinstance(b, Por) else None
            if split is not None:
                chor, chexists, literals = split
                return Condition(7, "7.3", parts=parts, chor=tuple(chor),
                                 chexists=tuple(chexists), literals=tuple(literals), index=e)
    raise ClassificationError(f"no condition matches {to_text(f)}")


# --------------------------------------------------------------------------
# Children

@dataclass(frozen=True)
class Child:
    """One recursive subproblem together with the step that links it back."""

    cirquent: Cirquent
    rule: Rule
    witness: Witness


def instance_constants(f: Cirquent) -> list[int]:
    """Constants of `f` in increasing order, then one that does not occur in it."""
    return sorted(constants_of(f)) + [fresh_constant(f)]


def _chor_child(f: Cirquent, cluster: str, branch: int) -> Child:
    rule = Rule.RightChorChoosing if branch else Rule.LeftChorChoosing
    return Child(resolve_cluster(f, Chor, cluster, branch), rule, Witness(cluster=cluster))


def _chexists_child(f: Cirquent, cluster: str, a: int) -> Child:
    return Child(resolve_cluster(f, Chexists, cluster, a), Rule.ChexistsChoosing,
                 Witness(cluster=cluster, const=a))


def choosing_children(f: Cirquent, cond: Condition) -> Iterator[Child]:
    """Subproblems for the disjunctive conditions, in the procedure's order."""
    if cond.tag == 2 or cond.sub == "7.1":
        for branch in (0, 1):
            yield _chor_child(f, cond.cluster, branch)
    elif cond.tag == 3 or cond.sub == "7.2":
        for a in instance_constants(f):
            yield _chexists_child(f, cond.cluster, a)
    elif cond.tag == 6 or cond.sub == "7.3":
        for branch in (0, 1):
            for b in cond.chor:
                yield _chor_child(f, b, branch)
        for a in instance_constants(f):
            for c in cond.chexists:
                yield _chexists_child(f, c, a)


# --------------------------------------------------------------------------
# The procedure

@dataclass
class TraceNode:
    cirquent: Cirquent
    pure: Cirquent
    condition: str
    verdict: str
    children: list[TraceNode] = field(default_factory=list)
    cached: bool = False

    def to_dict(self) -> dict:
        return {
            "cirquent": to_text(self.cirquent),
            "pure": to_text(self.pure),
            "condition": self.condition,
            "verdict": self.verdict,
            "cached": self.cached,
            "children": [ch.to_dict() for ch in self.children],
        }

    def lines(self, depth: int = 0) -> Iterator[str]:
        mark = " (cached)" if self.cached else ""
        yield (f"{'  ' * depth}[{self.condition}] {self.verdict.upper()}{mark}: "
               f"{to_text(self.cirquent)}  =>  {to_text(self.pure)}")
        for ch in self.children:
            yield from ch.lines(depth + 1)


@dataclass
class DecisionOutcome:
    verdict: str
    proof: Proof | None
    trace: TraceNode | None

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPT


@dataclass
class _Result:
    verdict: str
    lines: list[ProofLine] | None
    trace: TraceNode | None


class Decider:
    """Runs the procedure, memoizing subresults.

    With `proofs=False` only verdicts are computed and the memo is keyed by
    alpha-canonical form, so a single Decider can be reused across many inputs.
    """

    def __init__(self, proofs: bool = True, trace: bool = True):
        self.proofs = proofs
        self.want_trace = trace
        self.memo: dict[Cirquent, _Result] = {}
        self.avoid: frozenset[str] = frozenset()

    def decide(self, e: Cirquent) -> DecisionOutcome:
        if free_vars(e):
            raise NotClosedError(f"free variables {sorted(free_vars(e))} in input")
        if self.proofs:
            # fresh clusters must not clash with any cluster named in the input
            self.avoid = cluster_names(e)
            self.memo = {}
        r = self._run(e)
        proof = Proof(tuple(r.lines)) if r.lines is not None else None
        return DecisionOutcome(r.verdict, proof, r.trace)

    def _key(self, e: Cirquent) -> Cirquent:
        return e if self.proofs else canonical(e)

    def _run(self, e: Cirquent) -> _Result:
        key = self._key(e)
        hit = self.memo.get(key)
        if hit is not None:
            if hit.trace is None:
                return hit
            t = hit.trace
            return _Result(hit.verdict, hit.lines,
                           TraceNode(t.cirquent, t.pure, t.condition, t.verdict, [], True))
        r = self._solve(e)
        self.memo[key] = r
        return r

    def _node(self, e, f, cond, verdict, children) -> TraceNode | None:
        if not self.want_trace:
            return None
        return TraceNode(e, f, cond.label, verdict, [ch for ch in children if ch is not None])

    def _solve(self, e: Cirquent) -> _Result:
        pr = purify(e, self.avoid) if self.proofs else purify(e)
        f = pr.pure
        cond = classify(f)

        def finish(verdict: str, lines: list[ProofLine] | None, kids) -> _Result:
            if verdict == ACCEPT and self.proofs:
                lines = lines + derivation_lines(len(lines), pr.derivation)
            else:
                lines = None
            return _Result(verdict, lines, self._node(e, f, cond, verdict, kids))

        if cond.tag == 0 or cond.sub == "7.0":
            return finish(REJECT, None, [])
        if cond.tag == 1:
            return finish(ACCEPT, [ProofLine(1, f)], [])
        if cond.tag == 4:
            left = self._run(cond.parts[0])
            if left.verdict == REJECT:
                return finish(REJECT, None, [left.trace])
            right = self._run(cond.parts[1])
            if right.verdict == REJECT:
                return finish(REJECT, None, [left.trace, right.trace])
            lines = None
            if self.proofs:
                n0, n1 = len(left.lines), len(right.lines)
                lines = list(left.lines) + reindex(right.lines, n0)
                lines.append(ProofLine(n0 + n1 + 1, f, Rule.ChandSplitting, (n0, n0 + n1),
                                       Witness(cluster=cond.cluster)))
            return finish(ACCEPT, lines, [left.trace, right.trace])
        if cond.tag == 5:
            a = fresh_constant(f)
            child = self._run(substitute(f.body, f.var, Const(a)))
            lines = None
            if child.verdict == ACCEPT and self.proofs:
                n = len(child.lines)
                lines = list(child.lines)
                lines.append(ProofLine(n + 1, f, Rule.ChallSplitting, (n,),
                                       Witness(cluster=cond.cluster, const=a)))
            return finish(child.verdict, lines, [child.trace])

        kids = []
        for ch in choosing_children(f, cond):
            r = self._run(ch.cirquent)
            kids.append(r.trace)
            if r.verdict == ACCEPT:
                lines = None
                if self.proofs:
                    n = len(r.lines)
                    lines = list(r.lines)
                    lines.append(ProofLine(n + 1, f, ch.rule, (n,), ch.witness))
                return finish(ACCEPT, lines, kids)
        return finish(REJECT, None, kids)


def decide(e: Cirquent, proofs: bool = True, trace: bool = True) -> DecisionOutcome:
    """Decide provability (equivalently validity) of the closed cirquent `e`."""
    return Decider(proofs=proofs, trace=trace).decide(e)
