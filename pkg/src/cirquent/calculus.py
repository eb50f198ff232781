"""The proof system: the axiom T, the inference rules, and a proof checker.

Every rule is implemented in the conclusion-to-premise direction
(`unapply`), which is deterministic once a witness fixes the rewrite site and
any fresh names.  The forward direction (`apply_rule`) builds a candidate
conclusion and then confirms it by running the backward direction, so side
conditions live in one place.

Structural comparisons are up to renaming of bound variables only;
associativity and commutativity are rules, never built into matching.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .syntax import (
    BOT, CHEXISTS, CHOR, ROOT, TOP, Atom, Bot, Chall, Chand, Chexists, Chor,
    Cirquent, CirquentError, Const, Pand, ParseError, Path, Por, Top, Var,
    alpha_eq, all_vars, canonical, cluster_names, clusters_of, constants_of, format_path,
    free_vars, fresh_constant, fresh_var, map_terms, parse, parse_path, rename_bound,
    replace_at, subterm_at, substitute, to_text, walk, PathError, CaptureError, is_closed,
)


class Rule(str, Enum):
    PorCommutativity = "PorCommutativity"
    PandCommutativity = "PandCommutativity"
    PorAssociativity = "PorAssociativity"
    PandAssociativity = "PandAssociativity"
    PorIdentity = "PorIdentity"
    PandIdentity = "PandIdentity"
    PorDomination = "PorDomination"
    PandDomination = "PandDomination"
    LeftChorChoosing = "LeftChorChoosing"
    RightChorChoosing = "RightChorChoosing"
    ChexistsChoosing = "ChexistsChoosing"
    LeftChandCleansing = "LeftChandCleansing"
    RightChandCleansing = "RightChandCleansing"
    ChallCleansing = "ChallCleansing"
    PandDistribution = "PandDistribution"
    ChandDistribution = "ChandDistribution"
    ChallDistribution = "ChallDistribution"
    Trivialization = "Trivialization"
    Chandchotomy = "Chandchotomy"
    Challchotomy = "Challchotomy"
    Chandallchotomy = "Chandallchotomy"
    ChandSplitting = "ChandSplitting"
    ChallSplitting = "ChallSplitting"

    def __str__(self):
        return self.value


CHOOSING = frozenset({Rule.LeftChorChoosing, Rule.RightChorChoosing, Rule.ChexistsChoosing})
SPLITTING = frozenset({Rule.ChandSplitting, Rule.ChallSplitting})
CHOTOMY = frozenset({Rule.Chandchotomy, Rule.Challchotomy, Rule.Chandallchotomy})
CLEANSING = frozenset({Rule.LeftChandCleansing, Rule.RightChandCleansing, Rule.ChallCleansing})
LOCAL = frozenset(Rule) - CHOOSING - SPLITTING


def premise_count(rule: Rule) -> int:
    return 2 if rule is Rule.ChandSplitting else 1


def _normalize_rule_name(name: str) -> str:
    return re.sub(r"[^a-z]", "", name.lower())


_RULE_BY_KEY = {_normalize_rule_name(r.value): r for r in Rule}


def rule_from_name(name: str) -> Rule:
    """Accepts ``PandIdentity`` as well as spellings like ``Pand-identity``."""
    try:
        return _RULE_BY_KEY[_normalize_rule_name(name)]
    except KeyError:
        raise ParseError(f"unknown rule {name!r}") from None


class RuleError(CirquentError):
    """The rule does not apply to the given cirquent(s) with the given witness."""


class SideConditionError(RuleError):
    pass


@dataclass(frozen=True)
class Witness:
    """Parameters pinning down one rule application.

    path     rewrite site (context rules)
    inner    for cleansing: position of the eliminated occurrence, relative to
             the child of the node at `path` that contains it
    cluster  cluster chosen on (Choosing), introduced (Chotomy, Splitting)
    branch   0/1 for chor choosing
    const    constant for Chexists-choosing and Chall-splitting
    var      bound variable introduced by Chall-splitting; for Chall-cleansing,
             the conclusion's outer bound variable
    material subcirquent a forward application introduces from nothing
    holes    forward Choosing: (path in premise, chosen-on subcirquent) pairs
    """

    path: Path | None = None
    inner: Path | None = None
    cluster: str | None = None
    branch: int | None = None
    const: int | None = None
    var: str | None = None
    material: Cirquent | None = field(default=None, compare=False)
    holes: tuple[tuple[Path, Cirquent], ...] | None = field(default=None, compare=False)

    def to_text(self) -> str:
        parts = []
        if self.path is not None:
            parts.append(f"path={format_path(self.path)}")
        if self.inner is not None:
            parts.append(f"inner={format_path(self.inner)}")
        if self.cluster is not None:
            parts.append(f"cluster={self.cluster}")
        if self.branch is not None:
            parts.append(f"branch={self.branch}")
        if self.const is not None:
            parts.append(f"const={self.const}")
        if self.var is not None:
            parts.append(f"var={self.var}")
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> Witness:
        kw: dict = {}
        for item in text.split():
            key, sep, value = item.partition("=")
            if not sep:
                raise ParseError(f"bad witness item {item!r}")
            if key in ("path", "inner"):
                kw[key] = parse_path(value)
            elif key == "cluster" or key == "var":
                kw[key] = value
            elif key in ("branch", "const"):
                if not value.isdigit():
                    raise ParseError(f"witness {key} must be a numeral, got {value!r}")
                kw[key] = int(value)
            else:
                raise ParseError(f"unknown witness key {key!r}")
        if kw.get("branch") not in (None, 0, 1):
            raise ParseError("branch must be 0 or 1")
        return cls(**kw)


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise RuleError(message)


def resolve_cluster(c: Cirquent, node_type: type, cluster: str, value: int) -> Cirquent:
    """Replace every `node_type` occurrence in `cluster` by its chosen component."""
    if isinstance(c, node_type) and c.cluster == cluster:
        if isinstance(c, (Chor, Chand)):
            nxt = c.right if value else c.left
        else:
            nxt = substitute(c.body, c.var, Const(value))
        return resolve_cluster(nxt, node_type, cluster, value)
    if isinstance(c, (Pand, Por)):
        return type(c)(resolve_cluster(c.left, node_type, cluster, value),
                       resolve_cluster(c.right, node_type, cluster, value))
    if isinstance(c, (Chand, Chor)):
        return type(c)(c.cluster, resolve_cluster(c.left, node_type, cluster, value),
                       resolve_cluster(c.right, node_type, cluster, value))
    if isinstance(c, (Chall, Chexists)):
        return type(c)(c.cluster, c.var, resolve_cluster(c.body, node_type, cluster, value))
    return c


def outermost(c: Cirquent, node_type: type, cluster: str,
              path: Path = ROOT) -> Iterator[tuple[Path, Cirquent]]:
    if isinstance(c, node_type) and c.cluster == cluster:
        yield path, c
        return
    if isinstance(c, (Pand, Por, Chand, Chor)):
        yield from outermost(c.left, node_type, cluster, path + ("l",))
        yield from outermost(c.right, node_type, cluster, path + ("r",))
    elif isinstance(c, (Chall, Chexists)):
        yield from outermost(c.body, node_type, cluster, path + ("b",))


# --------------------------------------------------------------------------
# Local rewrites, conclusion-side subcirquent -> premise-side subcirquent.
# Each returns (premise subcirquent, material for the forward direction).

def _down_local(rule: Rule, sub: Cirquent, w: Witness, whole: Cirquent):
    R = rule
    if R is Rule.PorCommutativity:
        _expect(isinstance(sub, Por), "not a disjunction")
        return Por(sub.right, sub.left), None
    if R is Rule.PandCommutativity:
        _expect(isinstance(sub, Pand), "not a conjunction")
        return Pand(sub.right, sub.left), None
    if R is Rule.PorAssociativity:
        _expect(isinstance(sub, Por) and isinstance(sub.left, Por), "not of the form (A|B)|C")
        return Por(sub.left.left, Por(sub.left.right, sub.right)), None
    if R is Rule.PandAssociativity:
        _expect(isinstance(sub, Pand) and isinstance(sub.left, Pand), "not of the form (A&B)&C")
        return Pand(sub.left.left, Pand(sub.left.right, sub.right)), None
    if R is Rule.PorIdentity:
        _expect(isinstance(sub, Por) and isinstance(sub.right, Bot), "not of the form A|F")
        return sub.left, None
    if R is Rule.PandIdentity:
        _expect(isinstance(sub, Pand) and isinstance(sub.right, Top), "not of the form A&T")
        return sub.left, None
    if R is Rule.PorDomination:
        _expect(isinstance(sub, Por) and isinstance(sub.right, Top), "not of the form A|T")
        return TOP, sub.left
    if R is Rule.PandDomination:
        _expect(isinstance(sub, Pand) and isinstance(sub.right, Bot), "not of the form A&F")
        return BOT, sub.left
    if R is Rule.Trivialization:
        _expect(isinstance(sub, Por) and isinstance(sub.left, Atom) and isinstance(sub.right, Atom)
                and sub.left.negated and sub.right == sub.left.flip(),
                "not of the form ~A|A for an atom A")
        return TOP, sub.right
    if R is Rule.PandDistribution:
        _expect(isinstance(sub, Por) and isinstance(sub.left, Pand), "not of the form (A&B)|C")
        a, b, c = sub.left.left, sub.left.right, sub.right
        return Pand(Por(a, c), Por(b, c)), None
    if R is Rule.ChandDistribution:
        _expect(isinstance(sub, Por) and isinstance(sub.left, Chand), "not of the form (A&[c]B)|C")
        k, a, b, c = sub.left.cluster, sub.left.left, sub.left.right, sub.right
        return Chand(k, Por(a, c), Por(b, c)), None
    if R is Rule.ChallDistribution:
        _expect(isinstance(sub, Por) and isinstance(sub.left, Chall), "not of the form all[c]x.A | B")
        q, b = sub.left, sub.right
        if q.var in free_vars(b):
            q = rename_bound(q, fresh_var(sub))
        return Chall(q.cluster, q.var, Por(q.body, b)), None
    if R in (Rule.LeftChandCleansing, Rule.RightChandCleansing):
        _expect(isinstance(sub, Chand), "not a choice conjunction")
        _expect(w.inner is not None, "cleansing needs an inner position")
        side = sub.left if R is Rule.LeftChandCleansing else sub.right
        try:
            node = subterm_at(side, w.inner)
        except PathError:
            raise RuleError("inner position does not exist") from None
        _expect(isinstance(node, Chand) and node.cluster == sub.cluster,
                f"no &[{sub.cluster}] occurrence at the inner position")
        if R is Rule.LeftChandCleansing:
            return Chand(sub.cluster, replace_at(side, w.inner, node.left), sub.right), node.right
        return Chand(sub.cluster, sub.left, replace_at(side, w.inner, node.right)), node.left
    if R is Rule.ChallCleansing:
        _expect(isinstance(sub, Chall), "not a choice universal")
        _expect(w.inner is not None, "cleansing needs an inner position")
        try:
            node = subterm_at(sub.body, w.inner)
        except PathError:
            raise RuleError("inner position does not exist") from None
        _expect(isinstance(node, Chall) and node.cluster == sub.cluster,
                f"no all[{sub.cluster}] occurrence at the inner position")
        return _chall_cleanse(sub, w.inner), node
    if R in CHOTOMY:
        _expect(w.cluster is not None, "chotomy needs the new cluster")
        return _down_chotomy(R, sub, w.cluster), None
    raise RuleError(f"{rule} is not a context rule")


def _binders_on_path(c: Cirquent, path: Path) -> set[str]:
    out = set()
    for step in path:
        if isinstance(c, (Chall, Chexists)):
            out.add(c.var)
        c = subterm_at(c, (step,))
    return out


def _chall_cleanse(sub: Chall, inner: Path) -> Cirquent:
    x, body = sub.var, sub.body
    node = subterm_at(body, inner)
    if x not in _binders_on_path(body, inner):
        try:
            return Chall(sub.cluster, x, replace_at(body, inner, substitute(node.body, node.var, Var(x))))
        except CaptureError:
            pass
    x2 = fresh_var(sub)
    body2 = substitute(body, x, Var(x2))
    node2 = subterm_at(body2, inner)
    return Chall(sub.cluster, x2, replace_at(body2, inner, substitute(node2.body, node2.var, Var(x2))))


def _down_chotomy(rule: Rule, sub: Cirquent, c: str) -> Cirquent:
    _expect(isinstance(sub, Pand), "not a conjunction")
    if rule is Rule.Chandchotomy:
        _expect(isinstance(sub.left, Chand) and isinstance(sub.right, Chand),
                "not of the form A&[a]B & C&[b]D")
        ab, cd = sub.left, sub.right
        a, A, B = ab.cluster, ab.left, ab.right
        b, C, D = cd.cluster, cd.left, cd.right
        return Chand(c, Chand(a, Pand(A, cd), Pand(B, cd)), Chand(b, Pand(ab, C), Pand(ab, D)))
    if rule is Rule.Challchotomy:
        _expect(isinstance(sub.left, Chall) and isinstance(sub.right, Chall),
                "not of the form all[a]x.A & all[b]y.B")
        p, q = sub.left, sub.right
        if p.var in free_vars(q):
            p = rename_bound(p, fresh_var(sub))
        if q.var in free_vars(p):
            q = rename_bound(q, fresh_var(sub, p))
        return Chand(c, Chall(p.cluster, p.var, Pand(p.body, q)), Chall(q.cluster, q.var, Pand(p, q.body)))
    _expect(isinstance(sub.left, Chand) and isinstance(sub.right, Chall),
            "not of the form A&[a]B & all[b]x.C")
    ab, q = sub.left, sub.right
    if q.var in free_vars(ab):
        q = rename_bound(q, fresh_var(sub))
    return Chand(c, Chand(ab.cluster, Pand(ab.left, q), Pand(ab.right, q)),
                 Chall(q.cluster, q.var, Pand(ab, q.body)))


def _up_local(rule: Rule, sub: Cirquent, w: Witness) -> Cirquent:
    """Candidate conclusion-side subcirquent; confirmed by the caller."""
    R = rule
    if R is Rule.PorCommutativity:
        _expect(isinstance(sub, Por), "not a disjunction")
        return Por(sub.right, sub.left)
    if R is Rule.PandCommutativity:
        _expect(isinstance(sub, Pand), "not a conjunction")
        return Pand(sub.right, sub.left)
    if R is Rule.PorAssociativity:
        _expect(isinstance(sub, Por) and isinstance(sub.right, Por), "not of the form A|(B|C)")
        return Por(Por(sub.left, sub.right.left), sub.right.right)
    if R is Rule.PandAssociativity:
        _expect(isinstance(sub, Pand) and isinstance(sub.right, Pand), "not of the form A&(B&C)")
        return Pand(Pand(sub.left, sub.right.left), sub.right.right)
    if R is Rule.PorIdentity:
        return Por(sub, BOT)
    if R is Rule.PandIdentity:
        return Pand(sub, TOP)
    if R in (Rule.PorDomination, Rule.PandDomination, Rule.Trivialization):
        _expect(w.material is not None, f"{rule} needs the introduced subcirquent")
        if R is Rule.PorDomination:
            _expect(isinstance(sub, Top), "not T")
            return Por(w.material, TOP)
        if R is Rule.PandDomination:
            _expect(isinstance(sub, Bot), "not F")
            return Pand(w.material, BOT)
        _expect(isinstance(sub, Top), "not T")
        _expect(isinstance(w.material, Atom), "Trivialization needs a nonlogical atom")
        atom = w.material.positive()
        return Por(atom.flip(), atom)
    if R is Rule.PandDistribution:
        _expect(isinstance(sub, Pand) and isinstance(sub.left, Por) and isinstance(sub.right, Por),
                "not of the form (A|C)&(B|C)")
        return Por(Pand(sub.left.left, sub.right.left), sub.left.right)
    if R is Rule.ChandDistribution:
        _expect(isinstance(sub, Chand) and isinstance(sub.left, Por) and isinstance(sub.right, Por),
                "not of the form (A|C)&[c](B|C)")
        return Por(Chand(sub.cluster, sub.left.left, sub.right.left), sub.left.right)
    if R is Rule.ChallDistribution:
        _expect(isinstance(sub, Chall) and isinstance(sub.body, Por), "not of the form all[c]x.(A|B)")
        if sub.var in free_vars(sub.body.right):
            raise SideConditionError(f"{sub.var} occurs free in the right disjunct")
        return Por(Chall(sub.cluster, sub.var, sub.body.left), sub.body.right)
    if R in (Rule.LeftChandCleansing, Rule.RightChandCleansing):
        _expect(isinstance(sub, Chand), "not a choice conjunction")
        _expect(w.inner is not None and w.material is not None,
                "cleansing needs an inner position and the introduced subcirquent")
        side = sub.left if R is Rule.LeftChandCleansing else sub.right
        try:
            hole = subterm_at(side, w.inner)
        except PathError:
            raise RuleError("inner position does not exist") from None
        if R is Rule.LeftChandCleansing:
            return Chand(sub.cluster, replace_at(side, w.inner, Chand(sub.cluster, hole, w.material)), sub.right)
        return Chand(sub.cluster, sub.left, replace_at(side, w.inner, Chand(sub.cluster, w.material, hole)))
    if R is Rule.ChallCleansing:
        _expect(isinstance(sub, Chall), "not a choice universal")
        _expect(w.inner is not None and isinstance(w.material, Chall),
                "cleansing needs an inner position and the introduced quantifier")
        try:
            out = Chall(sub.cluster, sub.var, replace_at(sub.body, w.inner, w.material))
        except PathError:
            raise RuleError("inner position does not exist") from None
        if w.var is not None and w.var != out.var:
            # restore the binder name the backward step had to change
            try:
                out = rename_bound(out, w.var)
            except CaptureError:
                pass
        return out
    if R in CHOTOMY:
        _expect(isinstance(sub, Chand), "not a choice conjunction")
        if R is Rule.Challchotomy:
            _expect(isinstance(sub.left, Chall) and isinstance(sub.left.body, Pand),
                    "not of the Challchotomy premise shape")
            p = sub.left
            return Pand(Chall(p.cluster, p.var, p.body.left), p.body.right)
        _expect(isinstance(sub.left, Chand) and isinstance(sub.left.left, Pand),
                "not of the chotomy premise shape")
        a = sub.left
        return Pand(Chand(a.cluster, a.left.left, a.right.left if isinstance(a.right, Pand)
                          else a.right), a.left.right)
    raise RuleError(f"{rule} is not a context rule")


# --------------------------------------------------------------------------
# Backward and forward application

@dataclass(frozen=True)
class Step:
    """One rule application: premises above, conclusion below."""

    rule: Rule
    premises: tuple[Cirquent, ...]
    conclusion: Cirquent
    witness: Witness


def _unapply(rule: Rule, conclusion: Cirquent, w: Witness):
    """(premises, forward witness, side-condition message or None)."""
    if rule in LOCAL:
        _expect(w.path is not None, "context rules need a rewrite position")
        try:
            sub = subterm_at(conclusion, w.path)
        except PathError:
            raise RuleError(f"position {format_path(w.path)} does not exist") from None
        premise_sub, material = _down_local(rule, sub, w, conclusion)
        side = None
        if rule in CHOTOMY and w.cluster in cluster_names(conclusion):
            side = f"cluster {w.cluster} occurs in the conclusion"
        fw = replace(w, material=material)
        if rule is Rule.ChallCleansing:
            fw = replace(fw, var=sub.var)
        return (replace_at(conclusion, w.path, premise_sub),), fw, side

    if rule in (Rule.LeftChorChoosing, Rule.RightChorChoosing, Rule.ChexistsChoosing):
        _expect(w.cluster is not None, "Choosing needs a cluster")
        node_type = Chexists if rule is Rule.ChexistsChoosing else Chor
        holes = tuple(outermost(conclusion, node_type, w.cluster))
        _expect(bool(holes), f"no occurrence of cluster {w.cluster} to choose on")
        if rule is Rule.ChexistsChoosing:
            _expect(w.const is not None, "Chexists-choosing needs a constant")
            value = w.const
        else:
            value = 0 if rule is Rule.LeftChorChoosing else 1
        premise = resolve_cluster(conclusion, node_type, w.cluster, value)
        branch = None if rule is Rule.ChexistsChoosing else value
        return (premise,), replace(w, branch=branch, holes=holes), None

    if rule is Rule.ChandSplitting:
        _expect(isinstance(conclusion, Chand), "conclusion is not a choice conjunction")
        _expect(w.cluster in (None, conclusion.cluster), "cluster does not match the conclusion")
        c = conclusion.cluster
        side = None
        if c in cluster_names(conclusion.left) | cluster_names(conclusion.right):
            side = f"cluster {c} occurs in a premise"
        return (conclusion.left, conclusion.right), replace(w, cluster=c), side

    if rule is Rule.ChallSplitting:
        _expect(isinstance(conclusion, Chall), "conclusion is not a choice universal")
        _expect(w.cluster in (None, conclusion.cluster), "cluster does not match the conclusion")
        _expect(w.const is not None, "Chall-splitting needs a constant")
        c, body = conclusion.cluster, conclusion.body
        side = None
        if c in cluster_names(body):
            side = f"cluster {c} occurs in the body"
        elif w.const in constants_of(body):
            side = f"constant {w.const} occurs in the body"
        premise = substitute(body, conclusion.var, Const(w.const))
        return (premise,), replace(w, cluster=c, var=conclusion.var), side

    raise RuleError(f"unknown rule {rule}")


def unapply(rule: Rule, conclusion: Cirquent, witness: Witness) -> Step:
    """Apply `rule` backwards: the premises from which `conclusion` follows."""
    premises, fw, side = _unapply(rule, conclusion, witness)
    if side:
        raise SideConditionError(f"{rule}: {side}")
    return Step(rule, premises, conclusion, fw)


def apply_rule(rule: Rule, premises: Sequence[Cirquent], witness: Witness) -> Cirquent:
    """Apply `rule` forwards to `premises`; raises RuleError if it does not apply."""
    premises = tuple(premises)
    _expect(len(premises) == premise_count(rule),
            f"{rule} takes {premise_count(rule)} premise(s), got {len(premises)}")
    w = witness
    if rule in LOCAL:
        _expect(w.path is not None, "context rules need a rewrite position")
        try:
            sub = subterm_at(premises[0], w.path)
        except PathError:
            raise RuleError(f"position {format_path(w.path)} does not exist") from None
        conclusion = replace_at(premises[0], w.path, _up_local(rule, sub, w))
        if rule in CHOTOMY:
            w = replace(w, cluster=sub.cluster)
    elif rule in CHOOSING:
        _expect(w.holes is not None and len(w.holes) > 0, "forward Choosing needs its holes")
        conclusion = premises[0]
        for path, node in w.holes:
            try:
                conclusion = replace_at(conclusion, path, node)
            except PathError:
                raise RuleError(f"position {format_path(path)} does not exist") from None
        first = w.holes[0][1]
        _expect(isinstance(first, (Chor, Chexists)), "hole material is not chosen-on")
        w = replace(w, cluster=first.cluster)
    elif rule is Rule.ChandSplitting:
        _expect(w.cluster is not None, "Chand-splitting needs a cluster")
        conclusion = Chand(w.cluster, premises[0], premises[1])
    else:
        _expect(w.cluster is not None and w.const is not None,
                "Chall-splitting needs a cluster and a constant")
        p = premises[0]
        var = w.var or fresh_var(p)
        _expect(var not in all_vars(p), f"variable {var} already occurs in the premise")
        body = map_terms(p, lambda t, _: Var(var) if t == Const(w.const) else t)
        conclusion = Chall(w.cluster, var, body)

    back, _, side = _unapply(rule, conclusion, w)
    if side:
        raise SideConditionError(f"{rule}: {side}")
    if len(back) != len(premises) or not all(alpha_eq(a, b) for a, b in zip(back, premises)):
        raise RuleError(f"{rule} does not apply here")
    return conclusion


# --------------------------------------------------------------------------
# Proofs

@dataclass(frozen=True)
class ProofLine:
    index: int
    cirquent: Cirquent
    rule: Rule | None = None          # None marks an axiom or hypothesis line
    premises: tuple[int, ...] = ()
    witness: Witness | None = None
    hypothesis: bool = False          # an assumption of a derivation fragment

    @property
    def is_axiom(self) -> bool:
        return self.rule is None and not self.hypothesis


@dataclass(frozen=True)
class Proof:
    lines: tuple[ProofLine, ...]

    @property
    def theorem(self) -> Cirquent:
        return self.lines[-1].cirquent

    def __len__(self):
        return len(self.lines)

    def line(self, index: int) -> ProofLine:
        return self.lines[index - 1]


@dataclass(frozen=True)
class Diagnostic:
    index: int
    message: str

    def __str__(self):
        return f"line {self.index}: {self.message}"


class ProofCheckError(CirquentError):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic
        super().__init__(str(diagnostic))


class ProofFormatError(ParseError):
    pass


def _candidate_witnesses(rule: Rule, premises: tuple[Cirquent, ...], conclusion: Cirquent,
                         given: Witness) -> Iterator[Witness]:
    """Bounded witness search; fields fixed in `given` are respected."""
    if rule in LOCAL:
        paths = [given.path] if given.path is not None else [p for p, _ in walk(conclusion)]
        for path in paths:
            try:
                sub = subterm_at(conclusion, path)
            except PathError:
                continue
            if rule in CLEANSING:
                if not isinstance(sub, Chall if rule is Rule.ChallCleansing else Chand):
                    continue
                if given.inner is not None:
                    inners = [given.inner]
                else:
                    side = {Rule.LeftChandCleansing: "left", Rule.RightChandCleansing: "right",
                            Rule.ChallCleansing: "body"}[rule]
                    inners = [q for q, n in walk(getattr(sub, side))
                              if type(n) is type(sub) and n.cluster == sub.cluster]
                for q in inners:
                    yield replace(given, path=path, inner=q)
            elif rule in CHOTOMY:
                if given.cluster is not None:
                    yield replace(given, path=path)
                    continue
                try:
                    node = subterm_at(premises[0], path)
                except PathError:
                    continue
                if isinstance(node, Chand):
                    yield replace(given, path=path, cluster=node.cluster)
            else:
                yield replace(given, path=path)
    elif rule in CHOOSING:
        want = CHEXISTS if rule is Rule.ChexistsChoosing else CHOR
        names = [given.cluster] if given.cluster is not None else [
            n for n, (k, _) in clusters_of(conclusion).items() if k == want]
        if rule is Rule.ChexistsChoosing:
            if given.const is not None:
                consts = [given.const]
            else:
                consts = sorted(constants_of(premises[0]) | constants_of(conclusion))
                consts.append(fresh_constant(premises[0], conclusion))
            for n in names:
                for a in consts:
                    yield replace(given, cluster=n, const=a)
        else:
            for n in names:
                yield replace(given, cluster=n)
    elif rule is Rule.ChandSplitting:
        yield given
    else:
        if given.const is not None:
            yield given
            return
        body = conclusion.body if isinstance(conclusion, Chall) else conclusion
        consts = sorted(constants_of(premises[0]) - constants_of(body))
        consts.append(fresh_constant(premises[0], conclusion))
        for a in consts:
            yield replace(given, const=a)


def find_witness(rule: Rule, premises: Sequence[Cirquent], conclusion: Cirquent,
                 given: Witness | None = None) -> tuple[Witness | None, str]:
    """Search for a witness under which `rule` takes `premises` to `conclusion`.

    Returns (witness, "") on success, or (None, nearest-miss explanation).
    """
    premises = tuple(premises)
    given = given or Witness()
    if len(premises) != premise_count(rule):
        return None, f"{rule} takes {premise_count(rule)} premise(s), got {len(premises)}"
    targets = tuple(canonical(p) for p in premises)
    side_miss = shape_miss = None
    matched = matched_shape = False
    for w in _candidate_witnesses(rule, premises, conclusion, given):
        try:
            back, fw, side = _unapply(rule, conclusion, w)
        except RuleError as e:
            shape_miss = shape_miss or str(e)
            continue
        matched = True
        if len(back) == len(targets) and all(canonical(b) == t for b, t in zip(back, targets)):
            if side is None:
                return w, ""
            where = f" ({w.to_text()})" if w.to_text() else ""
            side_miss = side_miss or f"side condition violated: {side}{where}"
        elif not matched_shape:
            matched_shape = True
            shape_miss = ("premise does not match: rule yields "
                          + ", ".join(to_text(b) for b in back)
                          + (f" ({w.to_text()})" if w.to_text() else ""))
    if side_miss:
        return None, side_miss
    if not matched:
        return None, "no position where the rule applies" + (f" ({shape_miss})" if shape_miss else "")
    return None, shape_miss


def check_step(proof: Proof, index: int, allow_hypotheses: bool = False) -> Diagnostic | None:
    """None if line `index` follows from its premises by its rule."""
    line = proof.line(index)
    if line.index != index:
        return Diagnostic(index, f"line is numbered {line.index}")
    if not is_closed(line.cirquent):
        return Diagnostic(index, "cirquent is not closed")
    if line.hypothesis:
        return None if allow_hypotheses else Diagnostic(index, "hypothesis lines are not allowed in a proof")
    if line.is_axiom:
        if line.premises:
            return Diagnostic(index, "axiom line has premises")
        if not isinstance(line.cirquent, Top):
            return Diagnostic(index, "axiom line must be T")
        return None
    for p in line.premises:
        if not 1 <= p < index:
            return Diagnostic(index, f"premise {p} is not an earlier line")
    premises = tuple(proof.line(p).cirquent for p in line.premises)
    w, why = find_witness(line.rule, premises, line.cirquent, line.witness)
    if w is None:
        return Diagnostic(index, f"{line.rule}: {why}")
    return None


def check_proof(proof: Proof, allow_hypotheses: bool = False) -> Cirquent:
    """Check every line; returns the theorem or raises ProofCheckError.

    With `allow_hypotheses` the lines form a derivation of the last cirquent
    from the hypothesis lines rather than a proof.
    """
    if not proof.lines:
        raise ProofCheckError(Diagnostic(0, "empty proof"))
    kinds: dict[str, str] = {}
    for i in range(1, len(proof) + 1):
        d = check_step(proof, i, allow_hypotheses)
        if d is not None:
            raise ProofCheckError(d)
        for name, (kind, _) in clusters_of(proof.line(i).cirquent).items():
            if kinds.setdefault(name, kind) != kind:
                raise ProofCheckError(Diagnostic(
                    i, f"cluster {name} used as {kind} but earlier as {kinds[name]}"))
    return proof.theorem


# --------------------------------------------------------------------------
# Proof file format:  <n>. <cirquent> ; <Rule>: <premises> [; <witness>]

def format_line(line: ProofLine) -> str:
    text = f"{line.index}. {to_text(line.cirquent)} ; "
    if line.hypothesis:
        return text + "Hypothesis"
    if line.is_axiom:
        return text + "Axiom"
    text += f"{line.rule}: {','.join(str(p) for p in line.premises)}"
    if line.witness is not None and line.witness.to_text():
        text += f" ; {line.witness.to_text()}"
    return text


def format_proof(proof: Proof) -> str:
    return "".join(format_line(ln) + "\n" for ln in proof.lines)


_LINE = re.compile(r"^\s*(\d+)\.\s+(.*)$")


def parse_proof(text: str) -> Proof:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.match(stripped)
        if not m:
            raise ProofFormatError(f"text line {lineno}: expected '<n>. <cirquent> ; <justification>'")
        index = int(m.group(1))
        if index != len(lines) + 1:
            raise ProofFormatError(f"text line {lineno}: expected line number {len(lines) + 1}, got {index}")
        parts = [p.strip() for p in m.group(2).split(";")]
        if len(parts) not in (2, 3):
            raise ProofFormatError(f"line {index}: expected 2 or 3 ';'-separated fields")
        try:
            cirquent = parse(parts[0])
        except CirquentError as e:
            raise ProofFormatError(f"line {index}: {e}") from None
        just = parts[1]
        if just.lower() in ("axiom", "hypothesis"):
            if len(parts) == 3:
                raise ProofFormatError(f"line {index}: {just.lower()} lines take no witness")
            lines.append(ProofLine(index, cirquent, hypothesis=just.lower() == "hypothesis"))
            continue
        name, sep, refs = just.partition(":")
        if not sep:
            raise ProofFormatError(f"line {index}: expected '<Rule>: <premises>'")
        rule = rule_from_name(name.strip())
        try:
            premises = tuple(int(r) for r in refs.replace(" ", "").split(",") if r)
        except ValueError:
            raise ProofFormatError(f"line {index}: bad premise list {refs.strip()!r}") from None
        for p in premises:
            if not 1 <= p < index:
                raise ProofFormatError(f"line {index}: premise {p} is not an earlier line")
        if len(premises) != premise_count(rule):
            raise ProofFormatError(
                f"line {index}: {rule} takes {premise_count(rule)} premise(s), got {len(premises)}")
        witness = Witness.parse(parts[2]) if len(parts) == 3 else None
        lines.append(ProofLine(index, cirquent, rule, premises, witness))
    if not lines:
        raise ProofFormatError("no proof lines")
    return Proof(tuple(lines))


# --------------------------------------------------------------------------
# Assembling proofs

def derivation_lines(start_index: int, steps: Iterable[Step]) -> list[ProofLine]:
    """Proof lines for a chain of single-premise steps, each using the line before."""
    out = []
    i = start_index
    for step in steps:
        out.append(ProofLine(i + 1, step.conclusion, step.rule, (i,), _file_witness(step.witness)))
        i += 1
    return out


def _file_witness(w: Witness) -> Witness:
    return Witness(w.path, w.inner, w.cluster, w.branch, w.const, w.var)


def reindex(lines: Sequence[ProofLine], offset: int) -> list[ProofLine]:
    return [replace(ln, index=ln.index + offset, premises=tuple(p + offset for p in ln.premises))
            for ln in lines]
