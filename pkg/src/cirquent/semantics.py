"""Runs, resolvents, residues, interpretations and the win relation."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .syntax import (
    BOT, CHALL, CHAND, CHEXISTS, CHOR, TOP, Atom, Bot, Chand, Chor,
    Cirquent, CirquentError, Cluster, Const, Pand, Por, Top, atoms_of, kind_of,
    substitute, clusters_of, parse,
)

MACHINE = "machine"
ENVIRONMENT = "environment"

# which player may move in a cluster of a given kind
OWNER = {CHAND: ENVIRONMENT, CHALL: ENVIRONMENT, CHOR: MACHINE, CHEXISTS: MACHINE}


@dataclass(frozen=True)
class Move:
    player: str
    cluster: Cluster
    choice: int

    def __str__(self):
        return f"{'E' if self.player == ENVIRONMENT else 'M'}:{self.cluster.name}.{self.choice}"


@dataclass(frozen=True)
class Run:
    moves: tuple[Move, ...] = ()

    def __iter__(self):
        return iter(self.moves)

    def __len__(self):
        return len(self.moves)

    def __add__(self, other: Run) -> Run:
        return Run(self.moves + tuple(other))

    def __str__(self):
        return " ".join(str(m) for m in self.moves)

    def resolution(self) -> dict[Cluster, int]:
        return {m.cluster: m.choice for m in self.moves}


@dataclass(frozen=True)
class Violation:
    condition: int
    index: int
    message: str

    def __str__(self):
        return f"condition {self.condition} violated by move {self.index}: {self.message}"


class IllegalRunError(CirquentError):
    def __init__(self, violation: Violation):
        self.violation = violation
        super().__init__(str(violation))


def check_legal(run: Run | Iterable[Move]) -> Violation | None:
    """First violated legality condition (1-4), or None if the run is legal."""
    seen: set[str] = set()
    for i, m in enumerate(run):
        kind = m.cluster.kind
        if kind in (CHAND, CHOR) and m.choice not in (0, 1):
            return Violation(1, i, f"choice {m.choice} in {kind} cluster {m.cluster.name!r} is not 0 or 1")
        if m.choice < 0:
            return Violation(1, i, f"choice {m.choice} is not a natural number")
        if kind in (CHAND, CHALL) and m.player != ENVIRONMENT:
            return Violation(2, i, f"move in {kind} cluster {m.cluster.name!r} is not by the environment")
        if kind in (CHOR, CHEXISTS) and m.player != MACHINE:
            return Violation(3, i, f"move in {kind} cluster {m.cluster.name!r} is not by the machine")
        if m.cluster.name in seen:
            return Violation(4, i, f"second move in cluster {m.cluster.name!r}")
        seen.add(m.cluster.name)
    return None


def require_legal(run: Run) -> None:
    v = check_legal(run)
    if v is not None:
        raise IllegalRunError(v)


def _resolve_node(c: Cirquent, choice: int) -> Cirquent:
    if isinstance(c, (Chand, Chor)):
        return c.right if choice else c.left
    return substitute(c.body, c.var, Const(choice))


def resolvent(c: Cirquent, run: Run) -> Cirquent | None:
    """The resolvent of a choice-rooted cirquent, or None if its cluster is unresolved."""
    kind = kind_of(c)
    if kind is None:
        raise CirquentError("resolvent is only defined for choice-rooted cirquents")
    choice = run.resolution().get(Cluster(kind, c.cluster))
    if choice is None:
        return None
    return _resolve_node(c, choice)


def residue_of(c: Cirquent, resolution: Mapping[Cluster, int]) -> Cirquent:
    """Residue of `c` with the resolution map standing in for a run."""
    if isinstance(c, Pand):
        return Pand(residue_of(c.left, resolution), residue_of(c.right, resolution))
    if isinstance(c, Por):
        return Por(residue_of(c.left, resolution), residue_of(c.right, resolution))
    kind = kind_of(c)
    if kind is None:
        return c
    choice = resolution.get(Cluster(kind, c.cluster))
    if choice is not None:
        return residue_of(_resolve_node(c, choice), resolution)
    return TOP if kind in (CHAND, CHALL) else BOT


def residue(c: Cirquent, run: Run) -> Cirquent:
    require_legal(run)
    return residue_of(c, run.resolution())


# --------------------------------------------------------------------------
# Interpretations and truth

GroundAtom = tuple[str, tuple[int, ...]]


def ground_key(a: Atom) -> GroundAtom:
    if not all(isinstance(t, Const) for t in a.args):
        raise CirquentError(f"atom {a} is not ground")
    return (a.pred, tuple(t.value for t in a.args))


@dataclass(frozen=True)
class Interpretation:
    """Finite-support interpretation: listed ground atoms are true, all others false."""

    true_atoms: frozenset[GroundAtom] = frozenset()

    @classmethod
    def of(cls, *atoms: str | Atom) -> Interpretation:
        keys = set()
        for a in atoms:
            if isinstance(a, str):
                a = parse(a)
            if not isinstance(a, Atom) or a.negated:
                raise CirquentError(f"{a} is not a positive atom")
            keys.add(ground_key(a))
        return cls(frozenset(keys))

    @classmethod
    def parse(cls, text: str) -> Interpretation:
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        return cls.of(*(ln for ln in lines if ln))

    def __contains__(self, a: Atom) -> bool:
        return ground_key(a) in self.true_atoms


def eval_truth(c: Cirquent, interp: Interpretation) -> bool:
    if isinstance(c, Top):
        return True
    if isinstance(c, Bot):
        return False
    if isinstance(c, Atom):
        return (ground_key(c) in interp.true_atoms) != c.negated
    if isinstance(c, Pand):
        return eval_truth(c.left, interp) and eval_truth(c.right, interp)
    if isinstance(c, Por):
        return eval_truth(c.left, interp) or eval_truth(c.right, interp)
    raise CirquentError("eval_truth needs a choice-free cirquent")


def won(c: Cirquent, run: Run, interp: Interpretation) -> bool:
    """Whether the machine wins `run` of `c` under `interp`, by direct recursion."""
    require_legal(run)
    resolution = run.resolution()

    def go(c: Cirquent) -> bool:
        if isinstance(c, (Top, Bot, Atom)):
            return eval_truth(c, interp)
        if isinstance(c, Pand):
            return go(c.left) and go(c.right)
        if isinstance(c, Por):
            return go(c.left) or go(c.right)
        kind = kind_of(c)
        choice = resolution.get(Cluster(kind, c.cluster))
        if choice is not None:
            if isinstance(c, (Chand, Chor)):
                return go(c.right if choice else c.left)
            return go(substitute(c.body, c.var, Const(choice)))
        return kind in (CHAND, CHALL)

    return go(c)


# --------------------------------------------------------------------------
# Tautology checking

def _simplify(c: Cirquent, atom: GroundAtom, value: bool) -> Cirquent:
    if isinstance(c, Atom):
        if ground_key(c) == atom:
            return TOP if value != c.negated else BOT
        return c
    if isinstance(c, Pand):
        left = _simplify(c.left, atom, value)
        if isinstance(left, Bot):
            return BOT
        right = _simplify(c.right, atom, value)
        if isinstance(right, Bot):
            return BOT
        if isinstance(left, Top):
            return right
        if isinstance(right, Top):
            return left
        return Pand(left, right)
    if isinstance(c, Por):
        left = _simplify(c.left, atom, value)
        if isinstance(left, Top):
            return TOP
        right = _simplify(c.right, atom, value)
        if isinstance(right, Top):
            return TOP
        if isinstance(left, Bot):
            return right
        if isinstance(right, Bot):
            return left
        return Por(left, right)
    return c


def _first_atom(c: Cirquent) -> Atom | None:
    while True:
        if isinstance(c, Atom):
            return c
        if isinstance(c, (Pand, Por)):
            a = _first_atom(c.left)
            if a is not None:
                return a
            c = c.right
        else:
            return None


def is_tautology(c: Cirquent) -> bool:
    """True iff the choice-free closed cirquent `c` is true under every interpretation.

    Shannon expansion on ground atoms with constant propagation.
    """
    if isinstance(c, Top):
        return True
    if isinstance(c, Bot):
        return False
    a = _first_atom(c)
    if a is None:
        return eval_truth(c, Interpretation())
    key = ground_key(a)
    return is_tautology(_simplify(c, key, True)) and is_tautology(_simplify(c, key, False))


def truth_table_tautology(c: Cirquent) -> bool:
    """Brute-force tautology check by enumerating all assignments."""
    keys = sorted({ground_key(a) for a in atoms_of(c)})
    for bits in itertools.product((False, True), repeat=len(keys)):
        interp = Interpretation(frozenset(k for k, b in zip(keys, bits) if b))
        if not eval_truth(c, interp):
            return False
    return True


# --------------------------------------------------------------------------
# Text formats

_MOVE = re.compile(r"^([EM]):([A-Za-z_][A-Za-z0-9_']*)\.(\d+)$")


def parse_run(text: str, c: Cirquent | None = None) -> Run:
    """Parse ``E:a.3 M:c.1 ...``; cluster kinds are looked up in `c` when possible.

    Clusters that do not occur in `c` get the kind implied by the player and
    the choice (binary for 0/1, quantifier otherwise).
    """
    kinds = {name: kind for name, (kind, _) in clusters_of(c).items()} if c is not None else {}
    moves = []
    for tok in text.split():
        m = _MOVE.match(tok)
        if not m:
            raise CirquentError(f"bad move {tok!r}; expected E:name.n or M:name.n")
        who, name, choice = m.group(1), m.group(2), int(m.group(3))
        player = ENVIRONMENT if who == "E" else MACHINE
        kind = kinds.get(name)
        if kind is None:
            if player == ENVIRONMENT:
                kind = CHAND if choice in (0, 1) else CHALL
            else:
                kind = CHOR if choice in (0, 1) else CHEXISTS
        moves.append(Move(player, Cluster(kind, name), choice))
    return Run(tuple(moves))
