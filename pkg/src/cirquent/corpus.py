"""Exhaustive and seeded random generators of closed cirquents."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from .syntax import (
    BOT, CHALL, CHAND, CHEXISTS, CHOR, TOP, Atom, Chall, Chand, Chexists, Chor, Cirquent,
    Const, Pand, Por, Var, clusters_of, constants_of, free_vars, negate, rename_clusters,
)


@dataclass(frozen=True)
class CorpusSpec:
    """Shape of a corpus.

    Height counts nodes on the longest root-to-leaf path, so literals have
    height 1.  `clusters` gives, per kind, the names that may be used.
    """

    max_height: int = 3
    unary: tuple[str, ...] = ("p",)
    nullary: tuple[str, ...] = ("q",)
    clusters: dict[str, tuple[str, ...]] = field(default_factory=lambda: {
        CHAND: ("a",), CHOR: ("b",), CHALL: ("c",), CHEXISTS: ("d",)})
    constants: tuple[int, ...] = (0, 1)
    variables: tuple[str, ...] = ("x",)
    count: int | None = None
    exhaustive: bool = True
    seed: int = 0

    def __hash__(self):
        return hash((self.max_height, self.unary, self.nullary,
                     tuple(sorted(self.clusters.items())), self.constants,
                     self.variables, self.count, self.exhaustive, self.seed))

    def to_dict(self) -> dict:
        return {
            "max_height": self.max_height, "unary": list(self.unary),
            "nullary": list(self.nullary),
            "clusters": {k: list(v) for k, v in sorted(self.clusters.items())},
            "constants": list(self.constants), "variables": list(self.variables),
            "count": self.count, "exhaustive": self.exhaustive, "seed": self.seed,
        }


def literals(spec: CorpusSpec, bound: tuple[str, ...]) -> list[Cirquent]:
    """Literals over the spec's vocabulary with terms from the bound variables."""
    out: list[Cirquent] = [TOP, BOT]
    atoms = [Atom(q) for q in spec.nullary]
    terms = [Const(k) for k in spec.constants] + [Var(v) for v in bound]
    atoms += [Atom(p, (t,)) for p in spec.unary for t in terms]
    for a in atoms:
        out += [a, a.flip()]
    return out


def exhaustive(spec: CorpusSpec) -> Iterator[Cirquent]:
    """Every closed cirquent of height at most `spec.max_height`, in a fixed order."""
    cache: dict[tuple[int, tuple[str, ...]], list[Cirquent]] = {}

    def upto(h: int, bound: tuple[str, ...]) -> list[Cirquent]:
        key = (h, bound)
        if key not in cache:
            out = literals(spec, bound)
            if h > 1:
                smaller = upto(h - 1, bound)
                for left, right in itertools.product(smaller, repeat=2):
                    out.append(Pand(left, right))
                    out.append(Por(left, right))
                    for name in spec.clusters.get(CHAND, ()):
                        out.append(Chand(name, left, right))
                    for name in spec.clusters.get(CHOR, ()):
                        out.append(Chor(name, left, right))
                for var in spec.variables:
                    inner = tuple(sorted(set(bound) | {var}))
                    for body in upto(h - 1, inner):
                        for name in spec.clusters.get(CHALL, ()):
                            out.append(Chall(name, var, body))
                        for name in spec.clusters.get(CHEXISTS, ()):
                            out.append(Chexists(name, var, body))
            cache[key] = out
        return cache[key]

    yield from upto(spec.max_height, ())


def random_cirquent(rng: random.Random, spec: CorpusSpec, height: int | None = None,
                    bound: tuple[str, ...] = ()) -> Cirquent:
    """One random closed (relative to `bound`) cirquent of height at most `height`."""
    height = spec.max_height if height is None else height
    if height <= 1 or rng.random() < 0.25:
        return rng.choice(literals(spec, bound))
    op = rng.choice(("pand", "por", CHAND, CHOR, CHALL, CHEXISTS))
    names = spec.clusters.get(op, ())
    if op in (CHAND, CHOR, CHALL, CHEXISTS) and not names:
        op = "pand"
    if op in ("pand", "por", CHAND, CHOR):
        left = random_cirquent(rng, spec, height - 1, bound)
        right = random_cirquent(rng, spec, height - 1, bound)
        if op == "pand":
            return Pand(left, right)
        if op == "por":
            return Por(left, right)
        node = Chand if op == CHAND else Chor
        return node(rng.choice(names), left, right)
    var = rng.choice(spec.variables)
    body = random_cirquent(rng, spec, height - 1, tuple(sorted(set(bound) | {var})))
    node = Chall if op == CHALL else Chexists
    return node(rng.choice(names), var, body)


RANDOM_SPEC = CorpusSpec(
    max_height=5, unary=("p", "r"), nullary=("q",),
    clusters={CHAND: ("a", "e"), CHOR: ("b", "f"), CHALL: ("c", "g"), CHEXISTS: ("d", "h")},
    constants=(0, 1), variables=("x", "y"), exhaustive=False,
)


def within_limits(c: Cirquent, max_clusters: int = 6, max_domain: int = 6) -> bool:
    """Whether the oracle's default limits admit `c` (see oracle.game_domain)."""
    kinds = clusters_of(c)
    n_chall = sum(1 for kind, _ in kinds.values() if kind == CHALL)
    return len(kinds) <= max_clusters and len(constants_of(c)) + n_chall + 1 <= max_domain


def copycat_instance(rng: random.Random, spec: CorpusSpec, height: int = 3) -> Cirquent:
    """``A -> A'`` where A' renames A's clusters apart, sometimes merging two of
    the same kind; such instances are valid far more often than uniform ones."""
    a = random_cirquent(rng, spec, height)
    mapping = {}
    for name, (kind, _) in sorted(clusters_of(a).items()):
        mapping[name] = f"m_{kind}" if rng.random() < 0.3 else f"{name}2"
    return Por(negate(a), rename_clusters(a, mapping))


def random_corpus(spec: CorpusSpec = RANDOM_SPEC, count: int = 1000, seed: int = 0,
                  max_clusters: int = 6, max_domain: int = 6,
                  copycat: float = 0.3) -> list[Cirquent]:
    """`count` seeded random closed cirquents within the oracle limits.

    A `copycat` fraction of them are implications between cluster variants.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        if rng.random() < copycat:
            c = copycat_instance(rng, spec)
        else:
            c = random_cirquent(rng, spec)
        if not free_vars(c) and within_limits(c, max_clusters, max_domain):
            out.append(c)
    return out
