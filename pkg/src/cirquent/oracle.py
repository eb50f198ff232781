"""A brute-force validity referee: finite game search over a bounded domain.

A position is a partial resolution of the target's clusters.  The machine
wins from a position if it can extend it with its own moves so that the
residue is a tautology (the environment may stop there) and every single
environment move from the extension leads to a position it again wins.
Tautology leaves encode uniformity over interpretations, since a strategy
never sees the interpretation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .semantics import ENVIRONMENT, OWNER, is_tautology, residue_of
from .syntax import (
    CHALL, CHAND, CHOR, Cirquent, CirquentError, Cluster, clusters_of,
    constants_of, free_vars,
)


class LimitError(CirquentError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_clusters: int = 6
    max_domain: int = 6


Resolution = frozenset  # of (Cluster, int) pairs


@dataclass(frozen=True)
class GameState:
    target: Cirquent
    resolution: Resolution = frozenset()
    domain: tuple[int, ...] = ()

    def resolved(self) -> dict[Cluster, int]:
        return dict(self.resolution)


def eval_state(s: GameState) -> Cirquent:
    """The residue of the target with the state's resolution taken as the run."""
    return residue_of(s.target, s.resolved())


def game_domain(c: Cirquent, extra: int = 1) -> tuple[int, ...]:
    """Occurring constants, one fresh constant per chall cluster, and `extra` more."""
    occurring = sorted(constants_of(c))
    n_chall = sum(1 for kind, _ in clusters_of(c).values() if kind == CHALL)
    out = list(occurring)
    k = 0
    while len(out) < len(occurring) + n_chall + extra:
        if k not in occurring:
            out.append(k)
        k += 1
    return tuple(out)


class _Search:
    def __init__(self, target: Cirquent, domain: tuple[int, ...], memo: bool):
        self.target = target
        self.domain = domain
        clusters = sorted((Cluster(kind, name) for name, (kind, _) in clusters_of(target).items()),
                          key=lambda cl: cl.name)
        self.machine = [cl for cl in clusters if OWNER[cl.kind] != ENVIRONMENT]
        self.env = [cl for cl in clusters if OWNER[cl.kind] == ENVIRONMENT]
        self.taut = lru_cache(maxsize=None)(self._taut) if memo else self._taut
        self.winnable = lru_cache(maxsize=None)(self._winnable) if memo else self._winnable

    def values(self, cl: Cluster) -> tuple[int, ...]:
        return (0, 1) if cl.kind in (CHAND, CHOR) else self.domain

    def _taut(self, res: Resolution) -> bool:
        return is_tautology(residue_of(self.target, dict(res)))

    def extensions(self, res: Resolution):
        """Machine extensions of `res`, smallest first."""
        done = {cl for cl, _ in res}
        free = [cl for cl in self.machine if cl not in done]
        for size in range(len(free) + 1):
            for chosen in itertools.combinations(free, size):
                for vals in itertools.product(*(self.values(cl) for cl in chosen)):
                    yield res | frozenset(zip(chosen, vals))

    def env_moves(self, res: Resolution):
        done = {cl for cl, _ in res}
        for cl in self.env:
            if cl not in done:
                for v in self.values(cl):
                    yield res | {(cl, v)}

    def _winnable(self, res: Resolution) -> bool:
        for ext in self.extensions(res):
            if self.taut(ext) and all(self.winnable(nxt) for nxt in self.env_moves(ext)):
                return True
        return False


def oracle_valid(c: Cirquent, limits: OracleLimits = OracleLimits(), extra: int = 1,
                 memo: bool = True) -> bool:
    """Whether the machine has one strategy winning `c` under every interpretation,
    judged over a finite domain of constants."""
    if free_vars(c):
        raise CirquentError(f"free variables {sorted(free_vars(c))} in input")
    n = len(clusters_of(c))
    if n > limits.max_clusters:
        raise LimitError(f"{n} clusters exceed the limit of {limits.max_clusters}")
    domain = game_domain(c, extra)
    if len(domain) > limits.max_domain:
        raise LimitError(f"domain of {len(domain)} constants exceeds the limit of {limits.max_domain}")
    return _Search(c, domain, memo).winnable(frozenset())
