"""Terms, clusters and the cirquent AST, with parsing and printing.

Concrete syntax::

    T  F  p  p(0, x)  ~p(x)
    A & B      A | B          parallel conjunction / disjunction
    A &[c] B   A |[c] B       choice conjunction / disjunction in cluster c
    all[c] x. A   ex[c] x. A  choice quantifiers in cluster c
    A -> B                    sugar for ~A | B

Binding strength, tightest first: ``~`` and quantifiers, choice connectives,
parallel connectives, ``->``.  Different operators on the same level must be
parenthesized; a chain of one operator associates to the left.  Negation of a
compound is pushed down to atoms while parsing.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Union

CHAND = "chand"
CHOR = "chor"
CHALL = "chall"
CHEXISTS = "chexists"
KINDS = (CHAND, CHOR, CHALL, CHEXISTS)

FRESH_CLUSTER_PREFIX = "_k"


class CirquentError(ValueError):
    """Base class for errors raised on malformed input."""


class ParseError(CirquentError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


class KindClashError(CirquentError):
    pass


class ArityError(CirquentError):
    pass


class CaptureError(CirquentError):
    pass


class PathError(CirquentError):
    pass


class _Node:
    """Structural equality with a cached hash; subclasses are frozen dataclasses."""

    __slots__ = ()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + tuple(
                getattr(self, f) for f in self.__dataclass_fields__))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        return to_text(self)


# --------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise CirquentError(f"constants are natural numbers, got {self.value}")

    def __str__(self):
        return str(self.value)


Term = Union[Var, Const]


@dataclass(frozen=True)
class Cluster:
    kind: str
    name: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CirquentError(f"unknown cluster kind {self.kind!r}")


# --------------------------------------------------------------------------
# Cirquents

@dataclass(frozen=True, eq=True)
class Top(_Node):
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Bot(_Node):
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Atom(_Node):
    pred: str
    args: tuple[Term, ...] = ()
    negated: bool = False
    __hash__ = _Node.__hash__

    def positive(self) -> Atom:
        return Atom(self.pred, self.args, False)

    def flip(self) -> Atom:
        return Atom(self.pred, self.args, not self.negated)


@dataclass(frozen=True, eq=True)
class Pand(_Node):
    left: Cirquent
    right: Cirquent
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Por(_Node):
    left: Cirquent
    right: Cirquent
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Chand(_Node):
    cluster: str
    left: Cirquent
    right: Cirquent
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Chor(_Node):
    cluster: str
    left: Cirquent
    right: Cirquent
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Chall(_Node):
    cluster: str
    var: str
    body: Cirquent
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Chexists(_Node):
    cluster: str
    var: str
    body: Cirquent
    __hash__ = _Node.__hash__


Cirquent = Union[Top, Bot, Atom, Pand, Por, Chand, Chor, Chall, Chexists]

TOP = Top()
BOT = Bot()

BINARY = (Pand, Por, Chand, Chor)
CHOICE_BINARY = (Chand, Chor)
QUANTIFIERS = (Chall, Chexists)
CHOICE = (Chand, Chor, Chall, Chexists)
LITERALS = (Top, Bot, Atom)

NODE_KIND = {Chand: CHAND, Chor: CHOR, Chall: CHALL, Chexists: CHEXISTS}

Path = tuple[str, ...]
ROOT: Path = ()


def kind_of(c: Cirquent) -> str | None:
    return NODE_KIND.get(type(c))


def is_literal(c: Cirquent) -> bool:
    return isinstance(c, LITERALS)


def children(c: Cirquent) -> tuple[tuple[str, Cirquent], ...]:
    if isinstance(c, BINARY):
        return (("l", c.left), ("r", c.right))
    if isinstance(c, QUANTIFIERS):
        return (("b", c.body),)
    return ()


def rebuild(c: Cirquent, **kids: Cirquent) -> Cirquent:
    """Copy of `c` with some of its children (``left``/``right``/``body``) replaced."""
    if isinstance(c, (Pand, Por)):
        return type(c)(kids.get("left", c.left), kids.get("right", c.right))
    if isinstance(c, CHOICE_BINARY):
        return type(c)(c.cluster, kids.get("left", c.left), kids.get("right", c.right))
    if isinstance(c, QUANTIFIERS):
        return type(c)(c.cluster, c.var, kids.get("body", c.body))
    return c


_SELECTOR = {"l": "left", "r": "right", "b": "body"}


def subterm_at(c: Cirquent, path: Path) -> Cirquent:
    for step in path:
        attr = _SELECTOR.get(step)
        if attr is None or not hasattr(c, attr) or (attr == "body") != isinstance(c, QUANTIFIERS):
            raise PathError(f"invalid path {format_path(path)}")
        c = getattr(c, attr)
    return c


def replace_at(c: Cirquent, path: Path, sub: Cirquent) -> Cirquent:
    if not path:
        return sub
    step, rest = path[0], path[1:]
    attr = _SELECTOR.get(step)
    if attr is None or not hasattr(c, attr) or (attr == "body") != isinstance(c, QUANTIFIERS):
        raise PathError(f"invalid path step {step!r}")
    return rebuild(c, **{attr: replace_at(getattr(c, attr), rest, sub)})


def walk(c: Cirquent, path: Path = ROOT) -> Iterator[tuple[Path, Cirquent]]:
    """All (path, subcirquent) pairs in pre-order, leftmost first."""
    yield path, c
    for step, kid in children(c):
        yield from walk(kid, path + (step,))


def surface_walk(c: Cirquent, path: Path = ROOT) -> Iterator[tuple[Path, Cirquent]]:
    """Pre-order over surface occurrences: those not under any choice operator."""
    yield path, c
    if isinstance(c, (Pand, Por)):
        yield from surface_walk(c.left, path + ("l",))
        yield from surface_walk(c.right, path + ("r",))


def format_path(path: Path) -> str:
    return "/" + "/".join(path)


def parse_path(text: str) -> Path:
    text = text.strip()
    if not text.startswith("/"):
        raise ParseError(f"path must start with '/': {text!r}")
    steps = tuple(s for s in text[1:].split("/") if s)
    for s in steps:
        if s not in _SELECTOR:
            raise ParseError(f"bad path selector {s!r}")
    return steps


# --------------------------------------------------------------------------
# Variables, constants, clusters

def free_vars(c: Cirquent) -> set[str]:
    if isinstance(c, Atom):
        return {t.name for t in c.args if isinstance(t, Var)}
    if isinstance(c, BINARY):
        return free_vars(c.left) | free_vars(c.right)
    if isinstance(c, QUANTIFIERS):
        return free_vars(c.body) - {c.var}
    return set()


def is_closed(c: Cirquent) -> bool:
    return not free_vars(c)


def all_vars(c: Cirquent) -> set[str]:
    """Every variable name appearing anywhere, bound or free."""
    out = set()
    for _, node in walk(c):
        if isinstance(node, Atom):
            out.update(t.name for t in node.args if isinstance(t, Var))
        elif isinstance(node, QUANTIFIERS):
            out.add(node.var)
    return out


def constants_of(c: Cirquent) -> set[int]:
    out = set()
    for _, node in walk(c):
        if isinstance(node, Atom):
            out.update(t.value for t in node.args if isinstance(t, Const))
    return out


def fresh_constant(*cs: Cirquent) -> int:
    """Smallest numeral not occurring in any of `cs`."""
    used = set().union(*(constants_of(c) for c in cs))
    return next(n for n in itertools.count() if n not in used)


def fresh_var(*cs: Cirquent, base: str = "x") -> str:
    used = set().union(*(all_vars(c) for c in cs))
    if base not in used:
        return base
    return next(f"{base}{n}" for n in itertools.count(1) if f"{base}{n}" not in used)


def cluster_names(c: Cirquent) -> set[str]:
    return {node.cluster for _, node in walk(c) if isinstance(node, CHOICE)}


def fresh_cluster(*cs: Cirquent, avoid: set[str] = frozenset()) -> str:
    used = set(avoid).union(*(cluster_names(c) for c in cs))
    return next(f"{FRESH_CLUSTER_PREFIX}{n}" for n in itertools.count(1)
                if f"{FRESH_CLUSTER_PREFIX}{n}" not in used)


def rename_clusters(c: Cirquent, mapping: dict[str, str]) -> Cirquent:
    """Rename clusters by `mapping`; names not in it are kept."""
    if isinstance(c, (Pand, Por)):
        return type(c)(rename_clusters(c.left, mapping), rename_clusters(c.right, mapping))
    if isinstance(c, CHOICE_BINARY):
        return type(c)(mapping.get(c.cluster, c.cluster),
                       rename_clusters(c.left, mapping), rename_clusters(c.right, mapping))
    if isinstance(c, QUANTIFIERS):
        return type(c)(mapping.get(c.cluster, c.cluster), c.var, rename_clusters(c.body, mapping))
    return c


def clusters_of(c: Cirquent) -> dict[str, tuple[str, list[Path]]]:
    """Index of choice-operator occurrences by cluster name.

    Raises KindClashError if a name is used with two kinds.
    """
    out: dict[str, tuple[str, list[Path]]] = {}
    for path, node in walk(c):
        kind = kind_of(node)
        if kind is None:
            continue
        if node.cluster in out:
            known, paths = out[node.cluster]
            if known != kind:
                raise KindClashError(
                    f"cluster {node.cluster!r} used as both {known} and {kind}")
            paths.append(path)
        else:
            out[node.cluster] = (kind, [path])
    return out


def cluster_kinds(c: Cirquent) -> dict[str, str]:
    return {name: kind for name, (kind, _) in clusters_of(c).items()}


def atoms_of(c: Cirquent) -> set[Atom]:
    """Positive forms of all nonlogical atoms occurring in `c`."""
    return {node.positive() for _, node in walk(c) if isinstance(node, Atom)}


def arities(c: Cirquent) -> dict[str, int]:
    out: dict[str, int] = {}
    for _, node in walk(c):
        if isinstance(node, Atom):
            n = out.setdefault(node.pred, len(node.args))
            if n != len(node.args):
                raise ArityError(
                    f"predicate {node.pred!r} used with arities {n} and {len(node.args)}")
    return out


def validate(c: Cirquent) -> Cirquent:
    """Check cluster-kind and arity consistency; returns `c` unchanged."""
    clusters_of(c)
    arities(c)
    return c


def size(c: Cirquent) -> int:
    return sum(1 for _ in walk(c))


# --------------------------------------------------------------------------
# Substitution and alpha-equivalence

def map_terms(c: Cirquent, fn: Callable[[Term, frozenset[str]], Term],
              bound: frozenset[str] = frozenset()) -> Cirquent:
    if isinstance(c, Atom):
        if not c.args:
            return c
        return Atom(c.pred, tuple(fn(t, bound) for t in c.args), c.negated)
    if isinstance(c, BINARY):
        return rebuild(c, left=map_terms(c.left, fn, bound), right=map_terms(c.right, fn, bound))
    if isinstance(c, QUANTIFIERS):
        return rebuild(c, body=map_terms(c.body, fn, bound | {c.var}))
    return c


def substitute(c: Cirquent, var: str, t: Term) -> Cirquent:
    """Replace free occurrences of `var` by `t`; raises CaptureError on capture."""
    if isinstance(c, Atom):
        if not any(isinstance(a, Var) and a.name == var for a in c.args):
            return c
        return Atom(c.pred, tuple(t if isinstance(a, Var) and a.name == var else a
                                  for a in c.args), c.negated)
    if isinstance(c, BINARY):
        return rebuild(c, left=substitute(c.left, var, t), right=substitute(c.right, var, t))
    if isinstance(c, QUANTIFIERS):
        if c.var == var:
            return c
        if isinstance(t, Var) and t.name == c.var and var in free_vars(c.body):
            raise CaptureError(f"substituting {t.name} for {var} would be captured by {c.var}")
        return rebuild(c, body=substitute(c.body, var, t))
    return c


def rename_bound(q: Chall | Chexists, new: str) -> Chall | Chexists:
    """Alpha-rename the variable bound by quantifier node `q`."""
    if new == q.var:
        return q
    return type(q)(q.cluster, new, substitute(q.body, q.var, Var(new)))


def canonical(c: Cirquent) -> Cirquent:
    """Alpha-normal form: bound variables renamed by binding depth.

    The generated names start with '#', which the parser never produces, so
    they cannot collide with free variables.
    """
    def go(c, env, depth):
        if isinstance(c, Atom):
            if not c.args:
                return c
            return Atom(c.pred, tuple(Var(env[a.name]) if isinstance(a, Var) and a.name in env
                                      else a for a in c.args), c.negated)
        if isinstance(c, BINARY):
            return rebuild(c, left=go(c.left, env, depth), right=go(c.right, env, depth))
        if isinstance(c, QUANTIFIERS):
            name = f"#{depth}"
            return type(c)(c.cluster, name, go(c.body, {**env, c.var: name}, depth + 1))
        return c
    return go(c, {}, 0)


def alpha_eq(a: Cirquent, b: Cirquent) -> bool:
    return a == b or canonical(a) == canonical(b)


def negate(c: Cirquent) -> Cirquent:
    """De Morgan dual; choice operators keep their cluster name."""
    if isinstance(c, Top):
        return BOT
    if isinstance(c, Bot):
        return TOP
    if isinstance(c, Atom):
        return c.flip()
    if isinstance(c, Pand):
        return Por(negate(c.left), negate(c.right))
    if isinstance(c, Por):
        return Pand(negate(c.left), negate(c.right))
    if isinstance(c, Chand):
        return Chor(c.cluster, negate(c.left), negate(c.right))
    if isinstance(c, Chor):
        return Chand(c.cluster, negate(c.left), negate(c.right))
    if isinstance(c, Chall):
        return Chexists(c.cluster, c.var, negate(c.body))
    return Chall(c.cluster, c.var, negate(c.body))


# --------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<chop>[&|]\[\s*(?P<chname>[A-Za-z_][A-Za-z0-9_']*)\s*\])
  | (?P<quant>(?:all|ex)\[\s*(?P<qname>[A-Za-z_][A-Za-z0-9_']*)\s*\])
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[~&|(),.])
""", re.VERBOSE)

_RESERVED = {"T", "F", "all", "ex"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int
    name: str | None = None


def _tokenize(text: str) -> list[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind in ("chname", "qname"):
            kind = "chop" if m.group("chop") else "quant"
        if kind == "chop":
            out.append(_Tok("chop", m.group("chop")[0], pos, m.group("chname")))
        elif kind == "quant":
            out.append(_Tok("quant", "all" if m.group("quant").startswith("all") else "ex",
                            pos, m.group("qname")))
        elif kind != "ws":
            out.append(_Tok(kind if kind != "punct" else m.group(), m.group(), pos))
        pos = m.end()
    out.append(_Tok("eof", "", pos))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        tok = self.tok
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.pos)
        self.i += 1
        return tok

    def parse(self) -> Cirquent:
        c = self.implication()
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return c

    def implication(self) -> Cirquent:
        left = self.parallel()
        if self.tok.kind == "arrow":
            self.i += 1
            return Por(negate(left), self.implication())
        return left

    def parallel(self) -> Cirquent:
        c = self.choice()
        op = None
        while self.tok.kind in ("&", "|"):
            tok = self.tok
            if op is not None and tok.kind != op:
                raise ParseError("mixed '&' and '|' need parentheses", tok.pos)
            op = tok.kind
            self.i += 1
            right = self.choice()
            c = Pand(c, right) if op == "&" else Por(c, right)
        return c

    def choice(self) -> Cirquent:
        c = self.unary()
        op = None
        while self.tok.kind == "chop":
            tok = self.tok
            if op is not None and (tok.text, tok.name) != op:
                raise ParseError("mixed choice operators need parentheses", tok.pos)
            op = (tok.text, tok.name)
            self.i += 1
            right = self.unary()
            c = Chand(tok.name, c, right) if tok.text == "&" else Chor(tok.name, c, right)
        return c

    def unary(self) -> Cirquent:
        tok = self.tok
        if tok.kind == "~":
            self.i += 1
            return negate(self.unary())
        if tok.kind == "quant":
            self.i += 1
            var = self.take("ident")
            if var.text in _RESERVED:
                raise ParseError(f"reserved word {var.text!r} used as variable", var.pos)
            self.take(".")
            body = self.unary()
            cls = Chall if tok.text == "all" else Chexists
            return cls(tok.name, var.text, body)
        if tok.kind == "(":
            self.i += 1
            c = self.implication()
            self.take(")")
            return c
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "T":
                return TOP
            if tok.text == "F":
                return BOT
            if tok.text in _RESERVED:
                raise ParseError(f"unexpected {tok.text!r}", tok.pos)
            args: list[Term] = []
            if self.tok.kind == "(":
                self.i += 1
                if self.tok.kind != ")":
                    args.append(self.term())
                    while self.tok.kind == ",":
                        self.i += 1
                        args.append(self.term())
                self.take(")")
            return Atom(tok.text, tuple(args))
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)

    def term(self) -> Term:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            if len(tok.text) > 1 and tok.text.startswith("0"):
                raise ParseError(f"numeral with leading zero {tok.text!r}", tok.pos)
            return Const(int(tok.text))
        if tok.kind == "ident" and tok.text not in _RESERVED:
            self.i += 1
            return Var(tok.text)
        raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}", tok.pos)


def parse(text: str) -> Cirquent:
    """Parse concrete syntax into a validated cirquent."""
    return validate(_Parser(text).parse())


# --------------------------------------------------------------------------
# Printing

_PAR, _CHOICE, _UNARY = 1, 2, 3


def _level(c: Cirquent) -> int:
    if isinstance(c, (Pand, Por)):
        return _PAR
    if isinstance(c, CHOICE_BINARY):
        return _CHOICE
    return _UNARY


def _same_op(a: Cirquent, b: Cirquent) -> bool:
    if type(a) is not type(b):
        return False
    return not isinstance(a, CHOICE_BINARY) or a.cluster == b.cluster


def _wrap(s: str) -> str:
    return f"({s})"


def to_text(c: Cirquent) -> str:
    """Canonical concrete syntax; ``parse(to_text(c)) == c``."""
    if isinstance(c, Top):
        return "T"
    if isinstance(c, Bot):
        return "F"
    if isinstance(c, Atom):
        s = c.pred
        if c.args:
            s += "(" + ",".join(str(t) for t in c.args) + ")"
        return "~" + s if c.negated else s
    if isinstance(c, QUANTIFIERS):
        q = "all" if isinstance(c, Chall) else "ex"
        body = to_text(c.body)
        if _level(c.body) < _UNARY:
            body = _wrap(body)
        return f"{q}[{c.cluster}] {c.var}. {body}"
    level = _level(c)
    left, right = to_text(c.left), to_text(c.right)
    if _level(c.left) < level or (_level(c.left) == level and not _same_op(c, c.left)):
        left = _wrap(left)
    if _level(c.right) <= level:
        right = _wrap(right)
    if isinstance(c, Pand):
        op = "&"
    elif isinstance(c, Por):
        op = "|"
    elif isinstance(c, Chand):
        op = f"&[{c.cluster}]"
    else:
        op = f"|[{c.cluster}]"
    return f"{left} {op} {right}"
