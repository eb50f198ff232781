"""Command-line front end.

Exit codes: 0 success / accept / valid / OK, 1 reject / invalid / check
failure / corpus mismatch, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments
from .calculus import ProofCheckError, check_proof, format_proof, parse_proof
from .corpus import CorpusSpec, exhaustive, random_corpus
from .decide import ACCEPT, decide
from .oracle import LimitError, OracleLimits, oracle_valid
from .purify import Overflow, derivation_fragment, is_pure, purify, rank
from .semantics import Interpretation, eval_truth, parse_run, residue, won
from .syntax import (
    CirquentError, canonical, cluster_kinds, free_vars, is_closed, parse, to_text,
)

OK, FAIL, ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _read(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as e:
        raise InputError(f"cannot read {source}: {e.strerror}") from None


def _cirquent(args) -> object:
    text = args.expr if args.expr is not None else _read(args.file) if args.file else None
    if text is None:
        raise InputError("give a file or --expr")
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    return parse(" ".join(lines))


def _closed(c):
    if not is_closed(c):
        raise InputError(f"cirquent has free variables {sorted(free_vars(c))}")
    return c


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}") from None


# --------------------------------------------------------------------------
# Subcommands

def cmd_parse(args) -> int:
    c = _cirquent(args)
    payload = {"cirquent": to_text(c), "closed": is_closed(c),
               "free_vars": sorted(free_vars(c)), "clusters": dict(sorted(cluster_kinds(c).items()))}
    kinds = ", ".join(f"{n}:{k}" for n, k in sorted(cluster_kinds(c).items())) or "none"
    _emit(args, payload, f"{to_text(c)}\nclosed: {is_closed(c)}\nclusters: {kinds}")
    return OK


def cmd_print(args) -> int:
    c = _cirquent(args)
    if args.canonical:
        c = canonical(c)
    _emit(args, {"cirquent": to_text(c)}, to_text(c))
    return OK


def cmd_rank(args) -> int:
    c = _cirquent(args)
    r = rank(c, tower_guard=args.tower_guard)
    payload = {"cirquent": to_text(c), "overflow": isinstance(r, Overflow),
               "rank": r.expr if isinstance(r, Overflow) else str(r)}
    _emit(args, payload, str(r))
    return OK


def cmd_purify(args) -> int:
    c = _closed(_cirquent(args))
    res = purify(c)
    if args.proof:
        _write(args.proof, format_proof(derivation_fragment(res)))
    stages = [{"stage": rw.stage, "before": to_text(rw.before), "after": to_text(rw.after),
               "steps": rw.steps} for rw in res.stage_trace]
    payload = {"cirquent": to_text(c), "pure": to_text(res.pure),
               "steps": len(res.derivation), "pure_ok": is_pure(res.pure) is None}
    lines = [to_text(res.pure)]
    if args.trace:
        payload["stages"] = stages
        lines += [f"stage {s['stage']}: {s['before']}  ~>  {s['after']}  ({s['steps']} steps)"
                  for s in stages]
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_decide(args) -> int:
    c = _closed(_cirquent(args))
    out = decide(c, proofs=True, trace=args.trace)
    if out.proof is not None and args.proof:
        _write(args.proof, format_proof(out.proof))
    payload = {"cirquent": to_text(c), "verdict": out.verdict}
    lines = [out.verdict.upper()]
    if args.trace:
        payload["trace"] = out.trace.to_dict()
        lines += list(out.trace.lines())
    _emit(args, payload, "\n".join(lines))
    return OK if out.verdict == ACCEPT else FAIL


def cmd_check(args) -> int:
    proof = parse_proof(_read(args.file))
    try:
        theorem = check_proof(proof, allow_hypotheses=args.allow_hypotheses)
    except ProofCheckError as e:
        _emit(args, {"ok": False, "line": e.diagnostic.index, "message": e.diagnostic.message},
              f"FAIL {e}")
        return FAIL
    _emit(args, {"ok": True, "theorem": to_text(theorem), "lines": len(proof)},
          f"OK {to_text(theorem)}")
    return OK


def _limits(text: str | None) -> OracleLimits:
    if not text:
        return OracleLimits()
    kw = {}
    for item in text.split(","):
        key, _, value = item.partition("=")
        key = {"clusters": "max_clusters", "domain": "max_domain"}.get(key.strip())
        if key is None or not value.strip().isdigit():
            raise InputError(f"bad --limits item {item!r}; expected clusters=N or domain=N")
        kw[key] = int(value)
    return OracleLimits(**kw)


def cmd_oracle(args) -> int:
    c = _closed(_cirquent(args))
    valid = oracle_valid(c, _limits(args.limits))
    _emit(args, {"cirquent": to_text(c), "valid": valid}, "VALID" if valid else "INVALID")
    return OK if valid else FAIL


def cmd_residue(args) -> int:
    c = _cirquent(args)
    run = parse_run(args.run or "", c)
    res = residue(c, run)
    payload = {"cirquent": to_text(c), "run": str(run), "residue": to_text(res)}
    lines = [to_text(res)]
    if args.interp is not None or args.true is not None:
        text = _read(args.interp) if args.interp else "\n".join(args.true.split(","))
        interp = Interpretation.parse(text)
        w = won(c, run, interp)
        payload["won"] = w
        payload["residue_true"] = eval_truth(res, interp)
        lines.append("WON" if w else "LOST")
    _emit(args, payload, "\n".join(lines))
    return OK


def _corpus_instances(args) -> tuple[list, dict]:
    if args.exhaustive:
        spec = CorpusSpec(max_height=args.max_height)
        return list(exhaustive(spec)), {"exhaustive": spec.to_dict()}
    return (random_corpus(count=args.count, seed=args.seed),
            {"random": {"count": args.count, "seed": args.seed}})


def cmd_corpus(args) -> int:
    limits = _limits(args.limits)
    if args.mode == "agreement":
        instances, source = _corpus_instances(args)
        rep = experiments.agreement(instances, limits)
    elif args.mode == "purity":
        instances, source = _corpus_instances(args)
        rep = experiments.purity(instances)
    elif args.mode == "preservation":
        steps = experiments.sample_applications(args.count, args.seed, limits=limits)
        source = {"random": {"count": args.count, "seed": args.seed}}
        rep = experiments.preservation(steps, limits)
    else:
        rep = experiments.residue_random(args.count, args.seed)
        source = {"random": {"count": args.count, "seed": args.seed}}
    payload = {"mode": args.mode, "source": source, "ok": rep.ok, "report": rep.to_dict()}
    summary = " ".join(f"{k}={v}" for k, v in rep.to_dict().items() if not isinstance(v, (list, dict)))
    lines = [f"{args.mode}: {'OK' if rep.ok else 'MISMATCH'} {summary}"]
    lines += [json.dumps(ex, sort_keys=True) for ex in rep.to_dict()["examples"]]
    _emit(args, payload, "\n".join(lines))
    return OK if rep.ok else FAIL


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cirquent", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp):
        sp.add_argument("file", nargs="?", help="cirquent file, or - for stdin")
        sp.add_argument("-e", "--expr", help="cirquent given inline")
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return sp

    with_input(sub.add_parser("parse", help="parse and report structure")).set_defaults(fn=cmd_parse)
    sp = with_input(sub.add_parser("print", help="print in normal form"))
    sp.add_argument("--canonical", action="store_true", help="rename bound variables canonically")
    sp.set_defaults(fn=cmd_print)
    sp = with_input(sub.add_parser("rank", help="rank of a cirquent"))
    sp.add_argument("--tower-guard", type=int, default=3)
    sp.set_defaults(fn=cmd_rank)
    sp = with_input(sub.add_parser("purify", help="purification and its derivation"))
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--proof", help="write the derivation fragment here")
    sp.set_defaults(fn=cmd_purify)
    sp = with_input(sub.add_parser("decide", help="decide provability"))
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--proof", help="write the proof here on acceptance")
    sp.set_defaults(fn=cmd_decide)
    sp = sub.add_parser("check", help="check a proof file")
    sp.add_argument("file")
    sp.add_argument("--allow-hypotheses", action="store_true",
                    help="accept derivation fragments with Hypothesis lines")
    sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sp.set_defaults(fn=cmd_check)
    sp = with_input(sub.add_parser("oracle", help="brute-force validity"))
    sp.add_argument("--limits", help="e.g. clusters=6,domain=6")
    sp.set_defaults(fn=cmd_oracle)
    sp = with_input(sub.add_parser("residue", help="residue of a run, and the win verdict"))
    sp.add_argument("--run", help="moves such as 'E:a.3 M:c.1'")
    sp.add_argument("--interp", help="file listing the true ground atoms")
    sp.add_argument("--true", help="comma-separated true ground atoms")
    sp.set_defaults(fn=cmd_residue)
    sp = sub.add_parser("corpus", help="corpus experiments")
    sp.add_argument("--mode", choices=("agreement", "purity", "preservation", "residue"),
                    default="agreement")
    sp.add_argument("--exhaustive", action="store_true")
    sp.add_argument("--max-height", type=int, default=3)
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--limits", help="e.g. clusters=6,domain=6")
    sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    sp.set_defaults(fn=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return ERROR if e.code else OK
    try:
        return args.fn(args)
    except (InputError, CirquentError, LimitError) as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
