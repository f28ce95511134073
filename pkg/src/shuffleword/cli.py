"""Command-line front end: ``python -m shuffleword <command> ...``.

Exit codes: 0 success or clean, 1 property violation or verification
mismatch, 2 resource or budget errors, 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import catalog
from .avoidance import find_pattern_3u1u3, find_square, max_exponent, repetition_threshold
from .errors import (
    ExhaustedSchedule,
    ExhaustedStream,
    InvalidInput,
    MemoryBudgetExceeded,
    NotInImage,
    RecurrenceBudgetExceeded,
    ShuffleWordError,
    UnknownName,
)
from .shuffle import (
    WITNESSES,
    build_recurrent_shuffle,
    exact_finite_shuffle,
    shuffle_frontier,
    survival_curve,
    verify_block_factorization,
)
from .words import (
    FixedPoint,
    Morphism,
    WordStream,
    compose,
    decode_bifix,
    periodic,
    shift,
    to_str,
    word,
)

EXIT_OK, EXIT_FAIL, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 64

WITNESS_STREAMS = {"g-self": ("g-fix", "g-fix", "g-fix"), "hall": ("hall", "hall-u", "hall-v")}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunReport:
    command: str
    parameters: dict
    outcome: str  # "pass" | "fail" | "value"
    payload: dict = field(default_factory=dict)
    elapsed: float = 0.0
    text: str = ""

    def to_dict(self, stable: bool) -> dict:
        out = {
            "command": self.command,
            "parameters": self.parameters,
            "outcome": self.outcome,
            "payload": self.payload,
        }
        if not stable:
            out["elapsed_s"] = round(self.elapsed, 6)
        return out

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.outcome == "fail" else EXIT_OK


# --------------------------------------------------------------------------
# Resolution of names


def resolve_morphism(source: str) -> Morphism:
    """A catalog morphism name, or a path to a morphism text file."""
    try:
        return catalog.morphism(source)
    except UnknownName:
        pass
    if os.path.exists(source):
        try:
            return Morphism.load(source)
        except OSError as exc:
            raise UsageError(f"cannot read morphism file {source!r}: {exc}") from None
    raise UsageError(f"{source!r} is neither a catalog morphism nor a readable file")


def resolve_stream(text: str) -> WordStream:
    """Stream names: a catalog word, ``NAME@k`` for a shift, ``periodic:W``."""
    if text.startswith("periodic:"):
        return periodic(word(text.split(":", 1)[1]))
    name, _, k = text.partition("@")
    try:
        s = catalog.word(name)
    except UnknownName as exc:
        raise UsageError(str(exc)) from None
    if k:
        try:
            s = shift(s, int(k))
        except ValueError:
            raise UsageError(f"bad shift in {text!r}") from None
    return s


def _source_stream(args) -> WordStream:
    if args.morphism:
        m = resolve_morphism(args.morphism)
        return FixedPoint(m, args.seed)
    if args.word:
        return resolve_stream(args.word)
    raise UsageError("give --word NAME or --morphism FILE --seed LETTER")


def _parse_bound(text: str, k: int) -> Fraction:
    if text == "rt":
        return repetition_threshold(k)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad exponent bound {text!r}") from None


# --------------------------------------------------------------------------
# Commands


def cmd_list(args) -> RunReport:
    rows = [
        {"name": e.name, "kind": e.kind, "alphabet": e.alphabet, "description": e.description}
        for e in catalog.entries()
    ]
    text = "\n".join(f"{r['name']:<11} {r['kind']:<9} k={r['alphabet']}  {r['description']}" for r in rows)
    return RunReport("list", {}, "value", {"entries": rows}, text=text)


def cmd_gen(args) -> RunReport:
    if args.length < 0:
        raise UsageError("--length must be non-negative")
    s = _source_stream(args)
    w = to_str(s.prefix(args.length))
    params = {"word": args.word, "morphism": args.morphism, "seed": args.seed, "length": args.length}
    return RunReport("gen", params, "value", {"prefix": w}, text=w)


def cmd_check(args) -> RunReport:
    if args.length < 0:
        raise UsageError("--length must be non-negative")
    s = _source_stream(args)
    w = s.prefix(args.length)
    params = {"kind": args.kind, "word": args.word or args.morphism, "length": args.length}
    if args.kind == "squarefree":
        rep = find_square(w)
        payload = rep.to_dict()
        text = "clean" if rep.clean else f"square at {rep.position} with root {to_str(rep.root)}"
        return RunReport("check", params, "pass" if rep.clean else "fail", payload, text=text)
    if args.kind == "pattern-3u1u3":
        rep = find_pattern_3u1u3(w)
        payload = rep.to_dict()
        text = "clean" if rep.clean else f"3u1u3 at {rep.position} with u = {to_str(rep.u)!r}"
        return RunReport("check", params, "pass" if rep.clean else "fail", payload, text=text)
    rep = max_exponent(w)
    payload = rep.to_dict()
    text = (
        f"max exponent {payload['exponent']} "
        f"(period {rep.period}, length {rep.length}, at {rep.position})"
    )
    outcome = "value"
    if args.bound is not None:
        k = max(2, max(w) + 1) if w else 2
        bound = _parse_bound(args.bound, k)
        payload["bound"] = f"{bound.numerator}/{bound.denominator}"
        payload["clean"] = not rep.exceeds(bound)
        outcome = "pass" if payload["clean"] else "fail"
        text += f"; bound {payload['bound']}: {'clean' if payload['clean'] else 'exceeded'}"
    return RunReport("check", params, outcome, payload, text=text)


def _witness_streams(args):
    defaults = WITNESS_STREAMS[args.witness]
    names = [args.z or defaults[0], args.x or defaults[1], args.y or defaults[2]]
    return names, [resolve_stream(n) for n in names]


def cmd_verify_witness(args) -> RunReport:
    names, (z, x, y) = _witness_streams(args)
    rep = verify_block_factorization(z, x, y, WITNESSES[args.witness](), args.depth)
    params = {"witness": args.witness, "z": names[0], "x": names[1], "y": names[2], "depth": args.depth}
    payload = rep.to_dict()
    if rep.ok:
        text = f"pass: {rep.blocks_used} block pairs verified to depth {rep.depth}"
    else:
        mm = rep.mismatch
        text = f"mismatch in {mm.stream} at {mm.position}: expected {mm.expected}, got {mm.actual}"
    return RunReport("shuffle verify-witness", params, "pass" if rep.ok else "fail", payload, text=text)


def cmd_frontier(args) -> RunReport:
    z, x, y = (resolve_stream(n) for n in (args.z, args.x, args.y))
    f = shuffle_frontier(z, x, y, args.depth)
    states = sorted(f.states)
    params = {"z": args.z, "x": args.x, "y": args.y, "depth": args.depth}
    text = " ".join(f"({i},{j})" for i, j in states) or "empty"
    payload = {"level": f.level, "states": [list(s) for s in states]}
    return RunReport("shuffle frontier", params, "pass" if states else "fail", payload, text=text)


def cmd_survival(args) -> RunReport:
    z, x, y = (resolve_stream(n) for n in (args.z, args.x, args.y))
    curve = survival_curve(z, x, y, args.depth)
    c, n0 = curve.plateau()
    params = {"z": args.z, "x": args.x, "y": args.y, "depth": args.depth}
    values = ["-inf" if v == float("-inf") else int(v) for v in curve.values.tolist()]
    payload = {
        "curve": values,
        "tail_value": values[-1],
        "tail_start": n0,
        "note": "finite-depth evidence only; a plateau is not a proof of non-membership",
    }
    return RunReport("shuffle survival", params, "value", payload, text=curve.to_csv().rstrip("\n"))


def cmd_finite(args) -> RunReport:
    ok = exact_finite_shuffle(word(args.z), word(args.x), word(args.y))
    params = {"z": args.z, "x": args.x, "y": args.y}
    return RunReport("shuffle finite", params, "pass" if ok else "fail", {"shuffle": ok},
                     text="shuffle" if ok else "not a shuffle")


def cmd_build(args) -> RunReport:
    x = resolve_stream(args.word)
    built = build_recurrent_shuffle(x, args.rounds, args.limit, args.u0)
    sched = built.schedule
    rep = verify_block_factorization(x, sched.u_product(), sched.v_product(), sched, built.depth)
    dump = sched.dumps(args.rounds)
    params = {"word": args.word, "rounds": args.rounds, "limit": args.limit, "u0": args.u0}
    payload = {
        "schedule": dump.splitlines(),
        "positions": [list(p) for p in built.positions],
        "covered": built.covered,
        "verification": rep.to_dict(),
    }
    text = dump + ("pass" if rep.ok else "verification mismatch") + f" (covered {built.covered} letters)"
    return RunReport("shuffle build", params, "pass" if rep.ok else "fail", payload, text=text)


def cmd_decode(args) -> RunReport:
    m = resolve_morphism(args.morphism)
    params = {"morphism": args.morphism, "word": args.word}
    try:
        u = decode_bifix(word(args.word), m)
    except NotInImage as exc:
        return RunReport("decode", params, "fail", {"error": str(exc)}, text=str(exc))
    return RunReport("decode", params, "value", {"preimage": to_str(u)}, text=to_str(u))


def cmd_morph_apply(args) -> RunReport:
    m = resolve_morphism(args.morphism)
    params = {"morphism": args.morphism, "word": args.word, "times": args.times}
    w = word(args.word)
    for _ in range(args.times):
        w = m(w)
    out = to_str(w)
    return RunReport("morph apply", params, "value", {"image": out}, text=out)


def cmd_morph_compose(args) -> RunReport:
    outer, inner = resolve_morphism(args.outer), resolve_morphism(args.inner)
    m = compose(outer, inner)
    params = {"outer": args.outer, "inner": args.inner}
    payload = {"images": [to_str(im) for im in m.images]}
    return RunReport("morph compose", params, "value", payload, text=m.dumps().rstrip("\n"))


# --------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--stable", action="store_true", help="omit timing fields")

    source = _Parser(add_help=False)
    source.add_argument("--word", help="catalog word (NAME, NAME@shift or periodic:W)")
    source.add_argument("--morphism", help="catalog morphism or morphism file, with --seed")
    source.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="shuffleword", description="Square-free and self-shuffling infinite words.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("list", parents=[common], help="list catalog entries")
    sp.set_defaults(func=cmd_list)

    sp = sub.add_parser("gen", parents=[common, source], help="print a prefix")
    sp.add_argument("--length", type=int, required=True)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check", parents=[common, source], help="avoidance scans")
    sp.add_argument("kind", choices=["squarefree", "pattern-3u1u3", "exponent"])
    sp.add_argument("--length", type=int, default=100_000)
    sp.add_argument("--bound", help="for exponent: fail above p/q, or 'rt' for the repetition threshold")
    sp.set_defaults(func=cmd_check)

    sh = sub.add_parser("shuffle", help="shuffle relations").add_subparsers(
        dest="shuffle_command", required=True, parser_class=_Parser
    )
    sp = sh.add_parser("verify-witness", parents=[common])
    sp.add_argument("--witness", choices=sorted(WITNESSES), required=True)
    sp.add_argument("--depth", type=int, default=10_000)
    for name in ("z", "x", "y"):
        sp.add_argument(f"--{name}")
    sp.set_defaults(func=cmd_verify_witness)

    for cmd, func, depth in (("frontier", cmd_frontier, 100), ("survival", cmd_survival, 2000)):
        sp = sh.add_parser(cmd, parents=[common])
        for name in ("z", "x", "y"):
            sp.add_argument(f"--{name}", required=True)
        sp.add_argument("--depth", type=int, default=depth)
        sp.set_defaults(func=func)

    sp = sh.add_parser("finite", parents=[common])
    for name in ("z", "x", "y"):
        sp.add_argument(f"--{name}", required=True, help="finite word in digits")
    sp.set_defaults(func=cmd_finite)

    sp = sh.add_parser("build", parents=[common])
    sp.add_argument("--word", required=True)
    sp.add_argument("--rounds", type=int, default=5)
    sp.add_argument("--limit", type=int, default=1_000_000)
    sp.add_argument("--u0", help="initial block (defaults to the first letter)")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("decode", parents=[common], help="bifix desubstitution")
    sp.add_argument("--morphism", required=True)
    sp.add_argument("--word", required=True)
    sp.set_defaults(func=cmd_decode)

    mp = sub.add_parser("morph", help="apply or compose morphisms").add_subparsers(
        dest="morph_command", required=True, parser_class=_Parser
    )
    sp = mp.add_parser("apply", parents=[common])
    sp.add_argument("--morphism", required=True)
    sp.add_argument("--word", required=True)
    sp.add_argument("--times", type=int, default=1)
    sp.set_defaults(func=cmd_morph_apply)
    sp = mp.add_parser("compose", parents=[common])
    sp.add_argument("--outer", required=True)
    sp.add_argument("--inner", required=True)
    sp.set_defaults(func=cmd_morph_compose)
    return p


def _emit_error(args, message: str, code: int) -> int:
    if getattr(args, "json", False):
        print(json.dumps({"outcome": "error", "error": message, "exit_code": code}, sort_keys=True))
    print(f"shuffleword: {message}", file=sys.stderr)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"shuffleword: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    start = time.perf_counter()
    try:
        report = args.func(args)
    except UsageError as exc:
        return _emit_error(args, str(exc), EXIT_USAGE)
    except RecurrenceBudgetExceeded as exc:
        return _emit_error(args, f"recurrence budget exceeded: {exc}", EXIT_BUDGET)
    except (MemoryBudgetExceeded, ExhaustedStream, ExhaustedSchedule) as exc:
        return _emit_error(args, str(exc), EXIT_BUDGET)
    except (InvalidInput, UnknownName) as exc:
        return _emit_error(args, str(exc), EXIT_USAGE)
    except ShuffleWordError as exc:
        return _emit_error(args, str(exc), EXIT_FAIL)
    report.elapsed = time.perf_counter() - start

    if args.json:
        print(json.dumps(report.to_dict(args.stable), sort_keys=True))
    else:
        print(report.text)
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
