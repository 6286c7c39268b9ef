"""Command-line interface: simulate, convert, compare, and generate automata.

One command per invocation; documents are the JSON format of
``qfa.serialization``. Words on the command line are comma-separated
symbol names, with ``--word ""`` for the empty word.

Exit codes: 0 success (for ``equiv``: equivalent; for ``member``: member),
1 negative verdict (inequivalent / not a member / invalid document for
``validate``), 2 any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import RandomSpec, gpfa_equivalent, random_gpfa, random_kwqfa, random_nqfa, random_qfc
from .convert import kwqfa_to_nqfa, kwqfa_to_qfc, nqfa_to_gpfa, pfa_to_gpfa, qfc_to_gpfa
from .errors import DocumentError, QfaError
from .models import GPFA, KWQFA, NQFA, PFA, QFC, Cutpoint, Word
from .serialization import parse, serialize
from .sim import run_gpfa, run_nqfa, run_qfc, sweep


def _load(path: str):
    return parse(Path(path).read_text(encoding="utf-8"))


def _parse_word(text: str) -> Word:
    if text == "":
        return ()
    parts = text.split(",")
    if any(p == "" for p in parts):
        raise QfaError(f"malformed word {text!r}: empty symbol name")
    return tuple(parts)


def _fmt_value(x: float) -> str:
    return f"{x:.17g}"


def _cmd_run(args: argparse.Namespace) -> int:
    model = _load(args.model)
    word = _parse_word(args.word)
    if isinstance(model, GPFA):
        print(_fmt_value(run_gpfa(model, word)))
        if args.trace:
            print(f"{'step':>4}  {'symbol':<8}  value-so-far")
            x = model.initial
            print(f"{0:>4}  {'':<8}  {_fmt_value(float(x @ model.final))}")
            for i, sym in enumerate(word, start=1):
                x = x @ model.transitions[sym]
                print(f"{i:>4}  {sym:<8}  {_fmt_value(float(x @ model.final))}")
        return 0
    result = run_qfc(model, word) if isinstance(model, QFC) else run_nqfa(model, word)
    print(_fmt_value(result.final_accept))
    if args.trace:
        print(f"{'step':>4}  {'symbol':<8}  {'cum-accept':<22}  {'cum-reject':<22}  survivor")
        for i, rec in enumerate(result.trace, start=1):
            print(
                f"{i:>4}  {rec.symbol:<8}  {_fmt_value(rec.cumulative_accept):<22}  "
                f"{_fmt_value(rec.cumulative_reject):<22}  {_fmt_value(rec.survivor_trace)}"
            )
    return 0


def _convert(model: object, target: str):
    if isinstance(model, KWQFA):
        if target == "nqfa":
            return kwqfa_to_nqfa(model)
        if target == "qfc":
            return kwqfa_to_qfc(model)
        if target == "gpfa":
            return nqfa_to_gpfa(kwqfa_to_nqfa(model))
    elif isinstance(model, NQFA):
        if target == "gpfa":
            return nqfa_to_gpfa(model)
    elif isinstance(model, QFC):
        if target == "gpfa":
            return qfc_to_gpfa(model)
    elif isinstance(model, PFA):
        if target == "gpfa":
            return pfa_to_gpfa(model)
    raise QfaError(f"no conversion from {type(model).__name__.lower()} to {target}")


def _cmd_convert(args: argparse.Namespace) -> int:
    model = _load(args.model)
    converted = _convert(model, args.to)
    Path(args.out).write_text(serialize(converted), encoding="utf-8")
    size = converted.size if isinstance(converted, GPFA) else len(converted.states)
    print(f"wrote {args.to} with {size} states to {args.out}")
    return 0


def _cmd_equiv(args: argparse.Namespace) -> int:
    g1 = _load(args.first)
    g2 = _load(args.second)
    if not isinstance(g1, GPFA) or not isinstance(g2, GPFA):
        raise QfaError("equiv expects two gpfa (or pfa) documents")
    verdict = gpfa_equivalent(g1, g2, mode="exact" if args.exact else "numeric")
    if verdict.equivalent:
        print(f"equivalent (max observed gap {verdict.max_observed_gap:.3e})")
        return 0
    witness = ",".join(verdict.witness or ())
    print(f'not equivalent: witness "{witness}" separates values by {verdict.max_observed_gap:.17g}')
    return 1


def _cmd_member(args: argparse.Namespace) -> int:
    model = _load(args.model)
    if not isinstance(model, GPFA):
        raise QfaError("member expects a gpfa (or pfa) document")
    word = _parse_word(args.word)
    try:
        cutpoint = Cutpoint(args.cutpoint)
    except ValueError as exc:
        raise QfaError(str(exc)) from None
    value = run_gpfa(model, word)
    member = value > cutpoint.value
    print("true" if member else "false")
    return 0 if member else 1


def _cmd_sweep(args: argparse.Namespace) -> int:
    model = _load(args.model)
    rows = sweep(model, args.symbol, args.max_len)
    if args.csv:
        print("k,value")
        for k, value in rows:
            print(f"{k},{_fmt_value(value)}")
    else:
        print(f"{'k':>4}  value")
        for k, value in rows:
            print(f"{k:>4}  {_fmt_value(value)}")
    return 0


_RANDOM_BUILDERS = {
    "nqfa": random_nqfa,
    "kwqfa": random_kwqfa,
    "qfc": random_qfc,
    "gpfa": random_gpfa,
}


def _cmd_random(args: argparse.Namespace) -> int:
    spec = RandomSpec(seed=args.seed, states=args.states, alphabet_size=args.alphabet)
    try:
        model = _RANDOM_BUILDERS[args.kind](spec)
    except ValueError as exc:
        raise QfaError(str(exc)) from None
    text = serialize(model, metadata={"name": f"random-{args.kind}", "seed": str(args.seed)})
    Path(args.out).write_text(text, encoding="utf-8")
    print(f"wrote random {args.kind} (seed {args.seed}) to {args.out}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        model = _load(args.model)
    except DocumentError as exc:
        print(f"invalid: {exc}")
        return 1
    kind = type(model).__name__.lower()
    print(f"valid {kind}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfa",
        description="Simulate, convert, and compare quantum and probabilistic finite automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="acceptance probability of a model on a word")
    p.add_argument("model", help="model document")
    p.add_argument("--word", required=True, help='comma-separated symbols; "" for the empty word')
    p.add_argument("--trace", action="store_true", help="print the per-step table")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("convert", help="compile a model into another kind")
    p.add_argument("model")
    p.add_argument("--to", required=True, choices=("gpfa", "nqfa", "qfc"))
    p.add_argument("--out", required=True, help="output document path")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("equiv", help="decide functional equality of two gpfa documents")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--exact", action="store_true", help="exact rational arithmetic")
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("member", help="strict cutpoint membership of a word")
    p.add_argument("model")
    p.add_argument("--cutpoint", required=True, type=float)
    p.add_argument("--word", required=True)
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("sweep", help="table of values on powers of one symbol")
    p.add_argument("model")
    p.add_argument("--symbol", required=True)
    p.add_argument("--max-len", required=True, type=int)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("random", help="generate a seeded random model document")
    p.add_argument("--kind", required=True, choices=sorted(_RANDOM_BUILDERS))
    p.add_argument("--states", required=True, type=int)
    p.add_argument("--alphabet", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_random)

    p = sub.add_parser("validate", help="check a document; exit 0 iff valid")
    p.add_argument("model")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QfaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
