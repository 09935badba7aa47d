"""``ledgercat`` command-line interface.

Exit codes: 0 success or Equal, 1 NotEqual or a failed verification,
2 usage or parse errors, 3 Unknown (search budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, Optional, Sequence

from filelock import FileLock

from . import ledger as ledger_mod
from .diagram import to_diagram
from .errors import LedgercatError
from .ownership import (
    Owner,
    build_ownership_theory,
    format_owned_word,
    owned_equal,
    owned_typecheck,
    to_owned_diagram,
)
from .parsing import parse_owned_term, parse_source, parse_term
from .render import layout, render_dot, render_svg
from .rewrite import EqResult, equal_modulo
from .terms import format_word
from .theory import typecheck

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
LEDGER_ENV = "LEDGERCAT_LEDGER"
DEFAULT_LEDGER = "ledger.jsonl"

_VERDICT_EXIT = {EqResult.EQUAL: EXIT_OK, EqResult.NOT_EQUAL: EXIT_NEGATIVE, EqResult.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


def _json(args) -> bool:
    return getattr(args, "json", False)


def _emit(args, payload: Dict, text: str) -> None:
    if _json(args):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_source(path: str):
    return parse_source(_read(path))


def _owned_theory(src):
    return build_ownership_theory(src.theory, src.owners or ledger_mod.DEFAULT_OWNERS)


def _colours(path: Optional[str], base: Dict[str, str]) -> Dict[str, str]:
    out = dict(base)
    if path:
        try:
            extra = json.loads(_read(path))
        except json.JSONDecodeError as exc:
            raise UsageError(f"colour file {path} is not JSON: {exc.msg}") from None
        if not isinstance(extra, dict) or not all(isinstance(v, str) for v in extra.values()):
            raise UsageError("colour file must map owner names to colour strings")
        out.update(extra)
    return out


def _write_image(d, colours, args) -> str:
    lay = layout(d, colours)
    render = render_dot if args.format == "dot" else render_svg
    text = render(lay, show_structural_labels=args.show_structural_labels)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


# -- theory commands -------------------------------------------------------------


def cmd_check(args) -> int:
    src = _load_source(args.theory)
    th = src.theory
    summary = th.summary()
    if src.owners:
        summary += f", {len(src.owners)} owners"
    _emit(args, {
        "ok": True,
        "atoms": list(th.atoms),
        "generators": [g.name for g in th.generators],
        "equations": len(th.equations),
        "owners": [o.name for o in src.owners],
        "summary": summary,
    }, summary)
    return EXIT_OK


def cmd_eq(args) -> int:
    src = _load_source(args.theory)
    if args.owned:
        oth = _owned_theory(src)
        t1, t2 = parse_owned_term(args.term_a, oth), parse_owned_term(args.term_b, oth)
        ty1, ty2 = owned_typecheck(t1, oth), owned_typecheck(t2, oth)
        if ty1 != ty2:
            raise UsageError(
                f"terms are not parallel: {format_owned_word(ty1[0])} -> {format_owned_word(ty1[1])} "
                f"vs {format_owned_word(ty2[0])} -> {format_owned_word(ty2[1])}"
            )
        verdict = owned_equal(t1, t2, oth, args.budget)
    else:
        t1, t2 = parse_term(args.term_a, src.theory), parse_term(args.term_b, src.theory)
        ty1, ty2 = typecheck(t1, src.theory), typecheck(t2, src.theory)
        if ty1 != ty2:
            raise UsageError(
                f"terms are not parallel: {format_word(ty1[0])} -> {format_word(ty1[1])} "
                f"vs {format_word(ty2[0])} -> {format_word(ty2[1])}"
            )
        verdict = equal_modulo(t1, t2, src.theory, args.budget)
    _emit(args, {"verdict": str(verdict)}, str(verdict))
    return _VERDICT_EXIT[verdict]


def cmd_render(args) -> int:
    src = _load_source(args.theory)
    if args.owned:
        oth = _owned_theory(src)
        d = to_owned_diagram(parse_owned_term(args.term, oth), oth)
        colours = oth.colours()
    else:
        d = to_diagram(parse_term(args.term, src.theory), src.theory)
        colours = {}
    _write_image(d, _colours(args.colours, colours), args)
    if _json(args) and args.output and args.output != "-":
        print(json.dumps({"output": args.output, "boxes": len(d.nodes), "wires": len(d.wires())}, sort_keys=True))
    return EXIT_OK


# -- ledger commands ---------------------------------------------------------------


def _ledger_path(args) -> str:
    return args.ledger or os.environ.get(LEDGER_ENV) or DEFAULT_LEDGER


def _parse_owner(spec: str) -> Owner:
    name, _, colour = spec.partition(":")
    try:
        return Owner(name, colour or "#888888")
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _state(led) -> Dict:
    return {
        "transactions": len(led),
        "frontier": [{"position": i, "owner": o, "value": v} for i, (v, o) in enumerate(led.coins())],
        "balances": ledger_mod.balances(led),
    }


def _show_text(led) -> str:
    lines = [f"{len(led)} transactions"]
    for i, (v, o) in enumerate(led.coins()):
        lines.append(f"  [{i}] {v} @ {o}")
    bal = ledger_mod.balances(led)
    lines.append("balances: " + (", ".join(f"{o}={v}" for o, v in bal.items()) or "(none)"))
    return "\n".join(lines)


def cmd_ledger_init(args) -> int:
    path = _ledger_path(args)
    owners = [_parse_owner(s) for s in args.owner] or list(ledger_mod.DEFAULT_OWNERS)
    with FileLock(path + ".lock"):
        if os.path.exists(path) and not args.force:
            raise UsageError(f"{path} already exists (use --force to overwrite)")
        led = ledger_mod.Ledger.empty(owners)
        ledger_mod.save(led, path)
    _emit(args, {"ledger": path, "owners": [o.name for o in owners]}, f"initialised {path}")
    return EXIT_OK


def _load_ledger(path: str):
    if not os.path.exists(path):
        raise UsageError(f"no ledger at {path} (run `ledgercat ledger init`)")
    return ledger_mod.load(path)


def _mutate(args, step) -> int:
    path = _ledger_path(args)
    with FileLock(path + ".lock"):
        led = step(_load_ledger(path))
        ledger_mod.save(led, path)
    _emit(args, _state(led), _show_text(led))
    return EXIT_OK


def cmd_ledger_mint(args) -> int:
    return _mutate(args, lambda led: led.mint(args.owner, args.n))


def cmd_ledger_split(args) -> int:
    return _mutate(args, lambda led: led.split(args.pos, args.k))


def cmd_ledger_merge(args) -> int:
    return _mutate(args, lambda led: led.merge(args.pos_a, args.pos_b))


def cmd_ledger_transfer(args) -> int:
    return _mutate(args, lambda led: led.transfer(args.pos, args.owner))


def cmd_ledger_show(args) -> int:
    led = _load_ledger(_ledger_path(args))
    _emit(args, _state(led), _show_text(led))
    return EXIT_OK


def cmd_ledger_verify(args) -> int:
    path = _ledger_path(args)
    if not os.path.exists(path):
        raise UsageError(f"no ledger at {path}")
    try:
        led = ledger_mod.load(path)
        problem = ledger_mod.verify(led)
    except LedgercatError as exc:
        problem = str(exc)
    if problem is None:
        _emit(args, {"ok": True, "transactions": len(led)}, f"OK ({len(led)} transactions)")
        return EXIT_OK
    _emit(args, {"ok": False, "error": problem}, f"FAILED: {problem}")
    return EXIT_NEGATIVE


def cmd_ledger_render(args) -> int:
    led = _load_ledger(_ledger_path(args))
    d = to_owned_diagram(led.morphism, led.theory)
    _write_image(d, _colours(args.colours, led.theory.colours()), args)
    if _json(args) and args.output and args.output != "-":
        print(json.dumps({"output": args.output, "boxes": len(d.nodes), "wires": len(d.wires())}, sort_keys=True))
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------------


def _image_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("svg", "dot"), default="svg")
    p.add_argument("--colours", help="JSON file mapping owner names to colours")
    p.add_argument("--show-structural-labels", action="store_true",
                   help="draw regrouping maps as labelled boxes")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # suppressed default so a flag given before the subcommand is not reset
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    parser = argparse.ArgumentParser(prog="ledgercat", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="parse and summarise a theory file")
    p.add_argument("theory")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eq", parents=[common], help="decide equality of two terms")
    p.add_argument("--theory", required=True)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--owned", action="store_true", help="terms live in the ownership construction")
    p.add_argument("term_a")
    p.add_argument("term_b")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("render", parents=[common], help="draw a term as a string diagram")
    p.add_argument("--theory", required=True)
    p.add_argument("--owned", action="store_true")
    p.add_argument("term")
    _image_flags(p)
    p.set_defaults(func=cmd_render)

    lp = sub.add_parser("ledger", parents=[common], help="operate a coin ledger file")
    lp.add_argument("--ledger", help=f"ledger file (default: ${LEDGER_ENV} or {DEFAULT_LEDGER})")
    lsub = lp.add_subparsers(dest="ledger_command", required=True)

    q = lsub.add_parser("init", parents=[common])
    q.add_argument("--owner", action="append", default=[], metavar="NAME[:COLOUR]")
    q.add_argument("--force", action="store_true")
    q.set_defaults(func=cmd_ledger_init)

    q = lsub.add_parser("mint", parents=[common])
    q.add_argument("owner")
    q.add_argument("n", type=int)
    q.set_defaults(func=cmd_ledger_mint)

    q = lsub.add_parser("split", parents=[common])
    q.add_argument("pos", type=int)
    q.add_argument("k", type=int)
    q.set_defaults(func=cmd_ledger_split)

    q = lsub.add_parser("merge", parents=[common])
    q.add_argument("pos_a", type=int)
    q.add_argument("pos_b", type=int)
    q.set_defaults(func=cmd_ledger_merge)

    q = lsub.add_parser("transfer", parents=[common])
    q.add_argument("pos", type=int)
    q.add_argument("owner")
    q.set_defaults(func=cmd_ledger_transfer)

    q = lsub.add_parser("show", parents=[common])
    q.set_defaults(func=cmd_ledger_show)

    q = lsub.add_parser("verify", parents=[common])
    q.set_defaults(func=cmd_ledger_verify)

    q = lsub.add_parser("render", parents=[common])
    _image_flags(q)
    q.set_defaults(func=cmd_ledger_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LedgercatError) as exc:
        msg = str(exc)
        if _json(args):
            print(json.dumps({"error": msg, "kind": type(exc).__name__}, sort_keys=True))
        else:
            print(f"ledgercat: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
