"""Command-line front end.

    ifgcyl eval    --structure S --formula F [--team LIT|full] [--n N]
    ifgcyl meaning --structure S --formula F [--n N]
    ifgcyl perfect --formula F [--structure S] [--n N]
    ifgcyl iso     --structure S --n N
    ifgcyl closure --structure S --n N [--signature empty|full] [--formula F ...]

Exit codes: 0 success, 1 usage/parse error, 2 budget exceeded,
3 invariant violation (including a failed isomorphism check).
"""
from __future__ import annotations

import argparse
import re
import sys
from collections.abc import Sequence

from . import algebra
from .budget import Budget
from .errors import BudgetExceeded, IFGError, InvariantViolation
from .formula import parse, perfection, is_perfect as formula_is_perfect
from .model import Space, load_structure, space
from .semantics import Evaluator, meaning

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(IFGError):
    pass


def parse_team(text: str, sp: Space) -> int:
    """``full``, ``{}`` or a literal like ``{(0,0),(1,1)}``."""
    text = text.strip()
    if text == "full":
        return sp.full
    if not (text.startswith("{") and text.endswith("}")):
        raise UsageError(f"team literal must look like {{(0,1),(1,0)}} or 'full': {text!r}")
    inner = text[1:-1]
    tuples = re.findall(r"\(([^)]*)\)", inner)
    if re.sub(r"\([^)]*\)", "", inner).replace(",", "").strip():
        raise UsageError(f"cannot read team literal {text!r}")
    team = []
    for body in tuples:
        try:
            a = tuple(int(x) for x in body.split(","))
        except ValueError:
            raise UsageError(f"bad valuation ({body})") from None
        if len(a) != sp.n:
            raise UsageError(f"valuation {a} should have {sp.n} entries")
        team.append(a)
    return sp.mask(team)


def format_team(sp: Space, mask: int) -> str:
    return "{" + ",".join("(" + ",".join(map(str, a)) + ")" for a in sp.sorted_team(mask)) + "}"


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _emit(pairs: list[tuple[str, str]], fmt: str) -> None:
    for key, value in pairs:
        if fmt == "machine":
            print(f"{key.upper().replace(' ', '_')}={value}")
        else:
            print(f"{key}: {value}")


def _budget(args) -> Budget:
    return Budget(
        enumeration=args.enum_budget,
        meaning_valuations=args.meaning_budget,
        search_valuations=args.search_budget,
        search_steps=args.search_steps,
        closure_cap=args.closure_cap,
    )


def _need(args, *names: str) -> None:
    for name in names:
        if getattr(args, name) in (None, []):
            raise UsageError(f"{args.verb} needs --{name}")


def _formula(args):
    return parse(args.formula, args.n)


def run_eval(args) -> int:
    _need(args, "structure", "formula")
    structure = load_structure(args.structure)
    phi = _formula(args)
    ev = Evaluator(structure, phi, _budget(args))
    team = parse_team(args.team, ev.space)
    _emit(
        [("plus", str(ev.plus(0, team)).lower()), ("minus", str(ev.minus(0, team)).lower())],
        args.format,
    )
    return EXIT_OK


def _element_flags(x: algebra.Element) -> list[tuple[str, str]]:
    return [
        ("suit", _yn(algebra.is_suit(x.plus) and algebra.is_suit(x.minus))),
        ("double suit", _yn(algebra.is_double_suit(x))),
        ("flat", _yn(algebra.is_flat(x))),
        ("perfect", _yn(algebra.is_perfect(x))),
    ]


def run_meaning(args) -> int:
    _need(args, "structure", "formula")
    structure = load_structure(args.structure)
    phi = _formula(args)
    m = meaning(structure, phi, _budget(args))
    if not algebra.is_double_suit(m):
        raise InvariantViolation(f"meaning of {phi} is not a double suit")
    sp = m.space
    if args.format == "machine":
        pairs = [("trump", format_team(sp, t)) for t in m.plus.maximal]
        pairs += [("cotrump", format_team(sp, t)) for t in m.minus.maximal]
        pairs += [("zero", _yn(m == algebra.zero(sp.size, sp.n)))]
        _emit(pairs + _element_flags(m), "machine")
    else:
        print("maximal trumps:")
        for t in m.plus.maximal:
            print("  " + format_team(sp, t))
        print("maximal cotrumps:")
        for t in m.minus.maximal:
            print("  " + format_team(sp, t))
        if m == algebra.zero(sp.size, sp.n):
            print("meaning = zero")
        elif m == algebra.one(sp.size, sp.n):
            print("meaning = one")
        _emit(_element_flags(m), "text")
    return EXIT_OK


def run_perfect(args) -> int:
    _need(args, "formula")
    phi = _formula(args)
    perfect = perfection(phi)
    pairs = [("perfection", str(perfect)), ("perfect formula", _yn(formula_is_perfect(phi)))]
    if args.structure:
        structure = load_structure(args.structure)
        budget = _budget(args)
        m, m0 = meaning(structure, phi, budget), meaning(structure, perfect, budget)
        pairs += [
            ("meaning perfect", _yn(algebra.is_perfect(m))),
            ("same meaning as perfection", _yn(m == m0)),
        ]
    _emit(pairs, args.format)
    return EXIT_OK


def run_iso(args) -> int:
    _need(args, "structure", "n")
    structure = load_structure(args.structure)
    report = algebra.verify_isomorphism(structure, args.n, _budget(args))
    print(report.machine() if args.format == "machine" else report.text())
    return EXIT_OK if report.passed else EXIT_INVARIANT


def run_closure(args) -> int:
    _need(args, "structure", "n")
    structure = load_structure(args.structure)
    budget = _budget(args)
    n = args.n
    gens = [algebra.atomic_meaning(structure, a, n) for a in structure.atoms(n)]
    for text in args.formula or []:
        gens.append(meaning(structure, parse(text, n), budget))
    closure = algebra.generate_subalgebra(gens, structure.size, n, args.signature, budget)
    els = closure.elements
    _emit(
        [
            ("elements", str(len(els))),
            ("double suits", str(sum(algebra.is_double_suit(x) for x in els))),
            ("flat", str(sum(algebra.is_flat(x) for x in els))),
            ("perfect", str(sum(algebra.is_perfect(x) for x in els))),
        ],
        args.format,
    )
    if args.format == "text" and args.verbose:
        sp = space(structure.size, n)
        for i, x in enumerate(els):
            plus = " ".join(format_team(sp, t) for t in x.plus.maximal)
            minus = " ".join(format_team(sp, t) for t in x.minus.maximal)
            print(f"  [{i}] +: {plus}   -: {minus}   perfect={_yn(algebra.is_perfect(x))}")
    return EXIT_OK


COMMANDS = {
    "eval": run_eval,
    "meaning": run_meaning,
    "perfect": run_perfect,
    "iso": run_iso,
    "closure": run_closure,
}


def build_parser() -> argparse.ArgumentParser:
    defaults = Budget()
    p = argparse.ArgumentParser(prog="ifgcyl", description="IFG team semantics and cylindric set algebras")
    p.add_argument("verb", choices=sorted(COMMANDS))
    p.add_argument("--structure", help="structure file")
    p.add_argument("--formula", action="append", help="formula text (closure accepts several)")
    p.add_argument("--team", default="full", help="team literal such as {(0,0),(1,1)}, or 'full'")
    p.add_argument("--n", type=int, help="number of variables")
    p.add_argument("--format", choices=["text", "machine"], default="text")
    p.add_argument("--signature", choices=["empty", "full"], default="empty")
    p.add_argument("--verbose", "-v", action="store_true")
    p.add_argument("--enum-budget", type=int, default=defaults.enumeration)
    p.add_argument("--meaning-budget", type=int, default=defaults.meaning_valuations,
                   help="max |A|^N for meaning computations")
    p.add_argument("--search-budget", type=int, default=defaults.search_valuations,
                   help="max |A|^N for team-by-team evaluation")
    p.add_argument("--search-steps", type=int, default=defaults.search_steps)
    p.add_argument("--closure-cap", type=int, default=defaults.closure_cap)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.formula and args.verb != "closure":
        if len(args.formula) > 1:
            print(f"error: {args.verb} takes a single --formula", file=sys.stderr)
            return EXIT_USAGE
        args.formula = args.formula[0]
    try:
        return COMMANDS[args.verb](args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (IFGError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
