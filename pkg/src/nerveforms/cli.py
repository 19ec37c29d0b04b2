"""Command-line driver: ``nerveforms {verify,generate,eval,parse}``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage
errors (bad arguments, unsupported combinations, unparseable input).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

import numpy as np

from .chernweil import InvariantPoly, bss_generate, cs_transgress
from .oracle import EvalContext, eval_form
from .simplicial import PG, Cochain
from .suites import SUITES, SuiteOptions, run_suite
from .textio import ParseError, cochain_to_json, parse, print_canonical, print_latex, to_json
from .torus import torus_bss_c, torus_bss_ch, torus_cs_c, torus_cs_ch


class UsageError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("NERVEFORMS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"NERVEFORMS_SEED must be an integer, got {env!r}") from None


def _emit_element(x, fmt: str) -> str:
    if fmt == "json":
        return to_json(x)
    if fmt == "latex":
        return print_latex(x)
    return print_canonical(x)


def _emit_cochain(c: Cochain, fmt: str, names: Optional[dict] = None) -> str:
    if fmt == "json":
        return cochain_to_json(c)
    lines = []
    for p in c.levels():
        label = (names or {}).get(p, f"level {p}")
        body = print_latex(c[p]) if fmt == "latex" else print_canonical(c[p])
        lines.append(f"{label}: {body}")
    return "\n".join(lines) if lines else "0"


# -- verify -------------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.q is not None and not 0 <= args.q <= 2:
        raise UsageError("--q must be 0, 1 or 2 (bidegrees of the third Chern character)")
    opts = SuiteOptions(p=args.p, n=args.n, q=args.q, seed=args.seed, trials=args.trials, tol=args.tol,
                        numeric=not args.no_numeric)
    rep = run_suite(args.suite, opts)
    if args.format == "json":
        print(rep.to_json(timings=args.timings))
    elif args.format == "latex":
        print(rep.to_latex())
    else:
        print(rep.to_text(timings=args.timings))
    return 0 if rep.passed else 1


# -- generate -----------------------------------------------------------------------------

def _parse_poly(text: str):
    if text == "pf":
        return "pf", None
    kind, _, deg = text.partition(":")
    if kind not in ("ch", "c") or not deg.isdigit() or int(deg) < 1:
        raise UsageError(f"--poly must be ch:<p>, c:<p> or pf, got {text!r}")
    return kind, int(deg)


def _parse_group(text: str):
    if text in ("gl", "so4"):
        return text, None
    kind, _, n = text.partition(":")
    if kind != "torus" or not n.isdigit() or int(n) < 1:
        raise UsageError(f"--group must be torus:<n>, gl or so4, got {text!r}")
    return "torus", int(n)


def cmd_generate(args) -> int:
    kind, deg = _parse_poly(args.poly)
    group, n = _parse_group(args.group)
    if group == "torus":
        if kind == "pf":
            raise UsageError("the Pfaffian is not defined on the torus path")
        fns = {("bss", "ch"): torus_bss_ch, ("cs", "ch"): torus_cs_ch,
               ("bss", "c"): torus_bss_c, ("cs", "c"): torus_cs_c}
        x = fns[(args.target, kind)](deg, n)
        print(_emit_element(x, args.format))
        return 0
    if group == "gl" and kind == "pf":
        raise UsageError("the Pfaffian needs --group so4")
    if group == "so4" and kind != "pf":
        raise UsageError("--group so4 supports only --poly pf")
    P = InvariantPoly.pf() if kind == "pf" else (
        InvariantPoly.ch(deg) if kind == "ch" else InvariantPoly.chern_class(deg))
    k = P.degree
    if args.target == "bss":
        levels = range(1, k + 1)
        make = bss_generate
        names = {p: f"level {p}, degree {2 * k - p}" for p in levels}
    else:
        levels = range(0, k)
        make = cs_transgress
        names = {p: f"level {p}, degree {2 * k - 1 - p}" for p in levels}
    if args.level is not None:
        if args.level not in levels:
            raise UsageError(f"level {args.level} outside {list(levels)}")
        levels = [args.level]
    c = Cochain(PG, {p: make(P, p) for p in levels})
    print(_emit_cochain(c, args.format, names))
    return 0


# -- eval / parse -----------------------------------------------------------------------------

def _parse_or_usage(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"parse error: {exc}") from None


def cmd_eval(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc}") from None
    x = _parse_or_usage(text)
    print(print_canonical(x))
    if args.numeric:
        if x.has_t_content():
            raise UsageError("t/dt content cannot be evaluated numerically")
        if not x.terms:
            print("numeric: element is zero, max |value| = 0")
            return 0
        k = x.degree()
        seeds = np.random.SeedSequence(args.seed).spawn(args.trials)
        values = [abs(complex(np.sum(eval_form(x, EvalContext(args.n, k, rng=np.random.default_rng(s))))))
                  for s in seeds]
        worst = max(values)
        verdict = "zero within tolerance" if worst < args.tol else "nonzero"
        print(f"numeric: n={args.n} trials={args.trials} seed={args.seed} "
              f"max |value| = {worst:.6e} mean |value| = {sum(values) / len(values):.6e} ({verdict})")
    return 0


def cmd_parse(args) -> int:
    x = _parse_or_usage(args.expr)
    print(_emit_element(x, args.format))
    return 0


# -- entry point ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nerveforms",
                                 description="Exact Chern-Weil and Chern-Simons forms on NG and PG.")
    sub = ap.add_subparsers(dest="command", required=True)

    def numeric_flags(p, trials=20):
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $NERVEFORMS_SEED or 0)")
        p.add_argument("--trials", type=int, default=trials)
        p.add_argument("--tol", type=float, default=1e-9)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=["all", *SUITES], default="all")
    v.add_argument("--p", type=int, default=None, help="degree/level bound (default per suite)")
    v.add_argument("--n", type=int, default=None, help="torus rank (torus suite)")
    v.add_argument("--q", type=int, default=None)
    numeric_flags(v)
    v.add_argument("--format", choices=["text", "json", "latex"], default="text")
    v.add_argument("--no-numeric", action="store_true", help="skip the floating-point oracle")
    v.add_argument("--timings", action="store_true", help="include wall times (JSON output is then not reproducible)")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="print a cocycle or Chern-Simons form")
    g.add_argument("--target", choices=["bss", "cs"], required=True)
    g.add_argument("--poly", required=True, help="ch:<p>, c:<p> or pf")
    g.add_argument("--group", required=True, help="torus:<n>, gl or so4")
    g.add_argument("--level", type=int, default=None)
    g.add_argument("--format", choices=["text", "json", "latex"], default="text")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("eval", help="normalize an expression read from a file")
    e.add_argument("file")
    e.add_argument("--numeric", action="store_true", help="also evaluate on random points")
    e.add_argument("--n", type=int, default=2)
    numeric_flags(e)
    e.set_defaults(func=cmd_eval)

    pr = sub.add_parser("parse", help="parse an expression and print it")
    pr.add_argument("expr")
    pr.add_argument("--format", choices=["text", "json", "latex"], default="text")
    pr.set_defaults(func=cmd_parse)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        for flag in ("p", "n", "trials"):
            val = getattr(args, flag, None)
            if val is not None and val < 1:
                raise UsageError(f"--{flag} must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"nerveforms: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
