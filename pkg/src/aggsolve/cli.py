"""Command-line driver: ``aggsolve --theory set [FILE]``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from .limits import Limits, ResourceLimit
from .oracle import DEFAULT_SIGNATURE, Signature, brute_sat, enumerate_universe
from .solver import SolverConfig, sat
from .syntax import ParseError, format_literal, format_term, parse
from .terms import Theory

__all__ = ["main", "run", "build_parser"]

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="aggsolve",
        description="Decide conjunctions of =, !=, in, nin over lists, multisets, compact lists or sets.",
    )
    p.add_argument("file", nargs="?", default="-", help="constraint file ('-' or omitted reads stdin)")
    p.add_argument("--theory", required=True, choices=[t.value for t in Theory])
    p.add_argument("--mode", default="sat", choices=["sat", "all", "witness"])
    p.add_argument("--format", default="text", choices=["text", "json"], dest="fmt")
    p.add_argument("--branch-limit", type=int, default=Limits().branch_limit)
    p.add_argument("--seed", type=int, default=0, help="first counter value for generated variables")
    p.add_argument("--no-member-elim", action="store_true",
                   help="keep membership literals instead of rewriting t in X to X = {t|N}")
    p.add_argument("--oracle-check", type=int, metavar="DEPTH", default=None,
                   help="cross-check the verdict by exhaustive search up to DEPTH")
    return p


def _report(theory: Theory, outcome, witness_mode: bool) -> dict:
    forms = []
    for form in outcome.solved_forms:
        forms.append({
            "literals": [format_literal(theory, l) for l in form.constraint.literals],
            "fresh_vars": sorted(v.name for v in form.fresh_vars),
        })
    out = {"status": outcome.verdict.value, "solved_forms": forms}
    if witness_mode and outcome.solved_forms and outcome.solved_forms[0].witness is not None:
        w = outcome.solved_forms[0].witness
        out["witness"] = {x.name: format_term(theory, w[x]) for x in sorted(w, key=lambda v: v.name)}
    out["stats"] = outcome.stats.as_dict()
    return out


def _print_text(report: dict, out: TextIO) -> None:
    print(report["status"], file=out)
    for i, form in enumerate(report.get("solved_forms", []), 1):
        body = " & ".join(form["literals"]) or "true"
        print(f"solved form {i}: {body}", file=out)
        if form["fresh_vars"]:
            print(f"  fresh: {', '.join(form['fresh_vars'])}", file=out)
    if "witness" in report:
        print("witness:", file=out)
        for name, text in report["witness"].items():
            print(f"  {name} = {text}", file=out)
    if "oracle" in report:
        o = report["oracle"]
        print(f"oracle (depth {o['depth']}): {'solution found' if o['found'] else 'no solution'}"
              f"{'' if o['agrees'] else ' -- DISAGREES'}", file=out)
    if "stats" in report:
        s = report["stats"]
        print(f"branches: {s['branches']}, rule applications: {s['rule_applications']}", file=out)


def run(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
        stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_SAT
    theory = Theory(args.theory)
    try:
        if args.file == "-":
            text = stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"aggsolve: cannot read {args.file}: {exc}", file=stderr)
        return EXIT_ERROR
    try:
        constraint = parse(text, theory)
    except ParseError as exc:
        print(f"aggsolve: syntax error at {exc}", file=stderr)
        return EXIT_ERROR
    if args.branch_limit < 1:
        print("aggsolve: --branch-limit must be positive", file=stderr)
        return EXIT_ERROR
    config = SolverConfig(
        all_solutions=args.mode == "all",
        witness=args.mode == "witness",
        member_elim=not args.no_member_elim,
        limits=Limits(branch_limit=args.branch_limit),
        seed=args.seed,
    )
    try:
        outcome = sat(theory, constraint, config)
    except ResourceLimit as exc:
        report = {"status": "resource_limit", "solved_forms": [], "error": str(exc)}
        _emit(report, args.fmt, stdout)
        print(f"aggsolve: {exc}", file=stderr)
        return EXIT_ERROR
    report = _report(theory, outcome, args.mode == "witness")
    if args.oracle_check is not None:
        universe = enumerate_universe(theory, _signature_for(constraint), args.oracle_check)
        found = brute_sat(theory, constraint, universe) is not None
        agrees = found or not outcome.sat
        report["oracle"] = {"depth": args.oracle_check, "found": found, "agrees": agrees}
        if not agrees:
            print("aggsolve: oracle found a solution the solver missed", file=stderr)
    _emit(report, args.fmt, stdout)
    return EXIT_SAT if outcome.sat else EXIT_UNSAT


def _signature_for(constraint) -> Signature:
    """Default signature extended with the symbols the constraint mentions."""
    consts = list(DEFAULT_SIGNATURE.constants)
    funs = list(DEFAULT_SIGNATURE.functors)
    cons_functors = {t.cons for t in Theory}
    for lit in constraint.literals:
        for side in (lit.lhs, lit.rhs):
            stack = [side]
            while stack:
                t = stack.pop()
                if hasattr(t, "functor"):
                    if t.functor in cons_functors:
                        pass
                    elif not t.args and t.functor not in consts:
                        consts.append(t.functor)
                    elif t.args and (t.functor, len(t.args)) not in funs:
                        funs.append((t.functor, len(t.args)))
                    stack.extend(t.args)
    return Signature(tuple(consts), tuple(funs))


def _emit(report: dict, fmt: str, out: TextIO) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True), file=out)
    else:
        _print_text(report, out)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
