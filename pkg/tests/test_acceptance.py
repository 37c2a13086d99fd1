"""Acceptance criteria, one test each.

Every test prints a single ``CRITERION n: PASS`` or ``CRITERION n: FAIL``
line (visible with ``pytest -s`` or in the terminal summary) before
asserting.  The random corpora are seeded, so runs are reproducible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from aggsolve.constraints import Constraint, Literal, Rel
from aggsolve.corpus import random_constraint, random_equations
from aggsolve.equational import e_equal, eval_ground, normalize
from aggsolve.limits import ResourceLimit
from aggsolve.oracle import (
    DEFAULT_SIGNATURE, SearchBudgetExceeded, Signature, brute_sat, closure_partition, enumerate_universe, is_instance,
)
from aggsolve.solver import SolverConfig, member_closure, membership_consistent, sat
from aggsolve.syntax import format_constraint, parse, parse_term
from aggsolve.terms import App, FreshSupply, Substitution, Term, Theory, Var, free_vars
from aggsolve.unify import unify_equations
from aggsolve.witness import VerificationFailed

CORPUS_SIZE = 1000
SHUFFLED_BUDGET = 5000
DEMOS = Path(__file__).resolve().parents[1] / "demos"
_lines: list[str] = []


def report(request, number: int, ok: bool, detail: str) -> None:
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    _lines.append(line)
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        reporter.write_line("")
        reporter.write_line(line)
    else:
        print(line)


def P(text, theory):
    return parse(text, theory, allow_reserved=True)


# ---------------------------------------------------------------------------
# 1. worked examples


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def test_criterion_1_worked_examples(request):
    failures = []
    slowest = 0.0

    def check(name, fn, expected):
        nonlocal slowest
        got, dt = _timed(fn)
        slowest = max(slowest, dt)
        if got != expected or dt >= 1.0:
            failures.append(f"{name}: got {got!r} in {dt:.2f}s")

    for theory in Theory:
        check(f"cycle {theory.value}", lambda: sat(theory, P("X in Y & Y in X", theory)).sat, False)
    S = Theory.SET
    check("{A,B} in X & {B,A} nin X", lambda: sat(S, P("{A, B} in X & {B, A} nin X", S)).sat, False)

    def nested_member():
        c = P("{A} in X & {a} nin X", S)
        out = sat(S, c, SolverConfig(witness=True))
        return out.sat and all(eval_ground(S, c, w) for w in out.witnesses)

    check("{A} in X & {a} nin X", nested_member, True)
    check("a in X & X in Y & {a|X} nin Y", lambda: sat(S, P("a in X & X in Y & {a | X} nin Y", S)).sat, False)
    neq = P("{a | b} != {a | c}", S)
    check("kernel disequality, ground model", lambda: eval_ground(S, neq), True)
    check("kernel disequality, solver", lambda: sat(S, neq).sat, False)
    ok = not failures
    report(request, 1, ok, f"slowest {slowest:.3f}s" if ok else "; ".join(failures))
    assert ok, failures


# ---------------------------------------------------------------------------
# 2. member substitution and its closure


def _match_renaming(pattern: Term, term: Term, ren: dict[Var, Var]) -> bool:
    """Syntactic match where pattern variables rename injectively to term variables."""
    if isinstance(pattern, Var):
        if not isinstance(term, Var):
            return False
        if pattern in ren:
            return ren[pattern] == term
        if term in ren.values():
            return False
        ren[pattern] = term
        return True
    if not isinstance(term, App) or pattern.functor != term.functor or len(pattern.args) != len(term.args):
        return False
    return all(_match_renaming(p, t, ren) for p, t in zip(pattern.args, term.args))


def _same_up_to_renaming(expected: dict[str, str], got: Substitution, theory: Theory, ren) -> bool:
    if {v.name for v in got} != set(expected):
        return False
    for name, text in expected.items():
        x = Var(name)
        ren.setdefault(x, x)
        if not _match_renaming(parse_term(text, theory, allow_reserved=True), got[x], ren):
            return False
    return True


def test_criterion_2_member_substitution_example(request):
    S = Theory.SET
    c = P("a in Y & Y in X & X in Z & {{a | Y} | X} nin Z", S)
    sigma, star = member_closure(S, c)
    ren: dict[Var, Var] = {}
    sigma_ok = _same_up_to_renaming(
        {"Y": "{F_Y, a | M_Y}", "X": "{F_X, Y | M_X}", "Z": "{F_Z, X | M_Z}"}, sigma, S, ren
    )
    star_ok = _same_up_to_renaming(
        {
            "Y": "{F_Y, a | M_Y}",
            "X": "{F_X, {F_Y, a | M_Y} | M_X}",
            "Z": "{F_Z, {F_X, {F_Y, a | M_Y} | M_X} | M_Z}",
        },
        star, S, ren,
    )
    image_ok = _match_renaming(
        parse_term("{{a, F_Y, a | M_Y}, F_X, {F_Y, a | M_Y} | M_X}", S, allow_reserved=True),
        star.apply(parse_term("{{a | Y} | X}", S)),
        ren,
    )
    inconsistent = membership_consistent(S, c) is False
    ok = sigma_ok and star_ok and image_ok and inconsistent
    report(request, 2, ok, f"sigma {sigma_ok}, closure {star_ok}, image {image_ok}, inconsistent {inconsistent}")
    assert ok


# ---------------------------------------------------------------------------
# 3. satisfiability of a 3-SAT instance encoded with lists


def test_criterion_3_three_sat(request):
    L = Theory.LIST
    c = parse((DEMOS / "three_sat.txt").read_text(), L)
    out, dt = _timed(lambda: sat(L, c, SolverConfig(witness=True)))
    detail = f"{dt:.2f}s"
    ok = out.sat and dt < 10
    if out.sat:
        w = out.witnesses[0]
        zero, one = App("nil"), parse_term("[nil]", L)

        def bit(name):
            v = w[Var(name)]
            assert v in (zero, one), v
            return v == one

        x1, x2, x3 = bit("X1"), bit("X2"), bit("X3")
        complements = all(bit(f"Y{i}") != bit(f"X{i}") for i in (1, 2, 3))
        cnf = (x1 or x2 or not x3) and (not x1 or x2 or x3) and (x1 or not x2 or x3)
        ok = ok and eval_ground(L, c, w) and complements and cnf
        detail += f", X1={int(x1)} X2={int(x2)} X3={int(x3)}, cnf {cnf}"
    report(request, 3, ok, detail)
    assert ok


# ---------------------------------------------------------------------------
# 4. normal forms against the axiom closure


def test_criterion_4_normal_forms_match_closure(request):
    sig = Signature(("nil", "a", "b"), ())
    start = time.perf_counter()
    details = []
    ok = True
    for theory in Theory:
        terms = list(_all_terms(theory, sig, 3))
        labels = closure_partition(theory, terms)
        by_class: dict[int, set[Term]] = {}
        by_nf: dict[Term, set[int]] = {}
        for t in terms:
            n = normalize(theory, t)
            by_class.setdefault(labels[t], set()).add(n)
            by_nf.setdefault(n, set()).add(labels[t])
        split = sum(len(v) > 1 for v in by_class.values())
        merged = sum(len(v) > 1 for v in by_nf.values())
        ok = ok and split == 0 and merged == 0
        details.append(f"{theory.value}: {len(terms)} terms, {len(by_class)} classes")
    dt = time.perf_counter() - start
    ok = ok and dt < 60
    report(request, 4, ok, f"{'; '.join(details)}; {dt:.1f}s")
    assert ok


def _all_terms(theory: Theory, sig: Signature, max_depth: int):
    """Every raw term of depth at most ``max_depth`` (not reduced to normal forms)."""
    level = {App(c) for c in sig.constants}
    for _ in range(max_depth):
        prev = list(level)
        nxt = set(prev)
        for h in prev:
            for r in prev:
                nxt.add(App(theory.cons, (h, r)))
        level = nxt
    return sorted(level, key=repr)


# ---------------------------------------------------------------------------
# 5-6. unification corpus


@dataclass
class _UnifyRun:
    problems: int = 0
    unsound: list = field(default_factory=list)
    missed: list = field(default_factory=list)
    with_solution: int = 0
    shuffled_skipped: int = 0


_universes: dict[Theory, object] = {}


def _universe(theory):
    if theory not in _universes:
        _universes[theory] = enumerate_universe(theory, DEFAULT_SIGNATURE, 3)
    return _universes[theory]


@pytest.fixture(scope="module")
def unification_runs():
    runs = {}
    for theory in Theory:
        rng = random.Random(1234)
        run = _UnifyRun()
        for _ in range(CORPUS_SIZE):
            eqs = random_equations(rng, theory)
            keep = set().union(*(free_vars(l) | free_vars(r) for l, r in eqs))
            sols = unify_equations(theory, eqs, FreshSupply(), keep=keep)
            run.problems += 1
            for s in sols:
                if not all(e_equal(theory, s.apply(l), s.apply(r)) for l, r in eqs):
                    run.unsound.append((eqs, s))
            c = Constraint(tuple(Literal(Rel.EQ, True, l, r) for l, r in eqs))
            g = brute_sat(theory, c, _universe(theory))
            if g is None:
                continue
            run.with_solution += 1
            found = [g]
            try:
                # a second, usually different, solution from a shuffled value order
                found.append(brute_sat(theory, c, _universe(theory), seed=1, budget=SHUFFLED_BUDGET))
            except SearchBudgetExceeded:
                run.shuffled_skipped += 1
            for g in found:
                target = {x: g[x] for x in keep}
                if not any(is_instance(theory, s, target) for s in sols):
                    run.missed.append((eqs, target))
        runs[theory] = run
    return runs


def test_criterion_5_unifier_soundness(request, unification_runs):
    bad = {t.value: len(r.unsound) for t, r in unification_runs.items()}
    ok = not any(bad.values())
    report(request, 5, ok, f"{CORPUS_SIZE} problems per theory, violations {bad}")
    assert ok, {t: r.unsound[:3] for t, r in unification_runs.items() if r.unsound}


def test_criterion_6_bounded_completeness(request, unification_runs):
    bad = {t.value: len(r.missed) for t, r in unification_runs.items()}
    solved = {t.value: r.with_solution for t, r in unification_runs.items()}
    ok = not any(bad.values())
    skipped = {t.value: r.shuffled_skipped for t, r in unification_runs.items()}
    report(request, 6, ok, f"problems with a depth-3 solution {solved}, violations {bad}, "
                           f"shuffled re-checks over budget {skipped}")
    assert ok, {t: r.missed[:3] for t, r in unification_runs.items() if r.missed}


# ---------------------------------------------------------------------------
# 7-9. constraint corpus


@dataclass
class _SolveRun:
    sat: int = 0
    unsat: int = 0
    forms: int = 0
    witness_failures: list = field(default_factory=list)
    oracle_disagreements: list = field(default_factory=list)
    cap_errors: list = field(default_factory=list)
    max_rules: int = 0
    max_branches: int = 0


@pytest.fixture(scope="module")
def solver_runs():
    runs = {}
    for theory in Theory:
        rng = random.Random(4321)
        run = _SolveRun()
        for _ in range(CORPUS_SIZE):
            c = random_constraint(rng, theory)
            try:
                out = sat(theory, c, SolverConfig(all_solutions=True, witness=True))
            except ResourceLimit as exc:
                run.cap_errors.append((c, str(exc)))
                continue
            except VerificationFailed as exc:
                run.witness_failures.append((c, str(exc)))
                continue
            run.max_rules = max(run.max_rules, out.stats.rule_applications)
            run.max_branches = max(run.max_branches, out.stats.branches)
            run.forms += len(out.solved_forms)
            for form in out.solved_forms:
                if not (eval_ground(theory, form.constraint, form.witness) and eval_ground(theory, c, form.witness)):
                    run.witness_failures.append((c, form.constraint))
            if out.sat:
                run.sat += 1
            else:
                run.unsat += 1
                if brute_sat(theory, c, _universe(theory)) is not None:
                    run.oracle_disagreements.append(c)
        runs[theory] = run
    return runs


def test_criterion_7_witnesses_verify(request, solver_runs):
    bad = {t.value: len(r.witness_failures) for t, r in solver_runs.items()}
    forms = {t.value: r.forms for t, r in solver_runs.items()}
    ok = not any(bad.values())
    report(request, 7, ok, f"solved forms {forms}, failures {bad}")
    assert ok, {t: r.witness_failures[:3] for t, r in solver_runs.items() if r.witness_failures}


def test_criterion_8_solver_agrees_with_oracle(request, solver_runs):
    bad = {t.value: len(r.oracle_disagreements) + len(r.witness_failures) for t, r in solver_runs.items()}
    verdicts = {t.value: f"{r.sat} sat/{r.unsat} unsat" for t, r in solver_runs.items()}
    ok = not any(bad.values())
    shown = [
        f"{t.value}: {format_constraint(t, c)}" for t, r in solver_runs.items() for c in r.oracle_disagreements[:5]
    ]
    detail = f"{verdicts}, violations {bad}"
    if shown:
        detail += "; unsat but solvable: " + " ; ".join(shown)
    report(request, 8, ok, detail)
    assert ok, shown


def test_criterion_9_within_limits(request, solver_runs):
    bad = {t.value: len(r.cap_errors) for t, r in solver_runs.items()}
    peaks = {t.value: (r.max_branches, r.max_rules) for t, r in solver_runs.items()}
    ok = not any(bad.values())
    report(request, 9, ok, f"cap errors {bad}, peak (branches, rule applications) {peaks}")
    assert ok, {t: r.cap_errors[:3] for t, r in solver_runs.items() if r.cap_errors}
