"""Satisfiability: rewrite to a fixpoint, then certify solved forms.

A constraint is rewritten by the membership, non-membership, disequality and
unification phases in turn, repeatedly, until a round leaves it unchanged.
Each fixpoint is pre-solved; it is kept only if its membership graph is
acyclic and its memberships are consistent, in which case it is satisfiable
and a ground witness can be built for it.
"""

from __future__ import annotations

import enum
import graphlib
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .constraints import Constraint, Literal
from .equational import e_equal, eval_ground, term_key
from .limits import Limits, Stats
from .rewrite import Options, run_main_loop, unify_phase
from .terms import NIL, FreshSupply, Substitution, Term, Theory, Var, aggregate, free_vars, occurs

__all__ = [
    "MembershipGraph", "Verdict", "SolvedForm", "SolveOutcome", "SolverConfig",
    "is_presolved", "build_graph", "is_acyclic", "member_subst", "member_closure",
    "membership_consistent", "is_solved", "sat", "canonical_key", "supply_after",
    "UnexpectedFixpoint",
]


def is_presolved(c: Constraint) -> bool:
    """Every literal is ``X = t`` (X nowhere else), ``t in X``, ``X != t`` or ``t nin X``, X not in t."""
    if c.is_false:
        return False
    lits = c.literals
    for i, lit in enumerate(lits):
        s, t = lit.lhs, lit.rhs
        kind = lit.kind
        if kind in ("eq", "neq"):
            if not isinstance(s, Var) or occurs(s, t):
                return False
            if kind == "eq":
                for j, other in enumerate(lits):
                    if j != i and s in other.vars():
                        return False
        else:
            if not isinstance(t, Var) or occurs(t, s):
                return False
    return True


@dataclass(frozen=True)
class MembershipGraph:
    nodes: frozenset[Var]
    edges: frozenset[tuple[Var, Var]]


def build_graph(c: Constraint) -> MembershipGraph:
    """Edge ``v -> X`` for each ``t in X`` and each variable ``v`` of ``t``."""
    nodes: set[Var] = set()
    edges: set[tuple[Var, Var]] = set()
    for lit in c.literals:
        if lit.kind != "in" or not isinstance(lit.rhs, Var):
            continue
        x = lit.rhs
        nodes.add(x)
        for v in free_vars(lit.lhs):
            nodes.add(v)
            edges.add((v, x))
    return MembershipGraph(frozenset(nodes), frozenset(edges))


def is_acyclic(g: MembershipGraph) -> bool:
    sorter = graphlib.TopologicalSorter({n: set() for n in g.nodes})
    for a, b in g.edges:
        sorter.add(b, a)
    try:
        sorter.prepare()
    except graphlib.CycleError:
        return False
    return True


_RESERVED_NUM = re.compile(r"^[FMNZ]_(\d+)$")


def supply_after(*terms_or_constraints) -> FreshSupply:
    """A supply whose names cannot clash with reserved names already present."""
    top = -1
    for item in terms_or_constraints:
        vs = item.vars() if isinstance(item, Constraint) else free_vars(item)
        for v in vs:
            m = _RESERVED_NUM.match(v.name)
            if m:
                top = max(top, int(m.group(1)))
    return FreshSupply(top + 1)


def _membership_targets(c: Constraint) -> dict[Var, list[Term]]:
    targets: dict[Var, list[Term]] = {}
    for lit in c.literals:
        if lit.kind == "in" and isinstance(lit.rhs, Var):
            targets.setdefault(lit.rhs, []).append(lit.lhs)
    return targets


def member_subst(theory: Theory, c: Constraint, supply: FreshSupply | None = None) -> Substitution:
    """``X -> {F, t1, ..., tk | M}`` for every X with members t1..tk; F and M fresh."""
    supply = supply or supply_after(c)
    bindings = {}
    for x, members in _membership_targets(c).items():
        f = supply.fresh("F")
        m = supply.fresh("M")
        bindings[x] = aggregate(theory, [f, *members], m)
    return Substitution(bindings)


def member_closure(theory: Theory, c: Constraint, supply: FreshSupply | None = None) -> tuple[Substitution, Substitution]:
    """The member substitution and its closure.

    On an acyclic constraint with ``q`` membership targets the closure is
    reached after at most ``q - 1`` iterations.
    """
    sigma = member_subst(theory, c, supply)
    q = len(sigma)
    return sigma, sigma.closure(cap=max(q - 1, 0))


def membership_consistent(theory: Theory, c: Constraint, supply: FreshSupply | None = None) -> bool:
    """False iff some ``t nin X`` and ``t' in X`` become equal under the closed member substitution."""
    _, star = member_closure(theory, c, supply)
    members = _membership_targets(c)
    for lit in c.literals:
        if lit.kind != "nin" or not isinstance(lit.rhs, Var):
            continue
        for other in members.get(lit.rhs, ()):
            if e_equal(theory, star.apply(lit.lhs), star.apply(other)):
                return False
    return True


def is_solved(theory: Theory, c: Constraint) -> Constraint | bool:
    """``c`` itself when it is a solved form, otherwise ``False``."""
    if c.is_false:
        return False
    if not is_acyclic(build_graph(c)):
        return False
    if not membership_consistent(theory, c):
        return False
    return c


class Verdict(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"


@dataclass
class SolvedForm:
    constraint: Constraint
    fresh_vars: frozenset[Var]
    witness: Substitution | None = None


@dataclass
class SolveOutcome:
    verdict: Verdict
    solved_forms: list[SolvedForm]
    stats: Stats = field(default_factory=Stats)

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT

    @property
    def witnesses(self) -> list[Substitution | None]:
        return [f.witness for f in self.solved_forms]


@dataclass(frozen=True)
class SolverConfig:
    all_solutions: bool = False
    witness: bool = False
    member_elim: bool = True
    limits: Limits = Limits()
    seed: int = 0

    def options(self) -> Options:
        return Options(member_elim=self.member_elim, limits=self.limits)


def _lit_key(lit: Literal) -> tuple:
    return (lit.kind, term_key(lit.lhs), term_key(lit.rhs))


def canonical_key(c: Constraint) -> tuple:
    if c.is_false:
        return ("false",)
    return tuple(sorted(set(_lit_key(l) for l in c.literals)))


def _dedupe(c: Constraint) -> Constraint:
    seen = set()
    out = []
    for lit in c.literals:
        k = _lit_key(lit)
        if k not in seen:
            seen.add(k)
            out.append(lit)
    return Constraint(tuple(out))


def _round(theory: Theory, c: Constraint, supply: FreshSupply, options: Options, stats: Stats) -> Iterator[Constraint]:
    """One pass of the membership, non-membership and disequality phases.

    Equations produced by a phase are solved and propagated before the next
    phase runs, so later phases see the bindings.
    """

    def phase(states: Iterable[Constraint], kinds: tuple[str, ...]) -> Iterator[Constraint]:
        for s in states:
            for r in run_main_loop(theory, s, supply, kinds, options, stats):
                yield from unify_phase(theory, r, supply, options, stats)

    states: Iterable[Constraint] = unify_phase(theory, c, supply, options, stats)
    for kinds in (("in",), ("nin",), ("neq",)):
        states = phase(states, kinds)
    for s in states:
        yield _dedupe(s)


class UnexpectedFixpoint(RuntimeError):
    """The rules stopped on a constraint that is not pre-solved."""


def sat(
    theory: Theory,
    c: Constraint,
    config: SolverConfig = SolverConfig(),
    supply: FreshSupply | None = None,
) -> SolveOutcome:
    """Decide ``c``; returns the solved forms found (all of them in all-solutions mode)."""
    from .witness import VerificationFailed, build_witness

    stats = Stats()
    options = config.options()
    if supply is None:
        supply = supply_after(c)
        supply.counter = max(supply.counter, config.seed)
    original = c.vars()
    forms: list[SolvedForm] = []
    seen_forms: set[tuple] = set()
    if c.is_false:
        return SolveOutcome(Verdict.UNSAT, forms, stats)
    start = _dedupe(c)
    # each frame: key of a state, lazy stream of its successors, successors taken so far
    stack = [[canonical_key(start), _round(theory, start, supply, options, stats), 0]]
    while stack:
        frame = stack[-1]
        key, successors, taken = frame
        s = next(successors, None)
        if s is None:
            stack.pop()
            continue
        frame[2] = taken + 1
        if taken:
            stats.branch(options.limits)
        k = canonical_key(s)
        if k != key:
            stack.append([k, _round(theory, s, supply, options, stats), 0])
            continue
        if not is_presolved(s):
            raise UnexpectedFixpoint(repr(s))
        if k in seen_forms or is_solved(theory, s) is False:
            continue
        seen_forms.add(k)
        forms.append(SolvedForm(s, s.vars() - original))
        if not config.all_solutions:
            break
    if config.witness:
        for form in forms:
            w = dict(build_witness(theory, form.constraint, supply_after(form.constraint)))
            # input variables the rewriting dropped are unconstrained
            for x in original - w.keys():
                w[x] = NIL
            form.witness = Substitution(w)
            if not eval_ground(theory, c, form.witness):
                raise VerificationFailed(f"witness does not satisfy the input {c!r}")
    verdict = Verdict.SAT if forms else Verdict.UNSAT
    return SolveOutcome(verdict, forms, stats)
