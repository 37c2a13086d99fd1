"""Rewriting of membership, non-membership and disequality literals.

Each ``step_*`` function rewrites one literal and returns the alternatives
(a disjunction).  ``run_main_loop`` drives one kind of literal to pre-solved
form in every branch, always rewriting the leftmost literal that still has a
rule to apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .constraints import Constraint, Literal, eq, mem, neq, nmem
from .limits import Limits, Stats
from .terms import (
    App, NIL, FreshSupply, Term, Theory, Var, is_aggregate, occurs,
    split_aggregate, untail,
)
from .unify import unify_equations

__all__ = [
    "Options", "step_in", "step_nin", "step_neq", "run_main_loop",
    "unify_phase", "literal_presolved", "rewrite_literal",
]

# An alternative is a tuple of literals replacing the rewritten one; an empty
# tuple means the literal became true.  ``None`` marks a false alternative.
Alternative = tuple[Literal, ...] | None


@dataclass(frozen=True)
class Options:
    member_elim: bool = True
    limits: Limits = Limits()

    def eliminates_members(self, theory: Theory) -> bool:
        return self.member_elim and theory in (Theory.MSET, Theory.SET)


DEFAULT_OPTIONS = Options()


def literal_presolved(theory: Theory, lit: Literal, options: Options = DEFAULT_OPTIONS) -> bool:
    """Whether no rule of the literal's own kind applies to ``lit``."""
    s, t = lit.lhs, lit.rhs
    kind = lit.kind
    if kind == "eq":
        return isinstance(s, Var) and not occurs(s, t)
    if kind in ("in", "nin"):
        if not isinstance(t, Var) or occurs(t, s):
            return False
        return not (kind == "in" and options.eliminates_members(theory))
    return isinstance(s, Var) and not occurs(s, t)


def rewrite_literal(
    theory: Theory, lit: Literal, supply: FreshSupply, options: Options = DEFAULT_OPTIONS
) -> list[Alternative]:
    kind = lit.kind
    if kind == "in":
        return _rewrite_in(theory, lit.lhs, lit.rhs, supply, options)
    if kind == "nin":
        return _rewrite_nin(theory, lit.lhs, lit.rhs)
    if kind == "neq":
        return _rewrite_neq(theory, lit.lhs, lit.rhs, supply)
    raise ValueError("equations are handled by unification")


def _rewrite_in(theory, r: Term, t: Term, supply: FreshSupply, options: Options) -> list[Alternative]:
    if isinstance(t, Var):
        if occurs(t, r):
            return [None]
        if options.eliminates_members(theory):
            n = supply.fresh("N")
            return [(eq(t, App(theory.cons, (r, n))),)]
        return [(mem(r, t),)]
    if is_aggregate(theory, t):
        head, rest = t.args
        return [(eq(r, head),), (mem(r, rest),)]
    return [None]


def _rewrite_nin(theory, r: Term, t: Term) -> list[Alternative]:
    if isinstance(t, Var):
        if occurs(t, r):
            return [()]
        return [(nmem(r, t),)]
    if is_aggregate(theory, t):
        head, rest = t.args
        return [(neq(r, head), nmem(r, rest))]
    return [()]


def _rewrite_neq(theory: Theory, s: Term, t: Term, supply: FreshSupply) -> list[Alternative]:
    if isinstance(s, Var):
        if s == t:
            return [None]
        if not occurs(s, t):
            return [(neq(s, t),)]
        return _neq_cyclic(theory, s, t, supply)
    if isinstance(t, Var):
        return [(neq(t, s),)]
    if s.functor != t.functor or len(s.args) != len(t.args):
        return [()]
    if not s.args:
        return [None]
    if theory is Theory.LIST or not is_aggregate(theory, s):
        return [(neq(a, b),) for a, b in zip(s.args, t.args)]
    (t1, s1), (t2, s2) = s.args, t.args
    c = theory.cons
    if theory is Theory.MSET:
        _, k1 = split_aggregate(theory, s)
        _, k2 = split_aggregate(theory, t)
        if isinstance(k1, Var) and k1 == k2:
            return [(neq(untail(theory, s), untail(theory, t)),)]
        n = supply.fresh("N")
        return [
            (neq(t1, t2), nmem(t1, s2)),
            (eq(t, App(c, (t1, n))), neq(s1, n)),
        ]
    if theory is Theory.CLIST:
        return [
            (neq(t1, t2),),
            (neq(s1, s2), neq(s, s2), neq(s1, t)),
        ]
    z = supply.fresh("Z")
    return [
        (mem(z, s), nmem(z, t)),
        (mem(z, t), nmem(z, s)),
    ]


def _neq_cyclic(theory: Theory, x: Var, t: Term, supply: FreshSupply) -> list[Alternative]:
    """``X != t`` where ``X`` occurs in ``t``."""
    if theory in (Theory.LIST, Theory.MSET):
        return [()]
    elements, rest = split_aggregate(theory, t)
    if not elements or rest != x or any(occurs(x, e) for e in elements):
        return [()]
    if theory is Theory.SET:
        return [(nmem(e, x),) for e in elements]
    first = elements[0]
    out: list[Alternative] = [(neq(first, e),) for e in elements[1:]]
    out.append((eq(x, NIL),))
    n1, n2 = supply.fresh("N"), supply.fresh("N")
    out.append((eq(x, App(theory.cons, (n1, n2))), neq(n1, first)))
    return out


def _replace(c: Constraint, i: int, alt: Alternative) -> Constraint:
    if alt is None:
        return Constraint.false()
    lits = c.literals
    return Constraint(lits[:i] + alt + lits[i + 1:])


def _step(kind: str, theory: Theory, lit: Literal, c: Constraint, supply: FreshSupply, options: Options) -> list[Constraint]:
    if lit.kind != kind:
        raise ValueError(f"expected a {kind} literal, got {lit.symbol}")
    i = c.literals.index(lit)
    alts = rewrite_literal(theory, lit, supply, options)
    out = [_replace(c, i, a) for a in alts if a is not None]
    return out or [Constraint.false()]


def step_in(theory: Theory, lit: Literal, c: Constraint, supply: FreshSupply | None = None,
            options: Options = DEFAULT_OPTIONS) -> list[Constraint]:
    return _step("in", theory, lit, c, supply or FreshSupply(), options)


def step_nin(theory: Theory, lit: Literal, c: Constraint, supply: FreshSupply | None = None,
             options: Options = DEFAULT_OPTIONS) -> list[Constraint]:
    return _step("nin", theory, lit, c, supply or FreshSupply(), options)


def step_neq(theory: Theory, lit: Literal, c: Constraint, supply: FreshSupply | None = None,
             options: Options = DEFAULT_OPTIONS) -> list[Constraint]:
    return _step("neq", theory, lit, c, supply or FreshSupply(), options)


def run_main_loop(
    theory: Theory,
    c: Constraint,
    supply: FreshSupply,
    kinds: Sequence[str] = ("in", "nin", "neq"),
    options: Options = DEFAULT_OPTIONS,
    stats: Stats | None = None,
) -> Iterator[Constraint]:
    """Rewrite literals of the given kinds until each branch is pre-solved for them.

    Branches are produced lazily, depth first, leftmost alternative first.
    Nothing is produced when every branch fails.
    """
    stats = stats if stats is not None else Stats()
    limits = options.limits
    stack = [c]
    while stack:
        cur = stack.pop()
        if cur.is_false:
            continue
        pick = None
        for i, lit in enumerate(cur.literals):
            if lit.kind in kinds and not literal_presolved(theory, lit, options):
                pick = i
                break
        if pick is None:
            yield cur
            continue
        stats.rule(limits)
        alts = rewrite_literal(theory, cur.literals[pick], supply, options)
        live = [a for a in alts if a is not None]
        if len(live) > 1:
            stats.branch(limits, len(live) - 1)
        for alt in reversed(live):
            stack.append(_replace(cur, pick, alt))


def unify_phase(
    theory: Theory,
    c: Constraint,
    supply: FreshSupply,
    options: Options = DEFAULT_OPTIONS,
    stats: Stats | None = None,
) -> Iterator[Constraint]:
    """Solve the equations of ``c`` and propagate each solution to the other literals."""
    if c.is_false:
        return
    eqs = [(l.lhs, l.rhs) for l in c.literals if l.kind == "eq"]
    others = [l for l in c.literals if l.kind != "eq"]
    if not eqs:
        yield c
        return
    stats = stats if stats is not None else Stats()
    sols = unify_equations(theory, eqs, supply, stats, options.limits, keep=c.vars())
    for sigma in sols:
        bound = [eq(x, sigma[x]) for x in sorted(sigma, key=lambda v: v.name)]
        yield Constraint(tuple(bound) + tuple(l.substitute(sigma) for l in others))
