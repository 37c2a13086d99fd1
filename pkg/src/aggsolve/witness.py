"""Ground witnesses for solved forms.

The valuation is assembled in three layers.  Equations are read as
bindings.  Membership targets are expanded by the closed member substitution
into aggregates ``{F, t1, ..., tk | M}``.  Every variable left over receives a
tower ``cons(cons(... cons(nil, nil) ...), nil)`` of some height ``n``.  The
heights are chosen above a floor and away from a finite set of forbidden
offsets, so that the rank of each side of every disequality and
non-membership differs where it has to.

The result is always checked with the ground evaluator before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .constraints import Constraint, Literal
from .equational import eval_ground
from .solver import is_presolved, is_solved, member_closure, supply_after
from .terms import (
    NIL, App, FreshSupply, Substitution, Term, Theory, Var, find, free_vars,
    is_aggregate, rank, split_aggregate, subterms,
)
from .unify import unify_equations

__all__ = [
    "DisequationSystem", "UnsafeDisequation", "VerificationFailed", "NotSolvedForm",
    "solve_disequations", "build_witness", "tower", "neq_store",
]


class UnsafeDisequation(ValueError):
    """A disequation of the form ``u != u`` was generated."""


class VerificationFailed(AssertionError):
    """The constructed valuation does not satisfy the constraint."""


class NotSolvedForm(ValueError):
    pass


@dataclass
class DisequationSystem:
    """Unknowns ``n_i > floor``, pairwise distinct, with ``n_a != n_b + c`` side conditions."""

    unknowns: list[str]
    floor: int = 0
    diseqs: list[tuple[str, str, int]] = field(default_factory=list)

    def add(self, a: str, b: str, c: int) -> None:
        self.diseqs.append((a, b, c))


def solve_disequations(system: DisequationSystem) -> dict[str, int]:
    """Smallest strictly increasing assignment above the floor meeting every disequation."""
    for a, b, c in system.diseqs:
        if a == b and c == 0:
            raise UnsafeDisequation(f"{a} != {a} + 0")
    forbidden: dict[str, list[tuple[str, int]]] = {u: [] for u in system.unknowns}
    for a, b, c in system.diseqs:
        if a == b:
            continue
        # n_a != n_b + c, seen from both ends
        forbidden.setdefault(a, []).append((b, c))
        forbidden.setdefault(b, []).append((a, -c))
    values: dict[str, int] = {}
    low = system.floor + 1
    for u in system.unknowns:
        v = low
        while True:
            ok = all(values.get(other) is None or v != values[other] + c for other, c in forbidden[u])
            if ok and v not in values.values():
                break
            v += 1
        values[u] = v
        low = v + 1
    return values


def tower(theory: Theory, n: int) -> Term:
    """``n`` nested singletons around ``nil``; its rank is ``n``."""
    t: Term = NIL
    for _ in range(n):
        t = App(theory.cons, (t, NIL))
    return t


def _split(c: Constraint):
    parts: dict[str, list[Literal]] = {"eq": [], "in": [], "nin": [], "neq": []}
    for lit in c.literals:
        parts[lit.kind].append(lit)
    return parts


def _choose_atom(theory: Theory, d: Substitution) -> tuple[Var, Term] | None:
    """Pick the blocking atom of one unifier: an aggregate binding first, then a variable one."""
    items = sorted(d.items(), key=lambda kv: kv[0].name)
    for a, t in items:
        if is_aggregate(theory, t):
            return a, t
    for a, t in items:
        if isinstance(t, Var):
            return a, t
    return None


def neq_store(theory: Theory, star: Substitution, c: Constraint, supply: FreshSupply) -> dict[tuple[int, int], list[tuple[Var, Term]]]:
    """For each pair ``p in V``, ``r nin V``, the atoms chosen to keep them apart."""
    store: dict[tuple[int, int], list[tuple[Var, Term]]] = {}
    lits = c.literals
    for i, pin in enumerate(lits):
        if pin.kind != "in":
            continue
        for j, rout in enumerate(lits):
            if rout.kind != "nin" or rout.rhs != pin.rhs:
                continue
            p, r = star.apply(pin.lhs), star.apply(rout.lhs)
            keep = free_vars(p) | free_vars(r)
            sols = unify_equations(theory, [(p, r)], supply, keep=keep)
            atoms = []
            for d in sols:
                if not d:
                    raise NotSolvedForm("a member and a non-member coincide")
                atom = _choose_atom(theory, d)
                if atom is not None:
                    atoms.append(atom)
            store[(i, j)] = atoms
    return store


def _offsets(theory: Theory, target: Var, unknowns: Iterable[Var], t: Term, shift: int, out: DisequationSystem):
    for other in unknowns:
        if other == target:
            continue
        for c in find(theory, other, t):
            out.add(target.name, other.name, c + shift)


def _build_system(
    theory: Theory,
    c: Constraint,
    theta1: Substitution,
    star: Substitution,
    sigma: Substitution,
    store,
    strengthen: bool,
    extra_floor: int,
) -> tuple[DisequationSystem, list[Var]]:
    parts = _split(c)
    image = [l.substitute(theta1).substitute(star) for l in c.literals]
    unknown_set: set[Var] = set()
    for lit in image:
        unknown_set |= lit.vars()
    unknowns = sorted(unknown_set, key=lambda v: v.name)

    categorized: set[Var] = set(theta1) | set(sigma)
    for lit in parts["nin"]:
        categorized.add(lit.rhs)
    for lit in parts["neq"]:
        categorized.add(lit.lhs)
    others = c.vars() - categorized
    h = len(others)
    top = 0
    for lit in image:
        for side in (lit.lhs, lit.rhs):
            for u in subterms(side):
                top = max(top, rank(theory, u))
    floor = top + 1 + h + extra_floor
    system = DisequationSystem([v.name for v in unknowns], floor)

    def head_and_rest(x: Var) -> tuple[Var, Var]:
        elements, rest = split_aggregate(theory, sigma[x])
        return elements[0], rest

    for lit in parts["neq"]:
        z, t = lit.lhs, star.apply(lit.rhs)
        if z in sigma:
            f, _ = head_and_rest(z)
            _offsets(theory, f, unknowns, t, -1, system)          # point 3
        else:
            _offsets(theory, z, unknowns, t, 0, system)           # point 2
    for j, lit in enumerate(c.literals):
        if lit.kind != "nin":
            continue
        y, t = lit.rhs, star.apply(lit.lhs)
        if y not in sigma:
            _offsets(theory, y, unknowns, t, 1, system)           # point 4
            continue
        f, m = head_and_rest(y)
        _offsets(theory, f, unknowns, t, 0, system)               # point 7
        _offsets(theory, m, unknowns, t, 1, system)               # point 8
        for (pi, pj), atoms in store.items():
            if pj != j:
                continue
            for a, bound in atoms:
                if isinstance(bound, Var):
                    if a != bound:
                        system.add(a.name, bound.name, 0)         # point 6
                    continue
                elements, rest = split_aggregate(theory, bound)
                chosen = elements if strengthen else elements[:1]
                for e in chosen:
                    _offsets(theory, a, unknowns, e, 1, system)   # point 5
                if strengthen:
                    _offsets(theory, a, unknowns, rest, 0, system)
    return system, unknowns


def _valuation(theory: Theory, c: Constraint, theta1: Substitution, star: Substitution,
               heights: Mapping[str, int], unknowns: list[Var]) -> Substitution:
    theta2 = Substitution({v: tower(theory, heights[v.name]) for v in unknowns})
    gamma = {}
    for x in sorted(c.vars(), key=lambda v: v.name):
        gamma[x] = theta2.apply(star.apply(theta1.apply(x)))
    return Substitution(gamma)


def build_witness(theory: Theory, c: Constraint, supply: FreshSupply | None = None) -> Substitution:
    """A ground valuation satisfying the solved form ``c``, verified before returning."""
    if c.is_false:
        raise NotSolvedForm("false has no witness")
    if not c.literals:
        return Substitution({})
    if not is_presolved(c) or is_solved(theory, c) is False:
        raise NotSolvedForm("constraint is not in solved form")
    supply = supply or supply_after(c)
    parts = _split(c)
    theta1 = Substitution({l.lhs: l.rhs for l in parts["eq"]})
    sigma, star = member_closure(theory, c, supply)
    store = neq_store(theory, star, c, supply)
    attempts = [(False, 0), (True, 0), (True, 2), (True, 7)]
    for strengthen, extra in attempts:
        system, unknowns = _build_system(theory, c, theta1, star, sigma, store, strengthen, extra)
        heights = solve_disequations(system)
        gamma = _valuation(theory, c, theta1, star, heights, unknowns)
        if eval_ground(theory, c, gamma):
            return gamma
    raise VerificationFailed(f"no verified witness for {c!r}")
