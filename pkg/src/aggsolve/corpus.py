"""Seeded random problems for testing against the exhaustive oracle.

Terms are drawn over ``nil``, ``a``, ``b``, ``f/1`` and the theory's
constructor, with variables ``X``, ``Y``, ``Z``.
"""

from __future__ import annotations

import random

from .constraints import Constraint, Literal, Rel
from .terms import NIL, App, Term, Theory, Var

__all__ = ["VARIABLES", "random_term", "random_equations", "random_constraint"]

VARIABLES = (Var("X"), Var("Y"), Var("Z"))
_LEAVES = (NIL, App("a"), App("b"))


def random_term(rng: random.Random, theory: Theory, max_depth: int = 2, variables=VARIABLES) -> Term:
    if max_depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.45:
            return rng.choice(variables)
        return rng.choice(_LEAVES)
    if rng.random() < 0.15:
        return App("f", (random_term(rng, theory, max_depth - 1, variables),))
    head = random_term(rng, theory, max_depth - 1, variables)
    rest = random_term(rng, theory, max_depth - 1, variables)
    return App(theory.cons, (head, rest))


def random_equations(rng: random.Random, theory: Theory, max_equations: int = 2, max_depth: int = 2) -> list[tuple[Term, Term]]:
    n = rng.randint(1, max_equations)
    return [(random_term(rng, theory, max_depth), random_term(rng, theory, max_depth)) for _ in range(n)]


def random_constraint(rng: random.Random, theory: Theory, max_literals: int = 4, max_depth: int = 2) -> Constraint:
    lits = []
    for _ in range(rng.randint(1, max_literals)):
        rel = rng.choice((Rel.EQ, Rel.IN))
        positive = rng.random() < 0.5
        lhs = random_term(rng, theory, max_depth)
        rhs = random_term(rng, theory, max_depth)
        lits.append(Literal(rel, positive, lhs, rhs))
    return Constraint(tuple(lits))
