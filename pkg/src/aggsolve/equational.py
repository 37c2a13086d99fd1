"""Equality modulo the aggregate axioms, by canonical normal forms.

Variables are read as free constants, so ``e_equal`` decides whether an
equation holds for every instantiation.  Normal forms:

* list: unchanged
* mset: elements of every spine sorted, duplicates kept
* clist: adjacent equal elements of every spine collapsed
* set: elements of every spine sorted and de-duplicated
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

from .constraints import Constraint, Literal, Rel
from .terms import App, Term, Theory, Var, aggregate, free_vars, split_aggregate

__all__ = ["term_key", "normalize", "e_equal", "ground_member", "eval_ground", "eval_literal", "NotGround"]


class NotGround(ValueError):
    """A ground term was required but a variable was found."""


@lru_cache(maxsize=1 << 18)
def term_key(t: Term) -> tuple:
    """Total order: nil < constants < variables < compounds."""
    if isinstance(t, Var):
        return (2, t.name)
    if not t.args:
        if t.functor == "nil":
            return (0,)
        return (1, t.functor)
    return (3, t.functor, len(t.args), tuple(term_key(a) for a in t.args))


@lru_cache(maxsize=1 << 18)
def normalize(theory: Theory, t: Term) -> Term:
    if isinstance(t, Var) or not t.args:
        return t
    if t.functor != theory.cons or len(t.args) != 2:
        return App(t.functor, tuple(normalize(theory, a) for a in t.args))
    elements, rest = split_aggregate(theory, t)
    elements = [normalize(theory, e) for e in elements]
    rest = normalize(theory, rest)
    if theory is Theory.MSET:
        elements.sort(key=term_key)
    elif theory is Theory.SET:
        elements = sorted(set(elements), key=term_key)
    elif theory is Theory.CLIST:
        collapsed = []
        for e in elements:
            if not collapsed or collapsed[-1] != e:
                collapsed.append(e)
        elements = collapsed
    return aggregate(theory, elements, rest)


def e_equal(theory: Theory, s: Term, t: Term) -> bool:
    if s == t:
        return True
    return normalize(theory, s) == normalize(theory, t)


def _require_ground(*terms: Term) -> None:
    for t in terms:
        if free_vars(t):
            raise NotGround(f"term is not ground: {t!r}")


def ground_member(theory: Theory, t: Term, s: Term) -> bool:
    """Whether ``t`` is an element on the spine of ``s``; kernels hold no members."""
    _require_ground(t, s)
    nt = normalize(theory, t)
    elements, _ = split_aggregate(theory, normalize(theory, s))
    return nt in elements


def eval_literal(theory: Theory, lit: Literal) -> bool:
    if lit.rel is Rel.EQ:
        _require_ground(lit.lhs, lit.rhs)
        holds = e_equal(theory, lit.lhs, lit.rhs)
    else:
        holds = ground_member(theory, lit.lhs, lit.rhs)
    return holds if lit.positive else not holds


def eval_ground(theory: Theory, c: Constraint, valuation: Mapping[Var, Term] | None = None) -> bool:
    """Truth of a conjunction after applying ``valuation``."""
    from .terms import Substitution

    if c.is_false:
        return False
    sigma = valuation if isinstance(valuation, Substitution) else Substitution(dict(valuation or {}))
    for lit in c.literals:
        if not eval_literal(theory, lit.substitute(sigma)):
            return False
    return True
