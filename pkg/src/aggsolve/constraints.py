"""Literals and conjunctions of literals."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .terms import Substitution, Term, Var, free_vars

__all__ = ["Rel", "Literal", "Status", "Constraint", "eq", "neq", "mem", "nmem"]


class Rel(enum.Enum):
    EQ = "="
    IN = "in"


@dataclass(frozen=True)
class Literal:
    rel: Rel
    positive: bool
    lhs: Term
    rhs: Term

    @property
    def symbol(self) -> str:
        if self.rel is Rel.EQ:
            return "=" if self.positive else "!="
        return "in" if self.positive else "nin"

    @property
    def kind(self) -> str:
        """One of ``eq``, ``neq``, ``in``, ``nin``."""
        return {"=": "eq", "!=": "neq", "in": "in", "nin": "nin"}[self.symbol]

    def vars(self) -> frozenset[Var]:
        return free_vars(self.lhs) | free_vars(self.rhs)

    def substitute(self, sigma: Substitution) -> "Literal":
        return Literal(self.rel, self.positive, sigma.apply(self.lhs), sigma.apply(self.rhs))

    def __repr__(self):
        return f"Literal({self.lhs!r} {self.symbol} {self.rhs!r})"


def eq(s: Term, t: Term) -> Literal:
    return Literal(Rel.EQ, True, s, t)


def neq(s: Term, t: Term) -> Literal:
    return Literal(Rel.EQ, False, s, t)


def mem(s: Term, t: Term) -> Literal:
    return Literal(Rel.IN, True, s, t)


def nmem(s: Term, t: Term) -> Literal:
    return Literal(Rel.IN, False, s, t)


class Status(enum.Enum):
    OPEN = "open"
    TRUE = "true"
    FALSE = "false"


@dataclass(frozen=True)
class Constraint:
    """A conjunction.  ``FALSE`` absorbs everything; an empty ``OPEN`` is true."""

    literals: tuple[Literal, ...] = ()
    status: Status = Status.OPEN

    @classmethod
    def of(cls, literals: Iterable[Literal]) -> "Constraint":
        return cls(tuple(literals))

    @classmethod
    def false(cls) -> "Constraint":
        return cls((), Status.FALSE)

    @property
    def is_false(self) -> bool:
        return self.status is Status.FALSE

    def vars(self) -> frozenset[Var]:
        out: frozenset[Var] = frozenset()
        for lit in self.literals:
            out |= lit.vars()
        return out

    def substitute(self, sigma: Substitution) -> "Constraint":
        if self.is_false:
            return self
        return Constraint(tuple(l.substitute(sigma) for l in self.literals))

    def of_kind(self, kind: str) -> list[Literal]:
        return [l for l in self.literals if l.kind == kind]

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)


def conj(parts: Sequence[Literal]) -> Constraint:
    return Constraint(tuple(parts))
