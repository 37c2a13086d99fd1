"""Terms over the four aggregate theories, plus substitutions and fresh names.

A term is either a :class:`Var` or an :class:`App` (a functor applied to a
tuple of arguments; constants are zero-arity applications).  Each theory owns
one binary aggregate constructor, so ``[a, b | X]`` in the list theory is
``App("cons", (a, App("cons", (b, X))))``.
"""

from __future__ import annotations

import enum
import re
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Var", "App", "Term", "NIL", "Theory", "const", "var", "cons", "aggregate",
    "size", "depth", "free_vars", "occurs", "split_aggregate", "is_aggregate",
    "tail", "untail", "rank", "find", "Substitution", "NotStabilizing",
    "FreshSupply", "RESERVED_PREFIXES", "is_reserved", "subterms",
]


class Var:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("V", name))

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.name!r})"

    def __reduce__(self):
        return (Var, (self.name,))


class App:
    __slots__ = ("functor", "args", "_hash")

    def __init__(self, functor: str, args: tuple = ()):
        self.functor = functor
        self.args = tuple(args)
        self._hash = hash((functor, self.args))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, App)
            and self._hash == other._hash
            and self.functor == other.functor
            and self.args == other.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return f"App({self.functor!r})"
        return f"App({self.functor!r}, {self.args!r})"

    def __reduce__(self):
        return (App, (self.functor, self.args))

    @property
    def arity(self) -> int:
        return len(self.args)


Term = Var | App

NIL = App("nil")


class Theory(enum.Enum):
    LIST = "list"
    MSET = "mset"
    CLIST = "clist"
    SET = "set"

    @property
    def cons(self) -> str:
        return _CONS[self]

    @classmethod
    def parse(cls, name: str) -> "Theory":
        return cls(name.lower())


_CONS = {
    Theory.LIST: "cons",
    Theory.MSET: "mcons",
    Theory.CLIST: "ccons",
    Theory.SET: "scons",
}
CONS_FUNCTORS = frozenset(_CONS.values())


def const(name: str) -> App:
    return App(name)


def var(name: str) -> Var:
    return Var(name)


def cons(theory: Theory, head: Term, rest: Term) -> App:
    return App(theory.cons, (head, rest))


def aggregate(theory: Theory, elements: Iterable[Term], rest: Term = NIL) -> Term:
    """Right-nested aggregate ``{e1, ..., en | rest}`` for ``theory``."""
    out = rest
    for e in reversed(list(elements)):
        out = App(theory.cons, (e, out))
    return out


def is_aggregate(theory: Theory, t: Term) -> bool:
    return isinstance(t, App) and t.functor == theory.cons and len(t.args) == 2


def size(t: Term) -> int:
    """Number of constant and function symbol occurrences."""
    if isinstance(t, Var):
        return 0
    return 1 + sum(size(a) for a in t.args)


def depth(t: Term) -> int:
    """Tree height; leaves (variables and constants) have depth 0."""
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


@lru_cache(maxsize=1 << 18)
def free_vars(t: Term) -> frozenset[Var]:
    out: set[Var] = set()
    _collect_vars(t, out)
    return frozenset(out)


def _collect_vars(t: Term, out: set) -> None:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u)
        else:
            stack.extend(u.args)


def occurs(x: Var, t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            if u == x:
                return True
        else:
            stack.extend(u.args)
    return False


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        if isinstance(u, App):
            stack.extend(u.args)


def split_aggregate(theory: Theory, t: Term) -> tuple[list[Term], Term]:
    """Maximal element prefix under the theory's constructor, and the rest."""
    elements = []
    c = theory.cons
    while isinstance(t, App) and t.functor == c and len(t.args) == 2:
        elements.append(t.args[0])
        t = t.args[1]
    return elements, t


def tail(theory: Theory, t: Term) -> Term:
    return split_aggregate(theory, t)[1]


def untail(theory: Theory, t: Term) -> Term:
    """Replace a variable rest by ``nil``; anything else is left alone."""
    if isinstance(t, Var):
        return NIL
    elements, rest = split_aggregate(theory, t)
    if not elements or not isinstance(rest, Var):
        return t
    return aggregate(theory, elements, NIL)


def rank(theory: Theory, s: Term) -> int:
    """Maximum aggregate nesting: 0 off the constructor, else max(1+rank(u), rank(v))."""
    elements, _ = split_aggregate(theory, s)
    best = 0
    for e in elements:
        best = max(best, 1 + rank(theory, e))
    return best


def find(theory: Theory, x: Var, t: Term) -> frozenset[int]:
    """Depths at which ``x`` occurs inside ``t``.

    The five defining clauses are followed literally.  In particular an
    aggregate whose rest is a non-aggregate compound only looks at its head,
    never inside that rest.
    """
    if isinstance(t, Var):
        return frozenset({0}) if t == x else frozenset()
    if not t.args:
        return frozenset()
    if is_aggregate(theory, t):
        head, rest = t.args
        inner = frozenset(1 + n for n in find(theory, x, head))
        if isinstance(rest, App) and not is_aggregate(theory, rest):
            return inner
        return inner | find(theory, x, rest)
    acc: set[int] = set()
    for a in t.args:
        acc.update(1 + n for n in find(theory, x, a))
    return frozenset(acc)


class NotStabilizing(Exception):
    """Iterating a substitution did not reach a fixpoint within the cap."""


class Substitution(Mapping[Var, Term]):
    """Finite map from variables to terms; identity bindings are dropped."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[Var, Term] | Iterable[tuple[Var, Term]] = ()):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        self._map = {k: v for k, v in items if k != v}
        self._hash = None

    def __getitem__(self, key):
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{k.name}/{v!r}" for k, v in sorted(self._map.items(), key=lambda kv: kv[0].name))
        return f"Substitution([{inner}])"

    def apply(self, t: Term) -> Term:
        if not self._map:
            return t
        return _apply(self._map, t)

    def compose_step(self) -> "Substitution":
        """One iteration: ``[X_i / self(t_i)]``."""
        return Substitution({k: self.apply(v) for k, v in self._map.items()})

    def power(self, m: int) -> "Substitution":
        if m < 1:
            raise ValueError("power needs m >= 1")
        cur = self
        for _ in range(m - 1):
            cur = Substitution({k: self.apply(v) for k, v in cur._map.items()})
        return cur

    def closure(self, cap: int | None = None) -> "Substitution":
        """Iterate until the substitution stops changing.

        An acyclic substitution over ``q`` variables settles after at most
        ``q - 1`` iterations, so the default cap is the domain size.
        """
        if cap is None:
            cap = len(self._map)
        cur = self
        for _ in range(cap + 1):
            nxt = Substitution({k: self.apply(v) for k, v in cur._map.items()})
            if nxt == cur:
                return cur
            cur = nxt
        raise NotStabilizing(f"no fixpoint within {cap} iterations")

    def restrict(self, keep: Iterable[Var]) -> "Substitution":
        keep = set(keep)
        return Substitution({k: v for k, v in self._map.items() if k in keep})

    def range_vars(self) -> frozenset[Var]:
        out: set[Var] = set()
        for v in self._map.values():
            _collect_vars(v, out)
        return frozenset(out)


def _apply(m: Mapping[Var, Term], t: Term) -> Term:
    if isinstance(t, Var):
        return m.get(t, t)
    if not t.args:
        return t
    new_args = tuple(_apply(m, a) for a in t.args)
    if all(a is b for a, b in zip(new_args, t.args)):
        return t
    return App(t.functor, new_args)


RESERVED_PREFIXES = ("F_", "M_", "N_", "Z_")
_RESERVED = re.compile(r"^(F|M|N|Z)_")


def is_reserved(name: str) -> bool:
    return bool(_RESERVED.match(name))


class FreshSupply:
    """Deterministic source of variables that never clash with parsed input.

    All prefixes share one counter, so two calls never return the same name.
    """

    def __init__(self, start: int = 0):
        self.counter = start

    def fresh(self, prefix: str = "N") -> Var:
        prefix = prefix.rstrip("_")
        if prefix not in ("F", "M", "N", "Z"):
            raise ValueError(f"unknown fresh prefix {prefix!r}")
        v = Var(f"{prefix}_{self.counter}")
        self.counter += 1
        return v

    def __repr__(self):
        return f"FreshSupply(counter={self.counter})"


def fresh(supply: FreshSupply, prefix: str = "N") -> Var:
    return supply.fresh(prefix)
