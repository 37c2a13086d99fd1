"""Brute-force ground truth over bounded Herbrand universes.

Nothing here uses the rewriting machinery: universes are enumerated and
de-duplicated by normal form, satisfiability is decided by exhaustive search
over the universe, and axiom closure is a plain breadth-first search over
rewrites at every position.

The exhaustive search narrows the candidates for a variable only with
necessary conditions read off ground terms.  An equation ``f(X) = g`` forces
``X`` to be an argument of ``g``, an element pattern must match some element,
and so on.  A branch is cut early only when a literal is already false for
every completion.  The set of solutions is exactly the one cartesian
enumeration would give, just reached faster.
"""

from __future__ import annotations

import builtins
import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .constraints import Constraint, Literal, Rel
from .equational import e_equal, eval_literal, normalize, term_key
from .terms import (
    App, NIL, Substitution, Term, Theory, Var, aggregate, depth, free_vars,
    is_aggregate, occurs, split_aggregate,
)

__all__ = [
    "Signature", "DEFAULT_SIGNATURE", "Universe", "enumerate_universe",
    "brute_sat", "brute_solutions", "closure_e_equal", "closure_class", "closure_partition",
    "BoundExceeded", "SearchBudgetExceeded", "is_instance",
]


class BoundExceeded(Exception):
    """The closure search hit its node bound before reaching a verdict."""


class SearchBudgetExceeded(Exception):
    """Exhaustive search visited more nodes than allowed."""


@dataclass(frozen=True)
class Signature:
    constants: tuple[str, ...] = ("nil", "a", "b")
    functors: tuple[tuple[str, int], ...] = (("f", 1),)

    def with_cons(self, theory: Theory) -> tuple[tuple[str, int], ...]:
        return self.functors + ((theory.cons, 2),)


DEFAULT_SIGNATURE = Signature()


@dataclass
class Universe:
    theory: Theory
    signature: Signature
    depth: int
    terms: tuple[Term, ...]
    index: dict = field(default_factory=dict, repr=False)
    members: dict = field(default_factory=dict, repr=False)

    def __contains__(self, t: Term) -> bool:
        return normalize(self.theory, t) in self.index

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def containing(self, element: Term) -> list[Term]:
        """Aggregates of the universe that have ``element`` on their spine."""
        return self.members.get(normalize(self.theory, element), [])

    def _build_structure(self) -> None:
        by_top: dict[tuple[str, int], list[Term]] = {}
        by_arg: dict[tuple[str, int, Term], list[Term]] = {}
        by_kernel: dict[Term, list[Term]] = {}
        by_count: dict[tuple[Term, int], list[Term]] = {}
        for t in self.terms:
            by_top.setdefault((t.functor, len(t.args)), []).append(t)
            for i, a in builtins.enumerate(t.args):
                by_arg.setdefault((t.functor, i, a), []).append(t)
            if is_aggregate(self.theory, t):
                elements, kernel = split_aggregate(self.theory, t)
                by_kernel.setdefault(kernel, []).append(t)
                by_count.setdefault((kernel, _element_count(self.theory, elements)), []).append(t)
        self._structure = (by_top, by_arg, by_kernel)
        self._by_count = by_count
        self._kernel_cache: dict = {}

    def with_kernel(self, kernel: Term, at_most: int) -> frozenset[Term]:
        """The term ``kernel`` and the aggregates on it with at most ``at_most`` elements.

        Elements are counted with multiplicity for multisets, distinct otherwise.
        """
        self.structure()
        key = (kernel, at_most)
        hit = self._kernel_cache.get(key)
        if hit is None:
            out = {kernel} if kernel in self.index else set()
            for n in range(1, at_most + 1):
                out.update(self._by_count.get((kernel, n), ()))
            hit = self._kernel_cache[key] = frozenset(out)
        return hit

    def exact_count(self, kernel: Term, n: int) -> frozenset[Term]:
        """Aggregates on ``kernel`` with exactly ``n`` elements (counted as in :meth:`with_kernel`)."""
        self.structure()
        key = ("exact", kernel, n)
        hit = self._kernel_cache.get(key)
        if hit is None:
            hit = self._kernel_cache[key] = frozenset(self._by_count.get((kernel, n), ()))
        return hit

    def holding(self, element: Term) -> frozenset[Term]:
        """Like :meth:`containing` but as a cached set; ``element`` must be normalized."""
        cache = self.__dict__.setdefault("_holding_cache", {})
        hit = cache.get(element)
        if hit is None:
            hit = cache[element] = frozenset(self.members.get(element, ()))
        return hit

    @property
    def largest(self) -> int:
        """Largest number of symbols in a term of the universe."""
        self._sizes()
        return self._largest

    def of_size(self, n: int) -> set[Term]:
        return self._sizes().get(n, set())

    def _sizes(self) -> dict[int, set[Term]]:
        if getattr(self, "_by_size", None) is None:
            by_size: dict[int, set[Term]] = {}
            for t in self.terms:
                by_size.setdefault(_profile(t)[0], set()).add(t)
            self._by_size = by_size
            self._largest = max(by_size, default=0)
        return self._by_size

    def structure(self):
        """Indexes of the terms by top symbol, by argument, and by aggregate kernel."""
        if getattr(self, "_structure", None) is None:
            self._build_structure()
        return self._structure


def _element_count(theory: Theory, elements: Sequence[Term]) -> int:
    return len(elements) if theory is Theory.MSET else len(set(elements))


def enumerate_universe(theory: Theory, signature: Signature = DEFAULT_SIGNATURE, max_depth: int = 3) -> Universe:
    """All ground terms of tree depth at most ``max_depth``, one per E-class."""
    if max_depth < 0:
        raise ValueError("depth must be non-negative")
    level = {App(c) for c in signature.constants}
    funs = signature.with_cons(theory)
    for _ in range(max_depth):
        prev = list(level)
        nxt = set(prev)
        for f, k in funs:
            for args in itertools.product(prev, repeat=k):
                nxt.add(normalize(theory, App(f, args)))
        level = nxt
    # a normal form can sit deeper than the shallowest member of its class
    terms = tuple(sorted(level, key=lambda t: (depth(t), term_key(t))))
    index = {t: i for i, t in builtins.enumerate(terms)}
    members: dict[Term, list[Term]] = {}
    for t in terms:
        elements, _ = split_aggregate(theory, t)
        for e in dict.fromkeys(elements):
            members.setdefault(e, []).append(t)
    return Universe(theory, signature, max_depth, terms, index, members)


# Alias matching the operation name used throughout the docs.
enumerate = enumerate_universe  # noqa: A001  (shadows the builtin inside this module)


# ---------------------------------------------------------------------------
# closure-based equality


def _rewrites_at_root(theory: Theory, t: Term) -> Iterator[Term]:
    if not is_aggregate(theory, t):
        return
    x, rest = t.args
    c = theory.cons
    permute = theory in (Theory.MSET, Theory.SET)
    absorb = theory in (Theory.CLIST, Theory.SET)
    if is_aggregate(theory, rest):
        y, z = rest.args
        if permute:
            yield App(c, (y, App(c, (x, z))))
        if absorb and x == y:
            yield rest
    if absorb:
        yield App(c, (x, t))


def _neighbours(theory: Theory, t: Term) -> Iterator[Term]:
    yield from _rewrites_at_root(theory, t)
    if isinstance(t, App):
        for i, a in builtins.enumerate(t.args):
            for b in _neighbours(theory, a):
                yield App(t.functor, t.args[:i] + (b,) + t.args[i + 1:])


def closure_class(theory: Theory, s: Term, max_depth: int, bound: int = 200_000) -> frozenset[Term]:
    """Every term of depth at most ``max_depth`` reachable from ``s`` by axiom steps."""
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in _neighbours(theory, u):
            if v in seen or depth(v) > max_depth:
                continue
            seen.add(v)
            if len(seen) > bound:
                raise BoundExceeded(f"closure of {s!r} exceeds {bound} terms")
            queue.append(v)
    return frozenset(seen)


def closure_e_equal(theory: Theory, s: Term, t: Term, bound: int = 200_000, slack: int = 0) -> bool:
    """Decide ``s = t`` by searching the axiom closure.

    Intermediate terms may be ``slack`` levels deeper than the deeper input.
    ``BoundExceeded`` is raised if more than ``bound`` terms are visited first.
    """
    if s == t:
        return True
    if theory is Theory.LIST:
        return False
    limit = max(depth(s), depth(t)) + slack
    seen = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in _neighbours(theory, u):
            if v in seen or depth(v) > limit:
                continue
            if v == t:
                return True
            seen.add(v)
            if len(seen) > bound:
                raise BoundExceeded(f"closure search from {s!r} exceeds {bound} terms")
            queue.append(v)
    return False


def closure_partition(theory: Theory, terms: Iterable[Term], max_depth: int | None = None) -> dict[Term, int]:
    """Label every term with the index of its axiom-closure class.

    Classes are explored without leaving ``max_depth`` (by default the depth
    of the deepest input).  Two inputs get the same label iff one is reachable
    from the other inside that bound.
    """
    terms = list(terms)
    if max_depth is None:
        max_depth = max((depth(t) for t in terms), default=0)
    wanted = set(terms)
    label: dict[Term, int] = {}
    classes = 0
    for t in terms:
        if t in label:
            continue
        for u in closure_class(theory, t, max_depth):
            if u in wanted:
                label[u] = classes
        classes += 1
    return label


# ---------------------------------------------------------------------------
# exhaustive search


_ALL = None  # marker: no restriction on a variable


def _intersect(a, b):
    if a is _ALL:
        return b
    if b is _ALL:
        return a
    return a & b


def _union(sets):
    parts = []
    for s in sets:
        if s is _ALL:
            return _ALL
        parts.append(s)
    if len(parts) == 1:
        return parts[0]
    return set().union(*parts)


def _rest_values(theory: Theory, elements: list[Term], kernel: Term) -> set[Term]:
    """Normal forms ``v`` such that adding some elements on top of ``v`` can give the aggregate."""
    if theory in (Theory.LIST, Theory.CLIST):
        return {aggregate(theory, elements[i:], kernel) for i in range(len(elements) + 1)}
    out = set()
    n = len(elements)
    for mask in range(1 << n):
        chosen = [elements[i] for i in range(n) if mask >> i & 1]
        out.add(normalize(theory, aggregate(theory, chosen, kernel)))
    return out


def _match(theory: Theory, p: Term, g: Term, x: Var):
    """Over-approximate the values of ``x`` for which ``p`` can equal the normal form ``g``.

    Other variables of ``p`` are wildcards.  ``_ALL`` means no restriction.
    """
    if p == x:
        return {g}
    if isinstance(p, Var) or x not in free_vars(p):
        return _ALL
    if not isinstance(g, App):
        return _ALL
    if not is_aggregate(theory, p):
        if g.functor != p.functor or len(g.args) != len(p.args):
            return set()
        res = _ALL
        for pi, gi in zip(p.args, g.args):
            res = _intersect(res, _match(theory, pi, gi, x))
        return res
    if not is_aggregate(theory, g):
        return set()
    pe, pr = split_aggregate(theory, p)
    ge, gr = split_aggregate(theory, g)
    res = _ALL
    for e in pe:
        if x in free_vars(e):
            res = _intersect(res, _union(_match(theory, e, ge_i, x) for ge_i in dict.fromkeys(ge)))
    if x in free_vars(pr):
        if pr == x:
            res = _intersect(res, _rest_values(theory, ge, gr))
        else:
            res = _intersect(res, _match(theory, pr, gr, x))
    return res


_SHAPE_CAP = 3000


def _shape(theory: Theory, p: Term, universe: Universe):
    """Over-approximate the universe terms ``p`` can equal, every variable a wildcard.

    ``_ALL`` when nothing useful is known or the set would be large.
    """
    if isinstance(p, Var):
        return _ALL
    if not free_vars(p):
        g = normalize(theory, p)
        return {g} if g in universe.index else set()
    by_top, by_arg, by_kernel = universe.structure()
    cands = _ALL
    if not is_aggregate(theory, p) or theory is Theory.LIST:
        # argument-wise: normal forms keep these arguments in place
        for i, a in builtins.enumerate(p.args):
            sa = _shape(theory, a, universe)
            if sa is _ALL:
                continue
            hits = set()
            for v in sa:
                hits.update(by_arg.get((p.functor, i, v), ()))
            cands = _intersect(cands, hits)
        if cands is _ALL:
            cands = by_top.get((p.functor, len(p.args)), ())
    else:
        # every element of p is an element of the value, and the kernel is kept
        elements, kernel = split_aggregate(theory, p)
        for e in elements:
            se = _shape(theory, e, universe)
            if se is _ALL:
                continue
            cands = _intersect(cands, _union(universe.holding(v) for v in se))
        if not isinstance(kernel, Var):
            sk = _shape(theory, kernel, universe)
            if sk is not _ALL:
                # on a fixed kernel the element count is exact for multisets, a bound otherwise
                n = len(elements)
                if theory is Theory.MSET:
                    on_kernel = (universe.exact_count(v, n) for v in sk)
                else:
                    on_kernel = (universe.with_kernel(v, n) for v in sk)
                cands = _intersect(cands, _union(on_kernel))
        if cands is _ALL:
            return _ALL
    if len(cands) > _SHAPE_CAP:
        return _ALL
    return set(cands)


def _decompose(theory: Theory, s: Term, t: Term) -> Iterator[tuple[Term, Term]]:
    """Equations implied by ``s = t`` through free functors, list constructors and compact-list heads."""
    if (
        isinstance(s, App) and isinstance(t, App) and s.functor == t.functor
        and len(s.args) == len(t.args)
        and (theory is Theory.LIST or s.functor != theory.cons)
    ):
        for a, b in zip(s.args, t.args):
            yield from _decompose(theory, a, b)
    elif theory is Theory.CLIST and is_aggregate(theory, s) and is_aggregate(theory, t):
        # absorption never touches the first element
        yield s, t
        yield from _decompose(theory, s.args[0], t.args[0])
    elif theory is Theory.MSET and is_aggregate(theory, s) and is_aggregate(theory, t):
        s, t = _cancel(s, t)
        se, sk = split_aggregate(theory, s)
        te, tk = split_aggregate(theory, t)
        if len(se) == len(te) == 1 and sk == tk and not free_vars(sk):
            # one element each on the same fixed rest
            yield from _decompose(theory, se[0], te[0])
        else:
            yield s, t
    else:
        yield s, t


def _cancel(s: Term, t: Term) -> tuple[Term, Term]:
    """Multiset equation with shared elements and a shared variable rest removed.

    Multiset union is cancellative, so the result holds exactly when ``s = t`` does.
    """
    se, sk = split_aggregate(Theory.MSET, s)
    te, tk = split_aggregate(Theory.MSET, t)
    left = list(te)
    kept = []
    for e in se:
        if e in left:
            left.remove(e)
        else:
            kept.append(e)
    shared_rest = sk == tk and isinstance(sk, Var)
    if shared_rest:
        sk = tk = NIL
    elif len(kept) == len(se):
        return s, t
    return aggregate(Theory.MSET, kept, sk), aggregate(Theory.MSET, left, tk)


def _cover_candidates(theory: Theory, p: Term, q: Term, x: Var, universe: Universe):
    """Values of ``x`` allowed because each element of ``p`` must be an element of ``q``.

    An element of ``q``'s value is one of its listed elements or, when the
    kernel of ``q`` is a variable, a member of that variable's value.
    """
    if theory is Theory.LIST:
        return _ALL
    p, q = normalize(theory, p), normalize(theory, q)
    if not (is_aggregate(theory, p) and is_aggregate(theory, q)):
        return _ALL
    pe, pk = split_aggregate(theory, p)
    qe, qk = split_aggregate(theory, q)
    res = _ALL
    if pk == x and not isinstance(qk, Var):
        # the rest of p holds no element q lacks and sits on q's kernel
        room = len(qe) - len(pe) if theory is Theory.MSET else len(set(qe))
        kernels = _shape(theory, qk, universe)
        if room < 0:
            res = set()
        elif kernels is not _ALL:
            res = _union(universe.with_kernel(k, room) for k in kernels)
    for e in pe:
        options = []
        for o in qe:
            if e == x:
                if o == x:
                    options.append(_ALL)
                elif not _inside_element(theory, x, o):
                    options.append(_ALL if x in free_vars(o) else _shape(theory, o, universe))
            elif not free_vars(e):
                if x in free_vars(o):
                    options.append(_match(theory, o, e, x))
                elif not _clash(theory, o, e):
                    options.append(_ALL)
            elif o == x:
                # the value of x is a universe term
                options.append(_ALL if x in free_vars(e) else _shape(theory, e, universe))
            elif not free_vars(o) and x in free_vars(e):
                options.append(_match(theory, e, o, x))
            elif not _clash(theory, e, o):
                options.append(_ALL)
        if isinstance(qk, Var):
            if occurs(qk, e):
                pass  # such an element would out-rank the value holding it
            elif qk != x:
                options.append(_ALL)
            elif not free_vars(e):
                options.append(universe.holding(normalize(theory, e)))
            else:
                options.append(_ALL)
        res = _intersect(res, _union(options))
    return res


_SMALL = 64


def _candidates(theory: Theory, lit: Literal, x: Var, universe: Universe):
    """Necessary condition on ``x`` from one literal."""
    if not lit.positive:
        return _ALL
    s, t = lit.lhs, lit.rhs
    if lit.rel is Rel.EQ:
        res = _ALL
        for l, r in _decompose(theory, s, t):
            for p, q in ((l, r), (r, l)):
                if x not in free_vars(p):
                    continue
                if not free_vars(q):
                    res = _intersect(res, _match(theory, p, normalize(theory, q), x))
                elif p == x:
                    # the value of q is the value of x, so it lies in the universe
                    res = _intersect(res, _shape(theory, q, universe))
            if res is not _ALL and len(res) <= _SMALL:
                # already narrow; the next node checks the literal itself
                continue
            res = _intersect(res, _cover_candidates(theory, l, r, x, universe))
            res = _intersect(res, _cover_candidates(theory, r, l, x, universe))
        return res
    # membership s in t
    if not free_vars(t) and x in free_vars(s):
        elements, _ = split_aggregate(theory, normalize(theory, t))
        return _union(_match(theory, s, e, x) for e in dict.fromkeys(elements))
    if is_aggregate(theory, t):
        # the member equals a listed element or lies in the rest
        g = normalize(theory, s)
        elements, kernel = split_aggregate(theory, t)
        options = []
        for o in elements:
            if x in free_vars(o) or x in free_vars(s):
                options.append(_candidates(theory, Literal(Rel.EQ, True, s, o), x, universe))
            elif not _pair_doomed(theory, g, normalize(theory, o)):
                options.append(_ALL)
        if isinstance(kernel, Var) and occurs(kernel, g):
            pass
        elif kernel == x and not free_vars(g):
            options.append(universe.holding(normalize(theory, g)))
        elif kernel == x:
            options.append(_members_shaped(theory, s, universe))
        elif isinstance(kernel, Var):
            options.append(_ALL)
        return _union(options)
    if t == x and free_vars(s):
        return _members_shaped(theory, s, universe)
    # a ground member is handled through the universe's member index
    return _ALL


def _members_shaped(theory: Theory, s: Term, universe: Universe):
    """Universe aggregates holding some instance of ``s``."""
    # members of universe terms are universe terms
    shape = _shape(theory, s, universe)
    if shape is _ALL:
        return _ALL
    return _union(universe.holding(v) for v in shape)


def _clash(theory: Theory, s: Term, t: Term) -> bool:
    """True when ``s`` and ``t`` (normal forms) differ under every instantiation."""
    if isinstance(s, Var) or isinstance(t, Var):
        return False
    sa, ta = is_aggregate(theory, s), is_aggregate(theory, t)
    if sa != ta:
        return True
    if sa:
        se, sk = split_aggregate(theory, s)
        te, tk = split_aggregate(theory, t)
        if theory is Theory.LIST and any(_clash(theory, a, b) for a, b in zip(se, te)):
            return True
        if theory is Theory.CLIST and _clash(theory, se[0], te[0]):
            return True
        if isinstance(sk, Var) or isinstance(tk, Var):
            return False
        if _clash(theory, sk, tk):
            return True
        if theory is Theory.LIST:
            se, _ = split_aggregate(theory, s)
            te, _ = split_aggregate(theory, t)
            if len(se) != len(te):
                return True
            return any(_clash(theory, a, b) for a, b in zip(se, te))
        if not free_vars(s) and not free_vars(t):
            return s != t
        return False
    if s.functor != t.functor or len(s.args) != len(t.args):
        return True
    return any(_clash(theory, a, b) for a, b in zip(s.args, t.args))


@lru_cache(maxsize=1 << 16)
def _profile(t: Term) -> tuple[int, tuple[tuple[Var, int], ...]]:
    if isinstance(t, Var):
        return 0, ((t, 1),)
    if not free_vars(t):
        return 1 + sum(_profile(a)[0] for a in t.args), ()
    k = 1
    counts: dict[Var, int] = {}
    for a in t.args:
        ka, ca = _profile(a)
        k += ka
        for v, n in ca:
            counts[v] = counts.get(v, 0) + n
    return k, tuple(counts.items())


def _size_profile(t: Term, counts: dict[Var, int]) -> int:
    """Number of symbol occurrences outside variables; variable counts go into ``counts``."""
    k, ca = _profile(t)
    for v, n in ca:
        counts[v] = counts.get(v, 0) + n
    return k


def _required_size(lit: Literal, x: Var) -> int | None:
    """Size forced on ``x`` by an equation whose other variables cancel out, if any."""
    cs: dict[Var, int] = {}
    k = _size_profile(lit.lhs, cs)
    ct: dict[Var, int] = {}
    k -= _size_profile(lit.rhs, ct)
    diff = {v: cs.get(v, 0) - ct.get(v, 0) for v in set(cs) | set(ct)}
    if any(n for v, n in diff.items() if v != x) or not diff.get(x):
        return None
    size, rem = divmod(-k, diff[x])
    return size if not rem else -1


def _sizes_impossible(s: Term, t: Term, largest: int) -> bool:
    """Whether no sizes in ``1..largest`` for the variables make ``s`` and ``t`` equally large."""
    cs: dict[Var, int] = {}
    ct: dict[Var, int] = {}
    k = _size_profile(s, cs) - _size_profile(t, ct)
    coeffs = [n for n in (cs.get(v, 0) - ct.get(v, 0) for v in set(cs) | set(ct)) if n]
    # need sum(c * size) == -k
    if not coeffs:
        return k != 0
    if k % math.gcd(*coeffs):
        return True
    low = sum(c * (1 if c > 0 else largest) for c in coeffs)
    high = sum(c * (largest if c > 0 else 1) for c in coeffs)
    return not low <= -k <= high


def _always_larger(s: Term, t: Term) -> bool:
    """Whether every instance of ``s`` has more symbols than the same instance of ``t``."""
    cs: dict[Var, int] = {}
    ct: dict[Var, int] = {}
    ks, kt = _size_profile(s, cs), _size_profile(t, ct)
    # each variable stands for at least one symbol
    slack = sum(n - ct.get(v, 0) for v, n in cs.items())
    if any(ct.get(v, 0) > cs.get(v, 0) for v in ct):
        return False
    return ks + slack > kt


def _inside_element(theory: Theory, x: Var, t: Term, nested: bool = False) -> bool:
    """Whether ``x`` sits in ``t`` below at least one element or free functor.

    Rest positions do not count.  Aggregate rank extended with one level per
    free functor never changes under the axioms, and such an occurrence
    makes ``t`` rank strictly above ``x``.
    """
    if t == x:
        return nested
    if isinstance(t, Var) or not t.args:
        return False
    if not is_aggregate(theory, t):
        return any(_inside_element(theory, x, a, True) for a in t.args)
    return _inside_element(theory, x, t.args[0], True) or _inside_element(theory, x, t.args[1], nested)


def _elements_uncovered(theory: Theory, s: Term, t: Term) -> bool:
    """Some element of ``s`` can never be an element of ``t``.

    Also compares element counts for multisets on fixed kernels.
    """
    if theory is Theory.LIST or not (is_aggregate(theory, s) and is_aggregate(theory, t)):
        return False
    se, sk = split_aggregate(theory, s)
    te, tk = split_aggregate(theory, t)
    if isinstance(tk, Var):
        # only elements that cannot be members of tk's value are decided
        return any(
            occurs(tk, e) and all(_pair_doomed(theory, e, o) for o in te) for e in se
        )
    if theory is Theory.MSET:
        if len(se) > len(te) or (not isinstance(sk, Var) and len(se) != len(te)):
            return True
    return any(all(_pair_doomed(theory, e, o) for o in te) for e in se)


def _pair_doomed(theory: Theory, s: Term, t: Term, largest: int | None = None) -> bool:
    """Whether the normal forms ``s`` and ``t`` differ under every instantiation.

    ``largest`` bounds the size of a variable's value when it is known.
    """
    if theory in (Theory.LIST, Theory.MSET):
        # these axioms keep the number of symbols unchanged
        if _always_larger(s, t) or _always_larger(t, s):
            return True
        if largest is not None and _sizes_impossible(s, t, largest):
            return True
    for x, u in ((s, t), (t, s)):
        # the value of u would out-rank the value of x
        if isinstance(x, Var) and _inside_element(theory, x, u):
            return True
        if theory is Theory.CLIST and isinstance(x, Var) and is_aggregate(theory, u):
            elements, kernel = split_aggregate(theory, u)
            # x = [[t1..tn | x]] forces every ti to equal the head of x
            if kernel == x and any(
                _pair_doomed(theory, a, b) for a, b in itertools.combinations(elements, 2)
            ):
                return True
    if _clash(theory, s, t):
        return True
    return _elements_uncovered(theory, s, t) or _elements_uncovered(theory, t, s)


def _doomed(theory: Theory, lit: Literal, largest: int | None = None) -> bool:
    """Whether a non-ground literal is false for every completion."""
    s = normalize(theory, lit.lhs)
    t = normalize(theory, lit.rhs)
    if lit.rel is Rel.EQ:
        if lit.positive:
            return any(_pair_doomed(theory, l, r, largest) for l, r in _decompose(theory, s, t))
        return s == t
    if isinstance(t, Var):
        # a member ranks strictly below the aggregate holding it
        return lit.positive and occurs(t, s)
    elements, kernel = split_aggregate(theory, t)
    if lit.positive:
        if not elements:
            return True
        if s in elements:
            return False
        # a member of the kernel's value ranks below it, so cannot contain it
        if isinstance(kernel, Var) and not occurs(kernel, s):
            return False
        return all(_pair_doomed(theory, s, e, largest) for e in elements)
    return s in elements


def _below(theory: Theory, s: Term, top: Var) -> list[tuple[Var, Var, bool]]:
    """Rank edges ``u <= top`` (strict when marked) for the variables ``u`` of ``s``, given ``s`` equals ``top``."""
    return [(u, top, _inside_element(theory, u, s)) for u in free_vars(s) if u != top]


def _membership_options(theory: Theory, s: Term, t: Term) -> list[list[tuple[Var, Var, bool]]]:
    """Rank edges implied by each way ``s in t`` can hold."""
    elements, kernel = split_aggregate(theory, t)
    options = []
    for o in dict.fromkeys(elements):
        if _pair_doomed(theory, s, o):
            continue
        edges = []
        if isinstance(o, Var):
            edges += _below(theory, s, o)
        if isinstance(s, Var):
            edges += _below(theory, o, s)
        options.append(edges)
    if isinstance(kernel, Var) and not occurs(kernel, s):
        # a member ranks strictly below the aggregate holding it
        options.append([(u, kernel, True) for u in free_vars(s)])
    return options


def _strict_cycle(edges: Iterable[tuple[Var, Var, bool]]) -> bool:
    """Whether the rank inequalities force some variable strictly below itself."""
    best: dict[tuple[Var, Var], bool] = {}
    for u, v, strict in edges:
        best[u, v] = best.get((u, v), False) or strict
    nodes = {n for pair in best for n in pair}
    for k in nodes:
        for i in nodes:
            if (i, k) not in best:
                continue
            for j in nodes:
                if (k, j) in best:
                    strict = best[i, k] or best[k, j]
                    if best.get((i, j)) is None or (strict and not best[i, j]):
                        best[i, j] = strict
    return any(best.get((n, n)) for n in nodes)


def _rank_conflict(theory: Theory, literals: Sequence[Literal]) -> bool:
    """Whether the positive literals order variable ranks in a cycle.

    Extended rank (one level per element or free functor) is preserved by
    every theory's axioms; a member ranks strictly below its aggregate.  A
    membership with several viable options is decided only when every
    option closes a cycle.
    """
    forced: list[tuple[Var, Var, bool]] = []
    choices = []
    for lit in literals:
        if not lit.positive or not lit.vars():
            continue
        s, t = normalize(theory, lit.lhs), normalize(theory, lit.rhs)
        if lit.rel is Rel.EQ:
            for l, r in _decompose(theory, s, t):
                if isinstance(l, Var):
                    forced += _below(theory, r, l)
                if isinstance(r, Var):
                    forced += _below(theory, l, r)
            continue
        options = _membership_options(theory, s, t)
        if len(options) == 1:
            forced += options[0]
        elif options:
            choices.append(options)
    if not choices and not forced:
        return False
    if _strict_cycle(forced):
        return True
    return any(all(_strict_cycle(forced + edges) for edges in options) for options in choices)


@dataclass
class _Search:
    theory: Theory
    universe: Universe
    literals: list[Literal]
    order: Sequence[Term]
    budget: int | None
    nodes: int = 0

    def run(self, variables: list[Var]) -> Iterator[dict[Var, Term]]:
        yield from self._go({}, variables)

    def _go(self, assign: dict[Var, Term], todo: list[Var]) -> Iterator[dict[Var, Term]]:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise SearchBudgetExceeded(f"more than {self.budget} search nodes")
        sigma = Substitution(assign)
        current = [l.substitute(sigma) for l in self.literals]
        for lit in current:
            if lit.vars():
                if _doomed(self.theory, lit, self.universe.largest):
                    return
            elif not eval_literal(self.theory, lit):
                return
        if todo and _rank_conflict(self.theory, current):
            return
        if not todo:
            yield dict(assign)
            return
        best_var, best_cands = None, _ALL
        for v in todo:
            cands, sized = _ALL, False
            for lit in current:
                if v in lit.vars():
                    cands = _intersect(cands, _candidates(self.theory, lit, v, self.universe))
                    if (
                        lit.rel is Rel.IN and lit.positive and lit.rhs == v
                        and not free_vars(lit.lhs)
                    ):
                        cands = _intersect(cands, self.universe.holding(normalize(self.theory, lit.lhs)))
            if self.theory in (Theory.LIST, Theory.MSET):
                for lit in current:
                    if lit.rel is Rel.EQ and lit.positive and v in lit.vars():
                        need = _required_size(lit, v)
                        if need is None:
                            continue
                        if cands is _ALL:
                            # already universe terms, no need to filter below
                            cands = self.universe.of_size(need)
                            sized = True
                        else:
                            cands = {c for c in cands if _profile(c)[0] == need}
            if cands is not _ALL:
                if not sized:
                    cands = self.universe.index.keys() & cands
                if best_cands is _ALL or len(cands) < len(best_cands):
                    best_var, best_cands = v, cands
                    if not cands:
                        break
        if best_var is None:
            # no ground anchor: take the variable that occurs most often
            best_var = max(todo, key=lambda v: (sum(v in l.vars() for l in current), v.name))
            values: Iterable[Term] = self.order
        else:
            rank_of = self.universe.index
            values = sorted(best_cands, key=lambda t: self._position(t, rank_of))
        rest = [v for v in todo if v != best_var]
        for value in values:
            assign[best_var] = value
            yield from self._go(assign, rest)
            del assign[best_var]

    def _position(self, t, rank_of):
        if self.order is self.universe.terms:
            return rank_of[t]
        return self._order_pos[t]

    def __post_init__(self):
        if self.order is not self.universe.terms:
            self._order_pos = {t: i for i, t in builtins.enumerate(self.order)}


def _components(literals: list[Literal]) -> list[list[Literal]]:
    groups: list[tuple[set, list]] = []
    for lit in literals:
        vs = set(lit.vars())
        merged_vars, merged_lits = set(vs), [lit]
        keep = []
        for gv, gl in groups:
            if gv & vs:
                merged_vars |= gv
                merged_lits = gl + merged_lits
            else:
                keep.append((gv, gl))
        keep.append((merged_vars, merged_lits))
        groups = keep
    return [lits for _, lits in groups]


def brute_solutions(
    theory: Theory,
    c: Constraint,
    universe: Universe,
    seed: int | None = None,
    budget: int | None = None,
) -> Iterator[Substitution]:
    """Every valuation over ``universe`` that satisfies ``c``.

    ``seed`` shuffles the order in which values are tried.
    """
    if c.is_false:
        return
    order: Sequence[Term] = universe.terms
    if seed is not None:
        shuffled = list(universe.terms)
        random.Random(seed).shuffle(shuffled)
        order = shuffled
    variables = sorted(c.vars(), key=lambda v: v.name)
    search = _Search(theory, universe, list(c.literals), order, budget)
    for assign in search.run(variables):
        yield Substitution(assign)


def brute_sat(
    theory: Theory,
    c: Constraint,
    universe: Universe,
    seed: int | None = None,
    budget: int | None = None,
) -> Substitution | None:
    """First satisfying valuation over ``universe``, or ``None``.

    Independent groups of literals (no shared variables) are searched
    separately and their valuations combined.
    """
    if c.is_false:
        return None
    combined: dict[Var, Term] = {}
    # ground groups are a single evaluation, so settle them first
    groups = sorted(_components(list(c.literals)), key=lambda g: len(Constraint(tuple(g)).vars()))
    for group in groups:
        found = next(brute_solutions(theory, Constraint(tuple(group)), universe, seed, budget), None)
        if found is None:
            return None
        combined.update(found)
    return Substitution(combined)


def is_instance(
    theory: Theory,
    sigma: Substitution,
    target: dict[Var, Term],
    universe: Universe | None = None,
    budget: int | None = 200_000,
) -> bool:
    """Whether ground ``target`` equals ``delta(sigma(X))`` for some grounding ``delta``.

    The residual variables of ``sigma`` are searched with the same
    candidate-narrowing search, over values drawn from the target terms.
    """
    lits = []
    for x, g in target.items():
        lits.append(Literal(Rel.EQ, True, sigma.apply(x), g))
    c = Constraint(tuple(lits))
    if not c.vars():
        return all(e_equal(theory, l.lhs, l.rhs) for l in lits)
    pool = universe if universe is not None else _subterm_universe(theory, target.values())
    return brute_sat(theory, c, pool, budget=budget) is not None


def _subterm_universe(theory: Theory, terms: Iterable[Term]) -> Universe:
    """Universe made of all E-subterms of the given ground terms."""
    found: set[Term] = set()
    stack = [normalize(theory, t) for t in terms]
    while stack:
        t = stack.pop()
        if t in found:
            continue
        found.add(t)
        if is_aggregate(theory, t):
            elements, kernel = split_aggregate(theory, t)
            for v in _rest_values(theory, elements, kernel):
                if v not in found:
                    stack.append(v)
            stack.extend(elements)
        elif isinstance(t, App):
            stack.extend(t.args)
    found.add(NIL)
    terms_sorted = tuple(sorted(found, key=lambda t: (depth(t), term_key(t))))
    index = {t: i for i, t in builtins.enumerate(terms_sorted)}
    members: dict[Term, list[Term]] = {}
    for t in terms_sorted:
        elements, _ = split_aggregate(theory, t)
        for e in dict.fromkeys(elements):
            members.setdefault(e, []).append(t)
    return Universe(theory, Signature((), ()), -1, terms_sorted, index, members)
