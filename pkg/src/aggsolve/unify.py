"""Unification modulo the list, multiset, compact-list and set axioms.

Each algorithm rewrites a conjunction of equations, branching where the
axioms leave a choice, until every equation is a binding ``X = t`` with ``X``
nowhere else.  The union of the returned substitutions covers every solution.

Rules are tried in a fixed order of preference: failures, variable
elimination, decomposition of free functors, equations whose two sides end in
the same variable, and finally the branching rules for aggregates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .equational import normalize, term_key
from .limits import Limits, Stats
from .terms import (
    App, FreshSupply, Substitution, Term, Theory, Var, aggregate, free_vars,
    is_aggregate, occurs, split_aggregate, untail,
)

__all__ = ["UnificationProblem", "UnifierSet", "unify", "unify_equations"]

Equation = tuple[Term, Term]


@dataclass
class UnificationProblem:
    theory: Theory
    equations: Sequence[Equation]
    supply: FreshSupply = field(default_factory=FreshSupply)


@dataclass(frozen=True)
class UnifierSet:
    """Finitely many solved substitutions; empty means no unifier."""

    solutions: tuple[Substitution, ...]

    def __bool__(self):
        return bool(self.solutions)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self) -> Iterator[Substitution]:
        return iter(self.solutions)


# rule classes, in order of preference
_FAIL, _ELIM, _DECOMPOSE, _SAME_TAIL, _BRANCH = range(5)


def _classify(theory: Theory, s: Term, t: Term) -> int | None:
    """Rule class for one equation; ``None`` means the equation is trivially true."""
    if s == t:
        return None
    if isinstance(s, Var) or isinstance(t, Var):
        x, u = (s, t) if isinstance(s, Var) else (t, s)
        if not occurs(x, u):
            return _ELIM
        if _cyclic_allowed(theory, x, u):
            return _ELIM
        return _FAIL
    if s.functor != t.functor or len(s.args) != len(t.args):
        return _FAIL
    if theory is Theory.LIST or not is_aggregate(theory, s):
        return _DECOMPOSE
    if theory is Theory.CLIST:
        return _BRANCH
    _, ts = split_aggregate(theory, s)
    _, tt = split_aggregate(theory, t)
    if isinstance(ts, Var) and ts == tt:
        return _SAME_TAIL
    return _BRANCH


def _cyclic_allowed(theory: Theory, x: Var, u: Term) -> bool:
    """``X = {t1..tn | X}`` with ``X`` outside the elements (clist and set only)."""
    if theory not in (Theory.CLIST, Theory.SET):
        return False
    elements, rest = split_aggregate(theory, u)
    return bool(elements) and rest == x and not any(occurs(x, e) for e in elements)


class _State:
    __slots__ = ("solved", "eqs")

    def __init__(self, solved: dict[Var, Term], eqs: list[Equation]):
        self.solved = solved
        self.eqs = eqs


def _bind(state: _State, x: Var, t: Term) -> _State:
    sub = Substitution({x: t})
    solved = {k: sub.apply(v) for k, v in state.solved.items()}
    solved[x] = t
    eqs = [(sub.apply(a), sub.apply(b)) for a, b in state.eqs]
    return _State(solved, eqs)


def _with(state: _State, drop: int, new: Iterable[Equation]) -> _State:
    eqs = list(new) + state.eqs[:drop] + state.eqs[drop + 1:]
    return _State(state.solved, eqs)


def _expand(
    theory: Theory, state: _State, supply: FreshSupply, stats: Stats, limits: Limits
) -> list[_State] | None:
    """Apply one rule.  Returns successor states, or ``None`` when solved."""
    best_i, best_cls = -1, None
    i = 0
    while i < len(state.eqs):
        s, t = state.eqs[i]
        cls = _classify(theory, s, t)
        if cls is None:
            stats.rule(limits)
            state.eqs.pop(i)
            continue
        if best_cls is None or cls < best_cls:
            best_i, best_cls = i, cls
            if cls == _FAIL:
                break
        i += 1
    if best_cls is None:
        return None
    stats.rule(limits)
    s, t = state.eqs[best_i]
    c = theory.cons
    if best_cls == _FAIL:
        return []
    if best_cls == _ELIM:
        x, u = (s, t) if isinstance(s, Var) else (t, s)
        if isinstance(u, Var) and not isinstance(s, Var):
            x, u = t, s
        if occurs(x, u):
            return [_cycle(theory, state, best_i, x, u, supply)]
        rest = _with(state, best_i, ())
        return [_bind(rest, x, u)]
    if best_cls == _DECOMPOSE:
        return [_with(state, best_i, zip(s.args, t.args))]
    if theory is not Theory.LIST:
        # duplicates left behind by substitution would multiply the branches
        ns, nt = normalize(theory, s), normalize(theory, t)
        if (ns, nt) != (s, t):
            return [_with(state, best_i, [(ns, nt)])]
    if best_cls == _SAME_TAIL:
        return _same_tail(theory, state, best_i, s, t, supply)
    # branching on two aggregates
    (h1, r1), (h2, r2) = s.args, t.args
    if theory is Theory.MSET:
        n = supply.fresh("N")
        return [
            _with(state, best_i, [(h1, h2), (r1, r2)]),
            _with(state, best_i, [(r1, App(c, (h2, n))), (App(c, (h1, n)), r2)]),
        ]
    if theory is Theory.CLIST:
        return [
            _with(state, best_i, [(h1, h2), (r1, r2)]),
            _with(state, best_i, [(h1, h2), (r1, t)]),
            _with(state, best_i, [(h1, h2), (s, r2)]),
        ]
    n = supply.fresh("N")
    return [
        _with(state, best_i, [(h1, h2), (r1, r2)]),
        _with(state, best_i, [(h1, h2), (r1, t)]),
        _with(state, best_i, [(h1, h2), (s, r2)]),
        _with(state, best_i, [(r1, App(c, (h2, n))), (App(c, (h1, n)), r2)]),
    ]


def _cycle(theory: Theory, state: _State, i: int, x: Var, u: Term, supply: FreshSupply) -> _State:
    elements, _ = split_aggregate(theory, u)
    n = supply.fresh("N")
    if theory is Theory.SET:
        return _with(state, i, [(x, aggregate(theory, elements, n))])
    first = elements[0]
    new = [(first, e) for e in elements[1:]]
    new.append((x, aggregate(theory, [first], n)))
    return _with(state, i, new)


def _same_tail(
    theory: Theory, state: _State, i: int, s: Term, t: Term, supply: FreshSupply
) -> list[_State]:
    if theory is Theory.MSET:
        return [_with(state, i, [(untail(theory, s), untail(theory, t))])]
    left, x = split_aggregate(theory, s)
    right, _ = split_aggregate(theory, t)
    first, others = left[0], left[1:]
    out = []
    for j, r in enumerate(right):
        without = right[:j] + right[j + 1:]
        out.append(_with(state, i, [(first, r), (aggregate(theory, others, x), aggregate(theory, without, x))]))
        out.append(_with(state, i, [(first, r), (aggregate(theory, others, x), t)]))
        out.append(_with(state, i, [(first, r), (s, aggregate(theory, without, x))]))
    n = supply.fresh("N")
    out.append(_with(state, i, [
        (x, App(theory.cons, (first, n))),
        (aggregate(theory, others, n), aggregate(theory, right, n)),
    ]))
    return out


def _canonical_key(theory: Theory, sigma: Substitution, keep: Sequence[Var]) -> tuple:
    """Key that ignores fresh-variable names and axiom-equivalent ranges."""
    rename: dict[Var, Var] = {}
    parts = []
    for x in keep:
        t = normalize(theory, sigma.get(x, x))
        for v in sorted(free_vars(t) - set(keep), key=lambda v: v.name):
            rename.setdefault(v, Var(f"_{len(rename)}"))
        parts.append((x.name, term_key(normalize(theory, Substitution(rename).apply(t)))))
    return tuple(parts)


def unify_equations(
    theory: Theory,
    equations: Sequence[Equation],
    supply: FreshSupply,
    stats: Stats | None = None,
    limits: Limits | None = None,
    keep: Iterable[Var] | None = None,
) -> list[Substitution]:
    """All solved forms of ``equations``, each restricted to the variables in ``keep``.

    ``keep`` defaults to the variables of the equations.
    """
    stats = stats if stats is not None else Stats()
    limits = limits or Limits()
    if keep is None:
        vs: set[Var] = set()
        for a, b in equations:
            vs |= free_vars(a) | free_vars(b)
        keep = vs
    keep = sorted(set(keep), key=lambda v: v.name)
    keep_set = set(keep)
    results: list[Substitution] = []
    seen: set[tuple] = set()
    stack = [_State({}, list(equations))]
    while stack:
        state = stack.pop()
        succ = _expand(theory, state, supply, stats, limits)
        if succ is None:
            sigma = Substitution({k: v for k, v in state.solved.items() if k in keep_set})
            key = _canonical_key(theory, sigma, keep)
            if key not in seen:
                seen.add(key)
                results.append(sigma)
            continue
        if len(succ) > 1:
            stats.branch(limits, len(succ) - 1)
        stack.extend(reversed(succ))
    return results


def unify(problem: UnificationProblem, stats: Stats | None = None, limits: Limits | None = None) -> UnifierSet:
    sols = unify_equations(problem.theory, problem.equations, problem.supply, stats, limits)
    return UnifierSet(tuple(sols))
