import pytest

from aggsolve.equational import e_equal
from aggsolve.limits import BranchLimitExceeded, Limits, Stats
from aggsolve.oracle import brute_solutions, is_instance
from aggsolve.constraints import Constraint, eq
from aggsolve.terms import FreshSupply, Substitution, Theory, Var
from aggsolve.unify import UnificationProblem, unify, unify_equations

from conftest import C, L, M, S, T, SMALL
from aggsolve.oracle import enumerate_universe

X, Y, R = Var("X"), Var("Y"), Var("R")


def solve(theory, *pairs):
    eqs = [(T(l, theory), T(r, theory)) for l, r in pairs]
    return eqs, unify_equations(theory, eqs, FreshSupply())


def assert_sound(theory, eqs, sols):
    for s in sols:
        for l, r in eqs:
            assert e_equal(theory, s.apply(l), s.apply(r)), (s, l, r)


def test_list_decomposition():
    eqs, sols = solve(L, ("[X | Y]", "[a, b]"))
    assert sols == [Substitution({X: T("a"), Y: T("[b]", L)})]


def test_mset_two_unifiers():
    eqs, sols = solve(M, ("{[X | R]}", "{[a, b]}"))
    got = {(s[X], s[R]) for s in sols}
    assert got == {(T("a"), T("{[b]}", M)), (T("b"), T("{[a]}", M))}


def test_mset_same_tail_failure():
    _, sols = solve(M, ("{[a | X]}", "{[b | X]}"))
    assert sols == []


def test_list_occurs_check():
    _, sols = solve(L, ("X", "[a | X]"))
    assert sols == []


def test_clist_cycle_gets_fresh_tail():
    eqs, sols = solve(C, ("X", "[[a | X]]"))
    assert len(sols) == 1
    (s,) = sols
    bound = s[X]
    assert bound.functor == "ccons" and bound.args[0] == T("a")
    assert isinstance(bound.args[1], Var) and bound.args[1] != X
    assert_sound(C, eqs, sols)


def test_set_singleton_against_duplicate():
    eqs, sols = solve(S, ("{X}", "{a, a}"))
    assert sols and all(s[X] == T("a") for s in sols)
    # every ground solution over a depth-2 universe binds X to a
    u = enumerate_universe(S, SMALL, 2)
    c = Constraint((eq(T("{X}", S), T("{a, a}", S)),))
    assert {g[X] for g in brute_solutions(S, c, u)} == {T("a")}


def test_set_same_tail_keeps_identity():
    eqs, sols = solve(S, ("{a, b | X}", "{b, a | X}"))
    assert_sound(S, eqs, sols)
    assert any(X not in s for s in sols)


def test_set_different_tails():
    eqs, sols = solve(S, ("{a | X}", "{b | Y}"))
    assert_sound(S, eqs, sols)
    target = {X: T("{b}", S), Y: T("{a}", S)}
    assert any(is_instance(S, s, target) for s in sols)


@pytest.mark.parametrize("theory", list(Theory), ids=lambda t: t.value)
def test_clash_fails(theory):
    _, sols = solve(theory, ("f(X)", "g(X)"))
    assert sols == []
    _, sols = solve(theory, ("a", "nil"))
    assert sols == []


def test_unify_wrapper():
    p = UnificationProblem(L, [(T("[X]", L), T("[a]", L))])
    res = unify(p)
    assert bool(res) and len(res) == 1
    assert list(res)[0][X] == T("a")
    assert not unify(UnificationProblem(L, [(T("a"), T("b"))]))


def test_branch_limit():
    eqs = [(T("{X, Y, a | R}", S), T("{a, b, X | Y}", S))]
    with pytest.raises(BranchLimitExceeded):
        unify_equations(S, eqs, FreshSupply(), Stats(), Limits(branch_limit=2))


def test_stats_counted():
    stats = Stats()
    unify_equations(M, [(T("{[X | R]}", M), T("{[a, b]}", M))], FreshSupply(), stats)
    assert stats.rule_applications > 0
    assert stats.branches >= 1
