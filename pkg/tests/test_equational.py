import pytest

from aggsolve.constraints import Constraint
from aggsolve.equational import NotGround, e_equal, eval_ground, ground_member, normalize, term_key
from aggsolve.oracle import closure_e_equal
from aggsolve.terms import NIL, App, Theory, Var

from conftest import C, L, M, S, P, T, universe


def test_normal_forms():
    assert normalize(M, T("{[b, a, b]}", M)) == T("{[a, b, b]}", M)
    assert normalize(C, T("[[a, a, b | X]]", C)) == T("[[a, b | X]]", C)
    assert normalize(S, T("{b, a, b}", S)) == T("{a, b}", S)


def test_normal_form_keeps_kernel():
    assert normalize(S, T("{b, a | f(b, a)}", S)) == T("{a, b | f(b, a)}", S)
    assert normalize(S, T("{b | {a | X}}", S)) == T("{a, b | X}", S)


def test_term_order():
    keys = [term_key(t) for t in (NIL, App("a"), Var("X"), T("f(a)"))]
    assert keys == sorted(keys)


@pytest.mark.parametrize("theory,s,t,expected", [
    (M, "{[a, b]}", "{[b, a]}", True),
    (S, "{a | X}", "{a, a | X}", True),
    (L, "[a, b]", "[b, a]", False),
    (C, "[[a, b, a]]", "[[a, a, b]]", False),
    (M, "{[a, a]}", "{[a]}", False),
    (S, "{a | b}", "{a | c}", False),
])
def test_e_equal(theory, s, t, expected):
    assert e_equal(theory, T(s, theory), T(t, theory)) is expected


def test_clist_absorbs_only_adjacent_duplicates():
    s, t = T("[[a, b, a]]", C), T("[[a, a, b]]", C)
    assert closure_e_equal(C, s, t) is False
    assert closure_e_equal(C, T("[[a, a, b]]", C), T("[[a, b]]", C)) is True


@pytest.mark.parametrize("theory,elem,agg,expected", [
    (S, "a", "{b, a}", True),
    (L, "a", "nil", False),
    (S, "a", "nil", False),
    (S, "a", "{c | b}", False),
    (M, "b", "{[a | b]}", False),
])
def test_ground_member(theory, elem, agg, expected):
    assert ground_member(theory, T(elem, theory), T(agg, theory)) is expected


def test_eval_ground():
    assert eval_ground(S, P("{a | b} != {a | c}", S)) is True
    assert eval_ground(S, P("{a} = {a, a}", S)) is True
    assert eval_ground(S, P("a nin {a}", S)) is False
    x = Var("X")
    assert eval_ground(S, P("a in X", S), {x: T("{a}", S)}) is True


def test_eval_ground_needs_ground_terms():
    with pytest.raises(NotGround):
        eval_ground(S, P("X = a", S))


def test_false_constraint_evaluates_false():
    assert eval_ground(S, Constraint.false()) is False
    assert eval_ground(S, Constraint(())) is True


@pytest.mark.parametrize("theory", list(Theory), ids=lambda t: t.value)
def test_e_equal_is_an_equivalence(theory):
    terms = universe(theory, 2).terms[:60]
    raw = []
    for t in terms:
        # shuffle spines to get non-normal representatives
        raw.append(t)
        if t.args and t.functor == theory.cons and t.args[1].args:
            h, rest = t.args
            h2, rest2 = rest.args if rest.functor == theory.cons else (None, None)
            if h2 is not None and theory in (M, S):
                raw.append(App(theory.cons, (h2, App(theory.cons, (h, rest2)))))
    for s in raw:
        assert e_equal(theory, s, s)
        for t in raw:
            assert e_equal(theory, s, t) == e_equal(theory, t, s)
