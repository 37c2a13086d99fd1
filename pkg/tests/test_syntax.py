import pytest
from hypothesis import given, strategies as st

from aggsolve.constraints import Rel
from aggsolve.corpus import random_constraint, random_term
from aggsolve.syntax import ParseError, detect_theory, format_constraint, format_term, parse, parse_term
from aggsolve.terms import NIL, App, Theory, Var

import random


def test_sugar_expands_to_constructors():
    assert parse_term("[a, b]", Theory.LIST) == App("cons", (App("a"), App("cons", (App("b"), NIL))))
    assert parse_term("{a | X}", Theory.SET) == App("scons", (App("a"), Var("X")))
    assert parse_term("{[a]}", Theory.MSET) == App("mcons", (App("a"), NIL))
    assert parse_term("[[a]]", Theory.CLIST) == App("ccons", (App("a"), NIL))
    assert parse_term("[]", Theory.LIST) == NIL


def test_literal_kinds():
    c = parse("X = a & X != b & a in Y & b nin Y", Theory.SET)
    assert [(l.rel, l.positive) for l in c.literals] == [
        (Rel.EQ, True), (Rel.EQ, False), (Rel.IN, True), (Rel.IN, False),
    ]


def test_comments_and_newlines():
    c = parse("# header\nX = a &\n  Y = b  # trailing\n", Theory.LIST)
    assert len(c.literals) == 2


def test_unknown_relation_reports_position():
    with pytest.raises(ParseError) as err:
        parse("X inn Y", Theory.SET)
    assert (err.value.line, err.value.column) == (1, 3)


def test_mixed_theories_rejected():
    with pytest.raises(ParseError, match="list constructor used in a set"):
        parse("X = {[a]}", Theory.SET)
    with pytest.raises(ParseError):
        parse("X = [a] & Y = {a}")


def test_reserved_prefix():
    with pytest.raises(ParseError, match="reserved"):
        parse("N_0 = a", Theory.SET)
    assert parse("N_0 = a", Theory.SET, allow_reserved=True).vars() == {Var("N_0")}


def test_detect_theory():
    assert detect_theory("X in {[a]}") is Theory.MSET
    assert detect_theory("X = a") is None


def test_double_brackets_outside_compact_lists():
    assert parse_term("[[a]]", Theory.LIST) == App("cons", (App("cons", (App("a"), NIL)), NIL))
    assert parse_term("{{a}}", Theory.SET) == App("scons", (App("scons", (App("a"), NIL)), NIL))


@pytest.mark.parametrize("theory", list(Theory), ids=lambda t: t.value)
@given(seed=st.integers(0, 10**6))
def test_round_trip(theory, seed):
    rng = random.Random(seed)
    t = random_term(rng, theory, 3)
    assert parse_term(format_term(theory, t), theory) == t
    c = random_constraint(rng, theory)
    assert parse(format_constraint(theory, c), theory) == c
