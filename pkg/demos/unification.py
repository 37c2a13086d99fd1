"""Unifier sets under each theory.

A list equation has at most one most general unifier.  Permutation and
absorption make multisets, compact lists and sets branch.
"""

from aggsolve import FreshSupply, Theory, Var, format_term, parse_term, unify_equations

EQUATIONS = {
    Theory.LIST: ("[X | Y]", "[a, b]"),
    Theory.MSET: ("{[X | Y]}", "{[a, b]}"),
    Theory.CLIST: ("[[X | Y]]", "[[a, a, b]]"),
    Theory.SET: ("{X | Y}", "{a, b}"),
}

for theory, (lhs, rhs) in EQUATIONS.items():
    l, r = parse_term(lhs, theory), parse_term(rhs, theory)
    sols = unify_equations(theory, [(l, r)], FreshSupply(), keep={Var("X"), Var("Y")})
    print(f"{theory.value}: {lhs} = {rhs}  ({len(sols)} unifier(s))")
    for s in sols:
        print("   ", ", ".join(f"{x.name} -> {format_term(theory, s[x])}" for x in sorted(s, key=lambda v: v.name)))
