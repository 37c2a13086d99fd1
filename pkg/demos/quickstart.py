"""One constraint, four theories.

The same text is parsed and solved as a list, multiset, compact-list and
set problem.  Run with ``python3 demos/quickstart.py``.
"""

from aggsolve import SolverConfig, Theory, eval_ground, format_constraint, format_term, parse, sat

PROBLEMS = {
    Theory.LIST: "[a, X] = [Y, b] & Z != nil & a in Z",
    Theory.MSET: "{[a, X]} = {[b, Y]} & a in Z",
    Theory.CLIST: "[[a, a, X]] = [[a, b]] & X nin Z",
    Theory.SET: "{a, X} = {b, Y} & {a | Z} != Z",
}

for theory, text in PROBLEMS.items():
    c = parse(text, theory)
    out = sat(theory, c, SolverConfig(all_solutions=True, witness=True))
    print(f"--- {theory.value}: {format_constraint(theory, c)}")
    print(f"    {out.verdict.value}, {len(out.solved_forms)} solved form(s), {out.stats.branches} extra branch(es)")
    for form in out.solved_forms:
        w = form.witness
        shown = ", ".join(f"{x.name} = {format_term(theory, w[x])}" for x in sorted(w, key=lambda v: v.name))
        print(f"    {format_constraint(theory, form.constraint) or 'true'}")
        # every witness is a ground valuation of the original input
        print(f"      witness {shown}  (holds: {eval_ground(theory, c, w)})")
