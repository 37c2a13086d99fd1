"""Cross-check the solver against exhaustive search on random constraints.

Satisfiable answers come with a witness that is evaluated on the input.
Unsatisfiable answers are confirmed by searching every valuation over
the ground terms of depth at most 2.
"""

import random
import sys

from aggsolve import SolverConfig, Theory, brute_sat, enumerate_universe, eval_ground, format_constraint, sat
from aggsolve.corpus import random_constraint

n = int(sys.argv[1]) if len(sys.argv) > 1 else 100
for theory in Theory:
    universe = enumerate_universe(theory, max_depth=2)
    rng = random.Random(0)
    tally = {"sat": 0, "unsat": 0}
    for _ in range(n):
        c = random_constraint(rng, theory)
        out = sat(theory, c, SolverConfig(witness=True))
        tally[out.verdict.value] += 1
        if out.sat:
            assert eval_ground(theory, c, out.witnesses[0])
        elif (g := brute_sat(theory, c, universe)) is not None:
            print(f"  disagreement: {format_constraint(theory, c)} has solution {g}")
    print(f"{theory.value:5} {len(universe):5} ground terms  {tally}")
