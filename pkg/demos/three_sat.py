"""Solve a 3-SAT instance written as list constraints.

false is ``nil`` and true is ``[nil]``.  Each clause forbids the one
assignment of its three literals that makes it false.
"""

import time
from pathlib import Path

from aggsolve import SolverConfig, Theory, Var, parse, parse_term, sat

L = Theory.LIST
c = parse((Path(__file__).with_name("three_sat.txt")).read_text(), L)
start = time.perf_counter()
out = sat(L, c, SolverConfig(witness=True))
elapsed = time.perf_counter() - start
print(f"{len(c.literals)} literals: {out.verdict.value} in {elapsed:.2f}s")

true = parse_term("[nil]", L)
w = out.witnesses[0]
bits = {f"X{i}": w[Var(f"X{i}")] == true for i in (1, 2, 3)}
for name, value in bits.items():
    print(f"  {name} = {int(value)}")
x1, x2, x3 = bits.values()
print("CNF holds:", (x1 or x2 or not x3) and (not x1 or x2 or x3) and (x1 or not x2 or x3))
