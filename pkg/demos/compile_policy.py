"""
From a decision table to a policy
=================================

A policy author tabulates the decision wanted for each combination of
sub-policy decisions.  Unlisted combinations are silent (``bot``).  The
compiler turns the table into a normal form that uses only conflation, the
4-cycle and the knowledge meet.
"""

import itertools

from ptacl4.interop import emit_policy, parse_table
from ptacl4.lattice import FOUR
from ptacl4.nf_compiler import compile_table, evaluate_formula, formula_size
from ptacl4.policy import Request, eval_policy, formula_to_policy

table = parse_table("""\
p1 p2 p3 -> p
bot 0 0 -> 0
0 0 0 -> 0
1 0 0 -> top
1 1 0 -> 1
1 1 1 -> 1
""")

f = compile_table(table)
print("clauses, literals:", formula_size(f))

# Each clause is a meet of literals; each literal is a word applied to one input.
first = f.children[0]
for lit in first.children[:3]:
    print("  ", ",".join(lit.word), "applied to", table.variables[lit.child.index])

# The formula agrees with the table on all 64 inputs.
assert all(evaluate_formula(f, xs) == table.lookup(xs) for xs in itertools.product(FOUR, repeat=3))

# As a policy over named sub-policies; joins spelled with conf and kand only.
policy = formula_to_policy(f, table.variables, expand_join=True)
text = emit_policy(policy)
print(text[:120] + "...")

env = dict(zip(table.variables, [FOUR[2], FOUR[1], FOUR[1]]))
print("at (1,0,0):", eval_policy(policy, Request.of(), env=env))
