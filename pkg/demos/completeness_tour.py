"""
Which operator sets are complete?
=================================

Functional completeness asks whether every function can be written as a
formula.  Canonical completeness asks for more: every function must have a
normal form, a join of meets of unary words applied to variables.
"""

from ptacl4.algebra import Permutation, generated_subgroup, registry, synthesize_permutation, NotGenerated
from ptacl4.completeness import (
    check_canonical_completeness,
    check_canonical_suitability,
    check_functional_completeness,
    totally_ordered_generators,
)
from ptacl4.lattice import BOT, DENY, ALLOW, FOUR, chain_lattice, knowledge_lattice

K = knowledge_lattice()
REG = registry()


def pick(*names):
    return {n: REG[n] for n in names}


# Negation fixes bot and top, so no unary word can send bot anywhere else.
print(check_canonical_completeness(pick("not"), K))

# Conflation with the knowledge meet can express the join, yet 0 and 1 stay put.
print(check_canonical_suitability(pick("conf", "kand"), K))
print(check_functional_completeness(pick("conf", "kand"), K))

# Adding the 4-cycle makes every permutation of the four decisions reachable.
print(check_canonical_completeness(pick("ttop", "cyc", "kand"), K))
print("subgroup order:", len(generated_subgroup(pick("ttop", "cyc"))))

# Shortest words for a few permutations.
for p in (Permutation.from_cycles(FOUR, (BOT, DENY)), Permutation.from_cycles(FOUR, (DENY, ALLOW))):
    print(p, "=", ",".join(synthesize_permutation(p, pick("conf", "cyc"))))

# A transposition two steps apart along the cycle spans only a dihedral group.
try:
    gens = {"(bot 1)": Permutation.from_cycles(FOUR, (BOT, ALLOW)), "cyc": REG["cyc"]}
    synthesize_permutation(Permutation.from_cycles(FOUR, (BOT, DENY)), gens)
except NotGenerated as exc:
    print(exc)

# Totally ordered sets: a swap of the ends, a cycle and min suffice.
for m in (3, 4, 5):
    ops = totally_ordered_generators(m)
    base = {n: ops[n] for n in ("dagger", "cyc", "tmeet")}
    print(f"chain {m}:", check_canonical_completeness(base, chain_lattice(m)))
