"""
Four decisions, two orders
==========================

The decisions ``bot`` (not applicable), ``0`` (deny), ``1`` (allow) and
``top`` (conflict) form a lattice under the knowledge order and another
under the truth order.
"""

import itertools

from ptacl4.algebra import belnap_ops, new_unary_ops
from ptacl4.lattice import FOUR, knowledge_lattice, truth_lattice, validate_lattice

k, t = knowledge_lattice(), truth_lattice()
print("laws hold:", bool(validate_lattice(k)), bool(validate_lattice(t)))

# In the knowledge order deny and allow are incomparable; their meet is bot.
ops = {**belnap_ops(), **new_unary_ops()}
kand, kor, conf = ops["kand"], ops["kor"], ops["conf"]


def show(op):
    print(f"{op.name:>5} | " + " ".join(f"{d.token:>3}" for d in FOUR))
    for x in FOUR:
        print(f"{x.token:>5} | " + " ".join(f"{op(x, y).token:>3}" for y in FOUR))
    print()


show(kand)
show(kor)

# Conflation swaps bot and top.  Conjugating kand by it gives kor.
ok = all(conf(kand(conf(x), conf(y))) == kor(x, y) for x, y in itertools.product(FOUR, repeat=2))
print("kor == conf(kand(conf x, conf y)):", ok)
