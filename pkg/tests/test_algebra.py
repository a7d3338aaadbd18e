import itertools

import pytest
from hypothesis import given, strategies as st

from ptacl4.algebra import (
    NotGenerated,
    OpTable,
    Permutation,
    Term,
    UnknownOperator,
    access_ops,
    all_permutations,
    belnap_ops,
    compose,
    generated_subgroup,
    lookup,
    new_unary_ops,
    registry,
    synthesize_permutation,
)
from ptacl4.lattice import ALLOW, BOT, DENY, FOUR, TOP, knowledge_lattice, truth_lattice

from oracles import OOA, UN

U = new_unary_ops()
REG = registry()
PERMS = all_permutations(FOUR)
perms = st.sampled_from(PERMS)


def test_registry_names():
    expected = {"not", "conf", "t0", "t1", "ttop", "cyc", "kand", "kor", "tand", "tor", "imp", "ooa", "un"}
    assert expected <= set(REG)


def test_unary_tables():
    assert U["conf"].table == (TOP, DENY, ALLOW, BOT)
    assert U["ttop"].table == U["conf"].table
    assert U["t0"].table == (DENY, BOT, ALLOW, TOP)
    assert U["t1"].table == (ALLOW, DENY, BOT, TOP)
    assert U["cyc"].table == (DENY, ALLOW, TOP, BOT)


def test_kand_kor_are_knowledge_meet_join_and_tand_tor_truth():
    k, t = knowledge_lattice(), truth_lattice()
    ops = belnap_ops()
    for x, y in itertools.product(FOUR, repeat=2):
        assert ops["kand"](x, y) == k.meet(x, y)
        assert ops["kor"](x, y) == k.join(x, y)
        assert ops["tand"](x, y) == t.meet(x, y)
        assert ops["tor"](x, y) == t.join(x, y)


def test_access_ops_match_reference():
    ops = access_ops()
    for (x, y), v in OOA.items():
        assert ops["ooa"](x, y) == v
    for (x, y), v in UN.items():
        assert ops["un"](x, y) == v


def test_constants():
    ops = belnap_ops()
    assert ops["c_top"]() is TOP and ops["c_bot"].arity == 0


def test_compose_is_right_to_left():
    # conf first, then cyc: bot -> top -> bot
    w = compose(("cyc", "conf"), REG)
    assert w(BOT) == U["cyc"](U["conf"](BOT)) == BOT
    assert w(DENY) == ALLOW
    assert compose((), REG).table == FOUR


def test_unknown_operator():
    with pytest.raises(UnknownOperator):
        lookup(REG, "xor")
    with pytest.raises(UnknownOperator):
        compose(("conf", "nope"), REG)


def test_optable_validation():
    with pytest.raises(ValueError):
        OpTable("bad", 1, FOUR, (BOT, DENY))
    with pytest.raises(ValueError):
        OpTable("bad", 1, FOUR, (BOT, DENY, ALLOW, "x"))


def test_permutation_cycle_notation():
    cyc = Permutation.from_op(U["cyc"])
    assert str(cyc) == "(bot 0 1 top)"
    assert cyc.order == 4
    assert str(Permutation.identity(FOUR)) == "()"
    with pytest.raises(ValueError):
        Permutation.from_cycles(FOUR, (BOT, DENY), (DENY, TOP))


def test_subgroup_orders():
    assert len(generated_subgroup({k: U[k] for k in ("t0", "t1", "ttop")})) == 24
    assert len(generated_subgroup({k: U[k] for k in ("conf", "cyc")})) == 24
    assert len(generated_subgroup({"not": U["not"]})) == 2
    rot = generated_subgroup({"cyc": U["cyc"]})
    assert len(rot) == 4


def test_synthesis_known_words():
    basis = {k: U[k] for k in ("conf", "cyc")}
    assert synthesize_permutation(Permutation.identity(FOUR), basis) == ()
    assert synthesize_permutation(Permutation.from_op(U["conf"]), basis) == ("conf",)
    t = {k: U[k] for k in ("t0", "t1", "ttop")}
    assert synthesize_permutation(Permutation.from_cycles(FOUR, (BOT, DENY)), t) == ("t0",)


def test_not_generated_carries_gcd():
    gens = {"(bot 1)": Permutation.from_cycles(FOUR, (BOT, ALLOW)), "cyc": U["cyc"]}
    with pytest.raises(NotGenerated) as info:
        synthesize_permutation(Permutation.from_cycles(FOUR, (BOT, DENY)), gens)
    assert info.value.detail == "gcd(2,4)=2"
    assert info.value.subgroup_order == 8


@given(perms)
def test_synthesized_word_composes_to_target(p):
    for basis in (("conf", "cyc"), ("t0", "t1", "ttop")):
        gens = {k: U[k] for k in basis}
        word = synthesize_permutation(p, gens)
        assert compose(word, gens, FOUR).table == p.images
        # minimality: no shorter word reaches p
        for n in range(len(word)):
            for w in itertools.product(basis, repeat=n):
                assert compose(w, gens, FOUR).table != p.images


@given(perms, perms, perms)
def test_group_laws(a, b, c):
    assert a.compose(b.compose(c)) == a.compose(b).compose(c)
    assert a.compose(a.inverse()).is_identity
    assert (a @ b)(BOT) == a(b(BOT))


def test_term_rendering():
    t = Term("conf", (Term("kand", (Term("conf", (Term.variable(0),)), Term("conf", (Term.variable(1),)))),))
    assert str(t) == "conf(kand(conf(x), conf(y)))"
    for x, y in itertools.product(FOUR, repeat=2):
        assert t.evaluate(REG, (x, y)) == REG["kor"](x, y)


def test_conflation_table_via_kor_encoding():
    from oracles import KOR_ENCODING

    ops = belnap_ops()
    for d, e, cd, ce, m, neg_m, j in KOR_ENCODING:
        assert (U["conf"](d), U["conf"](e)) == (cd, ce)
        assert ops["kand"](cd, ce) == m
        assert U["conf"](m) == neg_m == ops["kor"](d, e) == j


def test_involutions_and_fixed_points():
    for name, fixed in (("not", {BOT, TOP}), ("conf", {DENY, ALLOW})):
        op = U[name]
        assert all(op(op(x)) == x for x in FOUR)
        assert {x for x in FOUR if op(x) == x} == fixed
