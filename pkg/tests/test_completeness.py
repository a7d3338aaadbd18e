import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ptacl4.algebra import OpTable, belnap_ops, jobe_ops, new_unary_ops, registry
from ptacl4.completeness import (
    all_unary_functions,
    check_canonical_completeness,
    check_canonical_suitability,
    check_functional_completeness,
    flip_word,
    normal_form_unary_space,
    selection_op,
    totally_ordered_generators,
    unary_closure,
    unary_selection_ops,
)
from ptacl4.lattice import ALLOW, BOT, DENY, FOUR, TOP, chain_lattice, knowledge_lattice

K = knowledge_lattice()
REG = registry()


def pick(*names):
    return {n: REG[n] for n in names}


def test_selection_operator_semantics():
    s = selection_op(DENY, TOP, K)
    assert s.unary_table() == (BOT, TOP, BOT, BOT)
    assert s.label == "σ_0^⊤"
    pair = selection_op((BOT, ALLOW), DENY, K)
    assert pair(BOT, ALLOW) is DENY and pair(ALLOW, BOT) is BOT
    with pytest.raises(ValueError):
        selection_op("x", TOP, K)


def test_constant_bottom_listed_once():
    sels = unary_selection_ops(K)
    assert len(sels) == 13
    assert sum(s.output == BOT for s in sels) == 1


def test_unary_closure_sizes():
    assert len(unary_closure(pick("conf", "cyc"))) == 24
    assert len(unary_closure(pick("not"))) == 2
    assert len(unary_closure(pick("t0", "t1", "ttop"))) == 24


def test_closure_words_reproduce_functions():
    space = unary_closure(pick("conf", "cyc"))
    from ptacl4.algebra import compose

    for f, word in space.words.items():
        assert compose(word, REG, FOUR).table == f


def test_negation_report():
    r = check_canonical_completeness(pick("not"), K)
    assert not r.complete
    assert r.expressible == 4
    assert set(r.invariants) == {(BOT, BOT), (TOP, TOP)}
    labels = [m.label for m in r.missing]
    assert "σ_⊥^0" in labels and "σ_*^⊥" in labels
    d = r.to_dict()
    assert d["complete"] is False and d["capacity"] == 256
    assert str(r).startswith("canonically complete: NO (missing σ_*^⊥, σ_⊥^0")


def test_canonical_completeness_ignores_binary_ops():
    with_kand = check_canonical_completeness(pick("not", "kand"), K)
    assert with_kand.operators == ("not",)


def test_conf_kand_fixes_conclusive_decisions():
    r = check_functional_completeness(pick("conf", "kand"), K)
    assert not r.complete
    assert set(r.invariants) == {(DENY, DENY), (ALLOW, ALLOW)}


@pytest.mark.parametrize("names", [("t0", "t1", "ttop", "kand"), ("ttop", "cyc", "kand"), ("conf", "cyc", "kand")])
def test_minimal_sets_complete(names):
    ops = pick(*names)
    assert check_functional_completeness(ops, K).complete
    assert check_canonical_completeness(ops, K).complete
    assert check_canonical_suitability(ops, K).suitable


def test_belnap_with_constants_is_functionally_complete():
    assert check_functional_completeness(belnap_ops(), K).complete


def test_belnap_without_constants_keeps_top_fixed():
    # every operator maps (top, top) to top; imp(bot, bot) = 1 frees bot
    r = check_functional_completeness(belnap_ops(include_constants=False), K)
    assert not r.complete
    assert r.invariants == ((TOP, TOP),)


def test_suitability_finds_join_via_conflation():
    r = check_canonical_suitability(pick("conf", "kand"), K)
    assert r.suitable
    assert str(r.meet) == "kand(x, y)"
    assert str(r.join) == "conf(kand(conf(x), conf(y)))"
    for x, y in itertools.product(FOUR, repeat=2):
        assert r.join.evaluate(REG, (x, y)) == K.join(x, y)


def test_kand_alone_not_suitable_by_saturation():
    r = check_canonical_suitability(pick("kand"), K)
    assert not r.suitable and r.saturated
    assert "join" in r.reason


def test_jobe_complete():
    lat = chain_lattice(3, start=0)
    ops = jobe_ops()
    assert check_functional_completeness(ops, lat).expressible == 27
    assert check_canonical_completeness(ops, lat).complete


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_flip_word_reverses_chain(m):
    ops = totally_ordered_generators(m)
    assert ops["flip"].table == tuple(range(m, 0, -1))
    assert flip_word(m) == flip_word(m, ops)


def test_min_without_dagger_is_incomplete():
    ops = totally_ordered_generators(4)
    r = check_canonical_completeness({"cyc": ops["cyc"]}, chain_lattice(4))
    assert not r.complete


unary_fns = st.tuples(*[st.sampled_from(FOUR)] * 4)


@settings(max_examples=60, deadline=None)
@given(st.lists(unary_fns, min_size=1, max_size=3))
def test_normal_form_space_closed_under_meet_and_join(fns):
    ops = {f"f{i}": OpTable(f"f{i}", 1, FOUR, f) for i, f in enumerate(fns)}
    space = normal_form_unary_space(ops, K)
    members = list(space.functions)
    for f, g in itertools.product(members[:12], repeat=2):
        assert tuple(K.meet(a, b) for a, b in zip(f, g)) in space
        assert tuple(K.join(a, b) for a, b in zip(f, g)) in space
    # monotone growth: more generators never shrink the space
    bigger = normal_form_unary_space({**ops, "cyc": REG["cyc"]}, K)
    assert space.functions <= bigger.functions


def test_all_unary_functions_count():
    assert sum(1 for _ in all_unary_functions(FOUR)) == 256


def test_totally_ordered_generator_examples():
    ops4 = totally_ordered_generators(4)
    assert ops4["dagger"](1) == 4 and ops4["dagger"](2) == 2
    flip = ops4["flip"]
    assert flip.table == (4, 3, 2, 1)
    for x, y in itertools.product(range(1, 5), repeat=2):
        assert flip(ops4["tmeet"](flip(x), flip(y))) == max(x, y)
    assert totally_ordered_generators(3)["cyc"](3) == 1
    with pytest.raises(ValueError):
        totally_ordered_generators(1)


def test_selection_invariants_everywhere():
    for lat in (K, chain_lattice(4)):
        for a, j in itertools.product(lat.elements, repeat=2):
            s = selection_op(a, j, lat)
            for x in lat.elements:
                expected = j if x == a else lat.bottom
                assert s(x) == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_decomposition_law(n):
    for anchor in itertools.product(FOUR, repeat=n):
        for j in FOUR:
            whole = selection_op(anchor, j, K)
            parts = [selection_op(a, j, K) for a in anchor]
            for xs in itertools.product(FOUR, repeat=n):
                assert whole(*xs) == K.meet_all(p(x) for p, x in zip(parts, xs))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.sampled_from(FOUR), min_size=4 ** n, max_size=4 ** n))))
def test_reconstruction_identity(case):
    n, images = case
    points = list(itertools.product(FOUR, repeat=n))
    f = dict(zip(points, images))
    sels = [selection_op(a, f[a], K) for a in points]
    for xs in points:
        assert K.join_all(s(*xs) for s in sels) == f[xs]
