import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ptacl4.interop import (
    ParseError,
    XacmlDecision,
    combine_kand,
    combine_kand_fold,
    emit_formula,
    emit_policy,
    emit_request,
    emit_table,
    from_xacml,
    parse_formula,
    parse_policy,
    parse_request,
    parse_request_inline,
    parse_table,
    to_xacml,
)
from ptacl4.lattice import ALLOW, BOT, DENY, FOUR, TOP
from ptacl4.nf_compiler import compile_table
from ptacl4.policy import Request, eval_policy, eval_policy_ind

from generators import policies, requests, tables
from oracles import WORKED_TABLE

X = XacmlDecision


def test_bijection():
    assert [to_xacml(d).value for d in FOUR] == ["NotApplicable", "Deny", "Permit", "Conflict"]
    assert all(from_xacml(to_xacml(d)) is d for d in FOUR)


@pytest.mark.parametrize(
    "children,expected",
    [
        ([X.PERMIT, X.CONFLICT], X.PERMIT),
        ([X.PERMIT, X.DENY], X.NOT_APPLICABLE),
        ([], X.CONFLICT),
        ([X.DENY, X.NOT_APPLICABLE, X.PERMIT], X.NOT_APPLICABLE),
        ([X.CONFLICT, X.CONFLICT], X.CONFLICT),
        ([X.DENY, X.CONFLICT, X.DENY], X.DENY),
    ],
)
def test_combine_kand_examples(children, expected):
    assert combine_kand(children) == expected
    assert combine_kand_fold(children) == expected


@given(st.lists(st.sampled_from(list(X)), max_size=12))
def test_combine_kand_long_lists(children):
    assert combine_kand(children) == combine_kand_fold(children)


def test_table_worked_example():
    t = parse_table(WORKED_TABLE)
    assert t.variables == ("p1", "p2", "p3")
    assert t.lookup((ALLOW, DENY, DENY)) is TOP
    assert emit_table(t) == WORKED_TABLE


def test_table_comments_and_blanks():
    text = "# header next\n\nx -> p\n  # skip\ntop -> 1\n"
    assert emit_table(parse_table(text)) == "x -> p\ntop -> 1\n"


def test_table_row_round_trips_bytes():
    text = "a b c -> p\nbot 0 0 -> 0\n"
    assert emit_table(parse_table(text)) == text


@pytest.mark.parametrize(
    "text,line,msg",
    [
        ("p1 p2 p3 -> p\n1 0 -> top\n", 2, "arity mismatch"),
        ("x -> p\n0 -> 1\n0 -> top\n", 3, "duplicate row"),
        ("x -> p\nmaybe -> 1\n", 2, "unknown value"),
        ("x -> p\n0 1\n", 2, "'->'"),
        ("", 1, "missing header"),
    ],
)
def test_table_errors(text, line, msg):
    with pytest.raises(ParseError, match=msg) as info:
        parse_table(text)
    assert info.value.line == line


def test_unknown_value_column():
    with pytest.raises(ParseError) as info:
        parse_table("x y -> p\n0 huh -> 1\n")
    assert (info.value.line, info.value.column) == (2, 3)


@settings(max_examples=100, deadline=None)
@given(tables())
def test_table_round_trip(t):
    text = emit_table(t)
    assert parse_table(text) == t
    assert emit_table(parse_table(text)) == text


def test_policy_examples():
    p = parse_policy("(op kand (atomic (target) 1) (atomic (target) 0))")
    assert eval_policy(p, Request.of()) is BOT
    u = parse_policy('(u "conf,cyc" (atomic (target) 0))')
    assert eval_policy(u, Request.of()) is ALLOW


def test_policy_error_at_end_of_input():
    with pytest.raises(ParseError, match="end of input") as info:
        parse_policy("(atomic")
    assert (info.value.line, info.value.column) == (1, 8)


@pytest.mark.parametrize(
    "text,msg",
    [
        ("(op xor (atomic (target) 1) (atomic (target) 0))", "unknown binary operator 'xor'"),
        ('(u "conf,nope" (atomic (target) 1))', "unknown unary operator 'nope'"),
        ("(atomic (target) top)", "0 or 1"),
        ("(frob)", "unknown policy form"),
        ("(atomic (target) 1) extra", "trailing"),
        ('(atomic (target (role "adm)) 1)', "unterminated"),
        ("(scope (target (a b)))", "takes 2"),
    ],
)
def test_policy_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_policy(text)


def test_policy_quoting_and_comments():
    text = '; leading comment\n(scope (target ("dept name" "r&d")) (var p1))'
    p = parse_policy(text)
    assert emit_policy(p) == '(scope (target ("dept name" "r&d")) (var p1))\n'


@settings(max_examples=300, deadline=None)
@given(policies(depth=5))
def test_policy_round_trip(p):
    text = emit_policy(p)
    assert parse_policy(text) == p
    assert emit_policy(parse_policy(text)) == text


def test_request_examples():
    q = parse_request("role=admin\ndept=eng")
    assert q == Request.of({"role": "admin", "dept": "eng"})
    e = parse_request("role=!")
    assert e.errors == {"role"}
    with pytest.raises(ParseError, match="duplicate"):
        parse_request("role=admin\nrole=user")
    with pytest.raises(ParseError, match="empty"):
        parse_request("=x")
    with pytest.raises(ParseError, match="name=value"):
        parse_request("justtext")


def test_request_with_error_gives_indeterminate_target():
    p = parse_policy("(atomic (target (role admin)) 1)")
    assert eval_policy_ind(p, parse_request("role=!")) == {BOT, ALLOW}


def test_inline_request():
    assert parse_request_inline("role=admin;dept=eng") == parse_request("role=admin\ndept=eng")
    assert parse_request_inline("") == Request.of()


@given(requests())
def test_request_round_trip(q):
    assert parse_request(emit_request(q)) == q


@settings(max_examples=60, deadline=None)
@given(tables(max_arity=2))
def test_formula_round_trip(t):
    f = compile_table(t)
    text = emit_formula(f)
    assert parse_formula(text) == f
    assert emit_formula(parse_formula(text)) == text


def test_formula_constants():
    assert emit_formula(parse_formula("(join (const top) (meet))")) == "(join (const top) (meet))\n"
