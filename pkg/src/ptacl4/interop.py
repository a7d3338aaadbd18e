"""Text formats for tables, policies, requests and formulas, plus the XACML adapter.

All formats are line-oriented UTF-8 with the decision tokens ``bot``, ``0``,
``1`` and ``top``.

Decision table::

    p1 p2 p3 -> p
    bot 0 0 -> 0
    1 0 0 -> top

Policy (prefix s-expression)::

    (op kand (atomic (target (role admin)) 1) (u "conf,cyc" (var p2)))

Request: one ``name=value`` per line, ``name=!`` marks a failed lookup.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import reduce
from typing import Hashable, Iterable, Mapping, Sequence

from .algebra import OpTable, belnap_ops, registry
from .lattice import ALLOW, BOT, DENY, TOP, Decision, FiniteLattice, knowledge_lattice
from .nf_compiler import (
    Constant,
    DecisionTable,
    Formula,
    InvalidTable,
    Join,
    Meet,
    UnaryApply,
    Variable,
    decision_table,
)
from .policy import Atomic, Binary, PolicyNode, Request, Scoped, Target, Unary, Var


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


# XACML-style decisions -------------------------------------------------------

class XacmlDecision(enum.Enum):
    PERMIT = "Permit"
    DENY = "Deny"
    CONFLICT = "Conflict"
    NOT_APPLICABLE = "NotApplicable"


_TO_XACML = {
    ALLOW: XacmlDecision.PERMIT,
    DENY: XacmlDecision.DENY,
    TOP: XacmlDecision.CONFLICT,
    BOT: XacmlDecision.NOT_APPLICABLE,
}
_FROM_XACML = {v: k for k, v in _TO_XACML.items()}


def to_xacml(d: Decision) -> XacmlDecision:
    return _TO_XACML[d]


def from_xacml(x: XacmlDecision) -> Decision:
    return _FROM_XACML[x]


def combine_kand(children: Iterable[XacmlDecision]) -> XacmlDecision:
    """Combining algorithm for ``kand``, transcribed from its XACML pseudocode."""
    at_least_one_deny = False
    at_least_one_permit = False
    for decision in children:
        if decision == XacmlDecision.NOT_APPLICABLE:
            return XacmlDecision.NOT_APPLICABLE
        if decision == XacmlDecision.PERMIT:
            at_least_one_permit = True
            continue
        if decision == XacmlDecision.DENY:
            at_least_one_deny = True
            continue
        if decision == XacmlDecision.CONFLICT:
            continue
    if at_least_one_deny and at_least_one_permit:
        return XacmlDecision.NOT_APPLICABLE
    if at_least_one_deny:
        return XacmlDecision.DENY
    if at_least_one_permit:
        return XacmlDecision.PERMIT
    return XacmlDecision.CONFLICT


def combine_kand_fold(children: Iterable[XacmlDecision]) -> XacmlDecision:
    """Same result as :func:`combine_kand`, as a left fold of ``kand`` from ``top``."""
    kand = belnap_ops(include_constants=False)["kand"]
    return to_xacml(reduce(kand, (from_xacml(c) for c in children), TOP))


# decision tables -------------------------------------------------------------

def _value_token(v: Hashable) -> str:
    return v.token if isinstance(v, Decision) else str(v)


def _parse_value(tok: str, lattice: FiniteLattice, line: int, col: int) -> Hashable:
    for v in lattice.elements:
        if _value_token(v) == tok:
            return v
    raise ParseError(f"unknown value {tok!r}", line, col)


def _fields(line: str) -> list[tuple[str, int]]:
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _split_arrow(fields, lineno: int, text_line: str):
    arrows = [i for i, (tok, _) in enumerate(fields) if tok == "->"]
    if len(arrows) != 1:
        raise ParseError("expected exactly one '->'", lineno, 1)
    k = arrows[0]
    lhs, rhs = fields[:k], fields[k + 1:]
    if len(rhs) != 1:
        col = rhs[1][1] if len(rhs) > 1 else len(text_line) + 1
        raise ParseError("expected exactly one output after '->'", lineno, col)
    return lhs, rhs[0]


def parse_table(text: str, lattice: FiniteLattice | None = None) -> DecisionTable:
    lattice = lattice or knowledge_lattice()
    header = None
    rows = []
    seen: dict[tuple, int] = {}
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = _fields(line)
        lhs, rhs = _split_arrow(fields, lineno, line)
        if header is None:
            if not lhs:
                raise ParseError("header needs at least one input column", lineno, 1)
            names = [t for t, _ in lhs]
            if len(set(names)) != len(names):
                raise ParseError("duplicate column name", lineno, 1)
            header = (names, rhs[0])
            continue
        if len(lhs) != len(header[0]):
            raise ParseError(
                f"arity mismatch: row has {len(lhs)} inputs, header has {len(header[0])}", lineno, 1
            )
        inputs = tuple(_parse_value(t, lattice, lineno, c) for t, c in lhs)
        out = _parse_value(rhs[0], lattice, lineno, rhs[1])
        if inputs in seen:
            raise ParseError(f"duplicate row (first given on line {seen[inputs]})", lineno, 1)
        seen[inputs] = lineno
        rows.append((inputs, out))
    if header is None:
        raise ParseError("missing header line", 1, 1)
    try:
        return decision_table(header[0], rows, lattice, header[1])
    except InvalidTable as exc:
        raise ParseError(str(exc), 1, 1) from None


def emit_table(table: DecisionTable) -> str:
    lines = [" ".join(table.variables) + " -> " + table.output]
    for inputs, out in table.rows:
        lines.append(" ".join(_value_token(v) for v in inputs) + " -> " + _value_token(out))
    return "\n".join(lines) + "\n"


# s-expressions ---------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    text: str
    quoted: bool
    line: int
    column: int


@dataclass(frozen=True)
class SList:
    items: tuple
    line: int
    column: int


_BARE = re.compile(r"[A-Za-z0-9_.:@/+*-]+\Z")


def _tokenize(text: str):
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            yield ch, None, line, col
            i, col = i + 1, col + 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i, col = i + 1, col + 1
            buf = []
            while True:
                if i >= n:
                    raise ParseError("unterminated string", start_line, start_col)
                c = text[i]
                if c == "\\" and i + 1 < n:
                    buf.append(text[i + 1])
                    i, col = i + 2, col + 2
                    continue
                if c == '"':
                    i, col = i + 1, col + 1
                    break
                if c == "\n":
                    raise ParseError("newline inside string", line, col)
                buf.append(c)
                i, col = i + 1, col + 1
            yield "str", "".join(buf), start_line, start_col
            continue
        start = i
        start_col = col
        while i < n and not text[i].isspace() and text[i] not in '()";':
            i, col = i + 1, col + 1
        yield "atom", text[start:i], line, start_col


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1


def read_sexpr(text: str):
    """Parse exactly one s-expression."""
    tokens = list(_tokenize(text))
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input", *_end_position(text))
        kind, val, line, col = tokens[pos]
        pos += 1
        if kind == "(":
            items = []
            while True:
                if pos >= len(tokens):
                    raise ParseError("unexpected end of input: missing ')'", *_end_position(text))
                if tokens[pos][0] == ")":
                    pos += 1
                    return SList(tuple(items), line, col)
                items.append(parse())
        if kind == ")":
            raise ParseError("unexpected ')'", line, col)
        return Atom(val, kind == "str", line, col)

    node = parse()
    if pos != len(tokens):
        _, _, line, col = tokens[pos]
        raise ParseError("trailing input after expression", line, col)
    return node


def _quote(s: str) -> str:
    if _BARE.match(s):
        return s
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _head(node, what: str) -> str:
    if not isinstance(node, SList) or not node.items or not isinstance(node.items[0], Atom):
        line, col = node.line, node.column
        raise ParseError(f"expected ({what} ...)", line, col)
    return node.items[0].text


def _atom(node, what: str) -> Atom:
    if not isinstance(node, Atom):
        raise ParseError(f"expected {what}", node.line, node.column)
    return node


def _arity(node: SList, n: int, form: str) -> None:
    if len(node.items) != n + 1:
        raise ParseError(f"({form} ...) takes {n} argument(s), got {len(node.items) - 1}", node.line, node.column)


# policies --------------------------------------------------------------------

def _parse_target(node) -> Target:
    if _head(node, "target") != "target":
        raise ParseError("expected (target ...)", node.line, node.column)
    tests = []
    for t in node.items[1:]:
        if not isinstance(t, SList) or len(t.items) != 2:
            raise ParseError("expected (attribute value)", t.line, t.column)
        k, v = (_atom(x, "attribute name or value") for x in t.items)
        tests.append((k.text, v.text))
    try:
        return Target(tuple(tests))
    except ValueError as exc:
        raise ParseError(str(exc), node.line, node.column) from None


def _parse_word(a: Atom, ops: Mapping[str, OpTable]) -> tuple[str, ...]:
    word = tuple(w.strip() for w in a.text.split(",") if w.strip())
    for w in word:
        if w not in ops or ops[w].arity != 1:
            raise ParseError(f"unknown unary operator {w!r}", a.line, a.column)
    return word


def parse_policy(text: str, ops: Mapping[str, OpTable] | None = None) -> PolicyNode:
    ops = registry() if ops is None else ops

    def build(node) -> PolicyNode:
        head = _head(node, "atomic|scope|u|op|var")
        if head == "atomic":
            _arity(node, 2, "atomic")
            d = _atom(node.items[2], "decision")
            if d.text not in ("0", "1"):
                raise ParseError(f"atomic decision must be 0 or 1, got {d.text!r}", d.line, d.column)
            return Atomic(_parse_target(node.items[1]), Decision.from_token(d.text))
        if head == "scope":
            _arity(node, 2, "scope")
            return Scoped(_parse_target(node.items[1]), build(node.items[2]))
        if head == "u":
            _arity(node, 2, "u")
            return Unary(_parse_word(_atom(node.items[1], "word"), ops), build(node.items[2]))
        if head == "op":
            _arity(node, 3, "op")
            name = _atom(node.items[1], "operator name")
            if name.text not in ops or ops[name.text].arity != 2:
                raise ParseError(f"unknown binary operator {name.text!r}", name.line, name.column)
            return Binary(name.text, build(node.items[2]), build(node.items[3]))
        if head == "var":
            _arity(node, 1, "var")
            return Var(_atom(node.items[1], "sub-policy name").text)
        raise ParseError(f"unknown policy form {head!r}", node.line, node.column)

    return build(read_sexpr(text))


def _emit_target(t: Target) -> str:
    return "(target" + "".join(f" ({_quote(k)} {_quote(v)})" for k, v in t.tests) + ")"


def emit_policy(p: PolicyNode) -> str:
    def em(node: PolicyNode) -> str:
        if isinstance(node, Atomic):
            return f"(atomic {_emit_target(node.target)} {node.decision.token})"
        if isinstance(node, Scoped):
            return f"(scope {_emit_target(node.target)} {em(node.child)})"
        if isinstance(node, Unary):
            return f'(u "{",".join(node.word)}" {em(node.child)})'
        if isinstance(node, Binary):
            return f"(op {node.op} {em(node.left)} {em(node.right)})"
        if isinstance(node, Var):
            return f"(var {_quote(node.name)})"
        raise TypeError(f"not a policy node: {node!r}")

    return em(p) + "\n"


# requests --------------------------------------------------------------------

def _request_pairs(pairs: Iterable[tuple[str, int, int]]) -> Request:
    values: dict[str, str] = {}
    errors: set[str] = set()
    for item, line, col in pairs:
        if "=" not in item:
            raise ParseError(f"expected name=value, got {item!r}", line, col)
        name, value = item.split("=", 1)
        name = name.strip()
        if not name:
            raise ParseError("empty attribute name", line, col)
        if name in values or name in errors:
            raise ParseError(f"duplicate attribute {name!r}", line, col)
        if value == "!":
            errors.add(name)
        else:
            values[name] = value
    return Request.of(values, errors)


def parse_request(text: str) -> Request:
    pairs = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        pairs.append((line.strip(), lineno, 1))
    return _request_pairs(pairs)


def parse_request_inline(text: str) -> Request:
    """``attr=val;attr=val`` as used by the serve protocol."""
    pairs = []
    col = 1
    for part in text.split(";"):
        if part.strip():
            pairs.append((part.strip(), 1, col))
        col += len(part) + 1
    return _request_pairs(pairs)


def emit_request(q: Request) -> str:
    entries = [(k, v) for k, v in q.values] + [(k, "!") for k in q.errors]
    return "".join(f"{k}={v}\n" for k, v in sorted(entries))


# formulas --------------------------------------------------------------------

def emit_formula(f: Formula) -> str:
    def em(node: Formula) -> str:
        if isinstance(node, Variable):
            return f"(var {node.index})"
        if isinstance(node, Constant):
            return f"(const {_value_token(node.value)})"
        if isinstance(node, UnaryApply):
            return f'(u "{",".join(node.word)}" {em(node.child)})'
        if isinstance(node, (Meet, Join)):
            head = "meet" if isinstance(node, Meet) else "join"
            return "(" + " ".join([head] + [em(c) for c in node.children]) + ")"
        raise TypeError(f"not a formula node: {node!r}")

    return em(f) + "\n"


def parse_formula(text: str, lattice: FiniteLattice | None = None) -> Formula:
    lattice = lattice or knowledge_lattice()

    def build(node) -> Formula:
        head = _head(node, "var|const|u|meet|join")
        if head == "var":
            _arity(node, 1, "var")
            a = _atom(node.items[1], "variable index")
            if not a.text.isdigit():
                raise ParseError(f"variable index must be a number, got {a.text!r}", a.line, a.column)
            return Variable(int(a.text))
        if head == "const":
            _arity(node, 1, "const")
            a = _atom(node.items[1], "value")
            return Constant(_parse_value(a.text, lattice, a.line, a.column))
        if head == "u":
            _arity(node, 2, "u")
            a = _atom(node.items[1], "word")
            word = tuple(w for w in a.text.split(",") if w)
            return UnaryApply(word, build(node.items[2]))
        if head in ("meet", "join"):
            kids = tuple(build(c) for c in node.items[1:])
            return Meet(kids) if head == "meet" else Join(kids)
        raise ParseError(f"unknown formula form {head!r}", node.line, node.column)

    return build(read_sexpr(text))


def format_decisions(values: Sequence[Hashable]) -> str:
    return ",".join(_value_token(v) for v in values)
