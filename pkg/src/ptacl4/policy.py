"""Policy trees over the four decisions and their two evaluation semantics.

``eval_policy`` is the standard semantics: a target that does not evaluate to
true (including an indeterminate one) makes its policy not applicable.
``eval_policy_ind`` returns the set of decisions that could have been reached
had every indeterminate target evaluated either way.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .algebra import OpTable, Word, compose, lookup, registry
from .lattice import ALLOW, BOT, DENY, FOUR, Decision
from .nf_compiler import Constant, Formula, Join, Meet, UnaryApply, Variable


class TargetValue(enum.Enum):
    TRUE = "1"
    FALSE = "0"
    UNKNOWN = "?"


@dataclass(frozen=True)
class Target:
    """Conjunction of attribute equality tests; the empty target is always true."""

    tests: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        names = [name for name, _ in self.tests]
        if any(not name for name in names):
            raise ValueError("attribute names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate attribute in target: {names}")

    @classmethod
    def of(cls, **tests: str) -> "Target":
        return cls(tuple(tests.items()))


TRUE = Target()


@dataclass(frozen=True)
class Request:
    """Attribute values for one access request; ``errors`` names attributes whose lookup failed."""

    values: tuple[tuple[str, str], ...] = ()
    errors: frozenset[str] = frozenset()

    @classmethod
    def of(cls, values: Mapping[str, str] | None = None, errors: Iterable[str] = ()) -> "Request":
        values = dict(values or {})
        errors = frozenset(errors)
        if any(not k for k in (*values, *errors)):
            raise ValueError("attribute names must be non-empty")
        if errors & values.keys():
            raise ValueError(f"attribute both valued and error-flagged: {sorted(errors & values.keys())}")
        return cls(tuple(sorted(values.items())), errors)

    def get(self, name: str) -> str | None:
        return dict(self.values).get(name)


def eval_target(t: Target, q: Request) -> TargetValue:
    values = dict(q.values)
    unknown = False
    mismatch = False
    for name, expected in t.tests:
        if name in q.errors or name not in values:
            unknown = True
        elif values[name] != expected:
            mismatch = True
    if unknown:
        return TargetValue.UNKNOWN
    return TargetValue.FALSE if mismatch else TargetValue.TRUE


@dataclass(frozen=True)
class Atomic:
    target: Target
    decision: Decision

    def __post_init__(self) -> None:
        if self.decision not in (DENY, ALLOW):
            raise ValueError("atomic policies return 0 or 1 only")


@dataclass(frozen=True)
class Scoped:
    target: Target
    child: "PolicyNode"


@dataclass(frozen=True)
class Unary:
    word: Word
    child: "PolicyNode"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "PolicyNode"
    right: "PolicyNode"


@dataclass(frozen=True)
class Var:
    """A named sub-policy, bound at evaluation time."""

    name: str


PolicyNode = Union[Atomic, Scoped, Unary, Binary, Var]
DecisionSet = frozenset


class _Context:
    def __init__(self, ops: Mapping[str, OpTable] | None, env: Mapping | None):
        self.ops = registry() if ops is None else ops
        self.env = env or {}
        self.words: dict[Word, OpTable] = {}

    def word(self, w: Word) -> OpTable:
        if w not in self.words:
            self.words[w] = compose(w, self.ops, FOUR)
        return self.words[w]

    def binary(self, name: str) -> OpTable:
        op = lookup(self.ops, name)
        if op.arity != 2:
            raise ValueError(f"{name} is not a binary operator")
        return op

    def bound(self, name: str):
        try:
            return self.env[name]
        except KeyError:
            raise KeyError(f"unbound sub-policy {name!r}") from None


def eval_policy(
    p: PolicyNode,
    q: Request,
    ops: Mapping[str, OpTable] | None = None,
    env: Mapping[str, Decision | PolicyNode] | None = None,
) -> Decision:
    ctx = _Context(ops, env)

    def ev(node: PolicyNode) -> Decision:
        if isinstance(node, Atomic):
            return node.decision if eval_target(node.target, q) is TargetValue.TRUE else BOT
        if isinstance(node, Scoped):
            return ev(node.child) if eval_target(node.target, q) is TargetValue.TRUE else BOT
        if isinstance(node, Unary):
            return ctx.word(node.word)(ev(node.child))
        if isinstance(node, Binary):
            op = ctx.binary(node.op)
            return op(ev(node.left), ev(node.right))
        if isinstance(node, Var):
            bound = ctx.bound(node.name)
            return bound if isinstance(bound, Decision) else ev(bound)
        raise TypeError(f"not a policy node: {node!r}")

    return ev(p)


def eval_policy_ind(
    p: PolicyNode,
    q: Request,
    ops: Mapping[str, OpTable] | None = None,
    env: Mapping[str, Decision | PolicyNode | frozenset] | None = None,
) -> frozenset[Decision]:
    ctx = _Context(ops, env)

    def scoped(target: Target, inner) -> frozenset[Decision]:
        tv = eval_target(target, q)
        if tv is TargetValue.TRUE:
            return inner()
        if tv is TargetValue.FALSE:
            return frozenset({BOT})
        return frozenset({BOT}) | inner()

    def ev(node: PolicyNode) -> frozenset[Decision]:
        if isinstance(node, Atomic):
            return scoped(node.target, lambda: frozenset({node.decision}))
        if isinstance(node, Scoped):
            return scoped(node.target, lambda: ev(node.child))
        if isinstance(node, Unary):
            u = ctx.word(node.word)
            return frozenset(u(d) for d in ev(node.child))
        if isinstance(node, Binary):
            op = ctx.binary(node.op)
            left, right = ev(node.left), ev(node.right)
            return frozenset(op(a, b) for a, b in itertools.product(left, right))
        if isinstance(node, Var):
            bound = ctx.bound(node.name)
            if isinstance(bound, Decision):
                return frozenset({bound})
            if isinstance(bound, frozenset):
                return bound
            return ev(bound)
        raise TypeError(f"not a policy node: {node!r}")

    return ev(p)


STRATEGIES = ("deny-by-default", "allow-by-default", "safe")


def resolve(s: frozenset[Decision] | Decision, strategy: str) -> Decision:
    """Reduce a decision (set) to a conclusive 0 or 1 for enforcement.

    deny-by-default keeps a lone conclusive decision and otherwise denies;
    allow-by-default is its dual; safe allows only on exactly ``{1}``.
    """
    if isinstance(s, Decision):
        s = frozenset({s})
    if strategy == "deny-by-default":
        return ALLOW if s == {ALLOW} else DENY
    if strategy == "allow-by-default":
        return DENY if s == {DENY} else ALLOW
    if strategy == "safe":
        return ALLOW if s == {ALLOW} else DENY
    raise ValueError(f"unknown strategy {strategy!r} (expected one of {', '.join(STRATEGIES)})")


def format_set(s: Iterable[Decision]) -> str:
    """``{bot,1}`` with members in canonical order."""
    members = sorted(s, key=FOUR.index)
    return "{" + ",".join(d.token for d in members) + "}"


# normal forms as policies ----------------------------------------------------

def bottom_policy() -> PolicyNode:
    """A policy that always evaluates to bot: ``1 kand 0``."""
    return Binary("kand", Atomic(TRUE, ALLOW), Atomic(TRUE, DENY))


def _fold(op: str, nodes: list[PolicyNode]) -> PolicyNode:
    acc = nodes[0]
    for n in nodes[1:]:
        acc = Binary(op, acc, n)
    return acc


def _conf(node: PolicyNode) -> PolicyNode:
    # conf is an involution: cancel it against a leading conf
    if isinstance(node, Unary) and node.word[:1] == ("conf",):
        return Unary(node.word[1:], node.child) if len(node.word) > 1 else node.child
    return Unary(("conf",), node)


def _kor(left: PolicyNode, right: PolicyNode, expand: bool) -> PolicyNode:
    if not expand:
        return Binary("kor", left, right)
    return Unary(("conf",), Binary("kand", _conf(left), _conf(right)))


def formula_to_policy(f: Formula, names: list[str] | tuple[str, ...], expand_join: bool = False) -> PolicyNode:
    """Turn a formula over the knowledge lattice into a policy over named sub-policies.

    Meets become ``kand``; joins become ``kor`` or, with ``expand_join``,
    ``conf(kand(conf p, conf q))`` so only conf, cyc and kand appear.
    """
    if isinstance(f, Variable):
        return Var(names[f.index])
    if isinstance(f, UnaryApply):
        return Unary(f.word, formula_to_policy(f.child, names, expand_join))
    if isinstance(f, Constant):
        if f.value in (DENY, ALLOW):
            return Atomic(TRUE, f.value)
        if f.value == BOT:
            return bottom_policy()
        return Unary(("conf",), bottom_policy())
    if isinstance(f, Meet):
        if not f.children:
            return Unary(("conf",), bottom_policy())
        return _fold("kand", [formula_to_policy(c, names, expand_join) for c in f.children])
    if isinstance(f, Join):
        if not f.children:
            return bottom_policy()
        parts = [formula_to_policy(c, names, expand_join) for c in f.children]
        acc = parts[0]
        for part in parts[1:]:
            acc = _kor(acc, part, expand_join)
        return acc
    raise TypeError(f"not a formula node: {f!r}")


def policy_vars(p: PolicyNode) -> list[str]:
    """Names of sub-policy references, in first-occurrence order."""
    out: dict[str, None] = {}

    def walk(node: PolicyNode) -> None:
        if isinstance(node, Var):
            out.setdefault(node.name)
        elif isinstance(node, (Scoped, Unary)):
            walk(node.child)
        elif isinstance(node, Binary):
            walk(node.left)
            walk(node.right)

    walk(p)
    return list(out)
