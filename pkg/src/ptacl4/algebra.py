"""Operator tables, permutations and generator-word synthesis.

Words are sequences of unary operator names applied right to left: the word
``("conf", "cyc")`` denotes ``conf(cyc(x))``, i.e. ``cyc`` is applied first.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .lattice import ALLOW, BOT, DENY, FOUR, TOP, Decision

Word = tuple[str, ...]


@dataclass(frozen=True)
class OpTable:
    """An operator of arity 0, 1 or 2 stored as an explicit table.

    ``table`` is a single element (arity 0), a tuple of outputs in domain
    order (arity 1) or a tuple of rows (arity 2, ``table[i][j]`` is the
    value at ``(domain[i], domain[j])``).
    """

    name: str
    arity: int
    domain: tuple[Hashable, ...]
    table: object

    def __post_init__(self) -> None:
        dom = set(self.domain)
        n = len(self.domain)
        if self.arity == 0:
            outs = [self.table]
        elif self.arity == 1:
            if len(self.table) != n:
                raise ValueError(f"{self.name}: unary table must have {n} entries")
            outs = list(self.table)
        elif self.arity == 2:
            if len(self.table) != n or any(len(r) != n for r in self.table):
                raise ValueError(f"{self.name}: binary table must be {n}x{n}")
            outs = [v for r in self.table for v in r]
        else:
            raise ValueError(f"{self.name}: arity must be 0, 1 or 2")
        bad = [v for v in outs if v not in dom]
        if bad:
            raise ValueError(f"{self.name}: output {bad[0]!r} outside the domain")

    @cached_property
    def _pos(self) -> dict:
        return {e: i for i, e in enumerate(self.domain)}

    @cached_property
    def codes(self) -> np.ndarray:
        """Output positions as an integer array of shape ``(n,) * arity``."""
        pos = self._pos
        if self.arity == 0:
            return np.array(pos[self.table], dtype=np.int16)
        if self.arity == 1:
            return np.array([pos[v] for v in self.table], dtype=np.int16)
        return np.array([[pos[v] for v in row] for row in self.table], dtype=np.int16)

    def __call__(self, *args: Hashable) -> Hashable:
        if len(args) != self.arity:
            raise TypeError(f"{self.name} takes {self.arity} argument(s), got {len(args)}")
        try:
            idx = [self._pos[a] for a in args]
        except KeyError as exc:
            raise ValueError(f"{exc.args[0]!r} is outside the domain of {self.name}") from None
        if self.arity == 0:
            return self.table
        if self.arity == 1:
            return self.table[idx[0]]
        return self.table[idx[0]][idx[1]]

    @property
    def is_permutation(self) -> bool:
        return self.arity == 1 and len(set(self.table)) == len(self.domain)

    def renamed(self, name: str) -> "OpTable":
        return OpTable(name, self.arity, self.domain, self.table)

    @classmethod
    def unary(cls, name: str, domain: Sequence[Hashable], mapping: Mapping) -> "OpTable":
        domain = tuple(domain)
        return cls(name, 1, domain, tuple(mapping[x] for x in domain))

    @classmethod
    def binary(cls, name: str, domain: Sequence[Hashable], fn) -> "OpTable":
        domain = tuple(domain)
        return cls(name, 2, domain, tuple(tuple(fn(x, y) for y in domain) for x in domain))

    @classmethod
    def from_grid(
        cls,
        name: str,
        domain: Sequence[Hashable],
        header: Sequence[Hashable],
        rows: Mapping[Hashable, Sequence[Hashable]],
    ) -> "OpTable":
        """Build a binary table from a grid printed in some other element order."""
        grid = {(r, c): v for r, vals in rows.items() for c, v in zip(header, vals)}
        return cls.binary(name, domain, lambda x, y: grid[(x, y)])


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``domain``; ``images[i]`` is the image of ``domain[i]``."""

    domain: tuple[Hashable, ...]
    images: tuple[Hashable, ...]

    def __post_init__(self) -> None:
        if len(self.images) != len(self.domain) or set(self.images) != set(self.domain):
            raise ValueError(f"not a bijection on {self.domain!r}: {self.images!r}")

    @cached_property
    def _map(self) -> dict:
        return dict(zip(self.domain, self.images))

    def __call__(self, x: Hashable) -> Hashable:
        return self._map[x]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self`` after ``other``: ``(self ∘ other)(x) = self(other(x))``."""
        if other.domain != self.domain:
            raise ValueError("cannot compose permutations on different domains")
        return Permutation(self.domain, tuple(self(other(x)) for x in self.domain))

    __matmul__ = compose

    def inverse(self) -> "Permutation":
        inv = {v: k for k, v in self._map.items()}
        return Permutation(self.domain, tuple(inv[x] for x in self.domain))

    @property
    def is_identity(self) -> bool:
        return self.images == self.domain

    @property
    def order(self) -> int:
        p, k = self, 1
        while not p.is_identity:
            p, k = self.compose(p), k + 1
        return k

    def cycles(self) -> list[tuple[Hashable, ...]]:
        seen: set = set()
        out = []
        for x in self.domain:
            if x in seen or self(x) == x:
                continue
            cyc = [x]
            seen.add(x)
            y = self(x)
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self(y)
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(v) for v in c) + ")" for c in cyc)

    def as_op(self, name: str) -> OpTable:
        return OpTable(name, 1, self.domain, self.images)

    @classmethod
    def identity(cls, domain: Sequence[Hashable]) -> "Permutation":
        domain = tuple(domain)
        return cls(domain, domain)

    @classmethod
    def from_cycles(cls, domain: Sequence[Hashable], *cycles: Sequence[Hashable]) -> "Permutation":
        """Product of disjoint cycles, e.g. ``from_cycles(FOUR, (BOT, DENY))``."""
        domain = tuple(domain)
        mapping = {x: x for x in domain}
        used: set = set()
        for cyc in cycles:
            if used & set(cyc) or len(set(cyc)) != len(cyc):
                raise ValueError("cycles must be disjoint and without repeats")
            used |= set(cyc)
            for a, b in zip(cyc, cyc[1:] + tuple(cyc[:1])):
                if a not in mapping:
                    raise ValueError(f"{a!r} is outside the domain")
                mapping[a] = b
        return cls(domain, tuple(mapping[x] for x in domain))

    @classmethod
    def from_op(cls, op: OpTable) -> "Permutation":
        if op.arity != 1:
            raise ValueError(f"{op.name} is not unary")
        return cls(op.domain, tuple(op.table))


# Operator tables.  Grids are transcribed in the order they are usually
# printed and re-indexed to the canonical element order (BOT, DENY, ALLOW, TOP).

_T_ORDER = (DENY, BOT, TOP, ALLOW)
_K_ORDER = (BOT, DENY, ALLOW, TOP)


def _not() -> OpTable:
    return OpTable.unary("not", FOUR, {DENY: ALLOW, BOT: BOT, TOP: TOP, ALLOW: DENY})


def belnap_ops(include_constants: bool = True) -> dict[str, OpTable]:
    """Negation, the truth and knowledge meets/joins, implication and constants."""
    ops = {
        "not": _not(),
        "tand": OpTable.from_grid("tand", FOUR, _T_ORDER, {
            DENY:  (DENY, DENY, DENY, DENY),
            BOT:   (DENY, BOT, DENY, BOT),
            TOP:   (DENY, DENY, TOP, TOP),
            ALLOW: (DENY, BOT, TOP, ALLOW),
        }),
        "tor": OpTable.from_grid("tor", FOUR, _T_ORDER, {
            DENY:  (DENY, BOT, TOP, ALLOW),
            BOT:   (BOT, BOT, ALLOW, ALLOW),
            TOP:   (TOP, ALLOW, TOP, ALLOW),
            ALLOW: (ALLOW, ALLOW, ALLOW, ALLOW),
        }),
        "kand": OpTable.from_grid("kand", FOUR, _K_ORDER, {
            BOT:   (BOT, BOT, BOT, BOT),
            DENY:  (BOT, DENY, BOT, DENY),
            ALLOW: (BOT, BOT, ALLOW, ALLOW),
            TOP:   (BOT, DENY, ALLOW, TOP),
        }),
        "kor": OpTable.from_grid("kor", FOUR, _K_ORDER, {
            BOT:   (BOT, DENY, ALLOW, TOP),
            DENY:  (DENY, DENY, TOP, TOP),
            ALLOW: (ALLOW, TOP, ALLOW, TOP),
            TOP:   (TOP, TOP, TOP, TOP),
        }),
        "imp": OpTable.from_grid("imp", FOUR, _T_ORDER, {
            DENY:  (ALLOW, ALLOW, ALLOW, ALLOW),
            BOT:   (ALLOW, ALLOW, ALLOW, ALLOW),
            TOP:   (DENY, BOT, TOP, ALLOW),
            ALLOW: (DENY, BOT, TOP, ALLOW),
        }),
    }
    if include_constants:
        for d in FOUR:
            ops[f"c_{d.token}"] = OpTable(f"c_{d.token}", 0, FOUR, d)
    return ops


def new_unary_ops() -> dict[str, OpTable]:
    """The transpositions swapping BOT with each other value, the 4-cycle, and negation.

    ``ttop`` and ``conf`` (conflation) are the same table under two names.
    """
    def tr(name: str, a: Decision, b: Decision) -> OpTable:
        return Permutation.from_cycles(FOUR, (a, b)).as_op(name)

    return {
        "t0": tr("t0", BOT, DENY),
        "t1": tr("t1", BOT, ALLOW),
        "ttop": tr("ttop", BOT, TOP),
        "conf": tr("conf", BOT, TOP),
        "cyc": Permutation.from_cycles(FOUR, (BOT, DENY, ALLOW, TOP)).as_op("cyc"),
        "not": _not(),
    }


def access_ops() -> dict[str, OpTable]:
    """Only-one-applicable (``ooa``) and unanimity (``un``)."""
    return {
        "ooa": OpTable.from_grid("ooa", FOUR, _K_ORDER, {
            BOT:   (BOT, DENY, ALLOW, TOP),
            DENY:  (DENY, TOP, TOP, TOP),
            ALLOW: (ALLOW, TOP, TOP, TOP),
            TOP:   (TOP, TOP, TOP, TOP),
        }),
        "un": OpTable.from_grid("un", FOUR, _K_ORDER, {
            BOT:   (BOT, TOP, TOP, TOP),
            DENY:  (TOP, DENY, TOP, TOP),
            ALLOW: (TOP, TOP, ALLOW, TOP),
            TOP:   (TOP, TOP, TOP, TOP),
        }),
    }


JOBE_DOMAIN = (0, 1, 2)


def jobe_ops() -> dict[str, OpTable]:
    """Jobe's three-valued operators over ``0 < 1 < 2``: ``jand`` (min), ``j1``, ``j2``."""
    return {
        "jand": OpTable.binary("jand", JOBE_DOMAIN, min),
        "j1": OpTable.unary("j1", JOBE_DOMAIN, {0: 1, 1: 0, 2: 2}),
        "j2": OpTable.unary("j2", JOBE_DOMAIN, {0: 2, 1: 1, 2: 0}),
    }


def registry() -> dict[str, OpTable]:
    """Every named operator over the four decisions."""
    ops = belnap_ops()
    ops.update(new_unary_ops())
    ops.update(access_ops())
    return ops


class UnknownOperator(KeyError):
    def __str__(self) -> str:
        return f"unknown operator {self.args[0]!r}"


def lookup(registry: Mapping[str, OpTable], name: str) -> OpTable:
    try:
        return registry[name]
    except KeyError:
        raise UnknownOperator(name) from None


def compose(
    word: Sequence[str],
    registry: Mapping[str, OpTable],
    domain: Sequence[Hashable] | None = None,
) -> OpTable:
    """Compose a word of unary operators right to left; the empty word is the identity."""
    ops = [lookup(registry, name) for name in word]
    if domain is None:
        if ops:
            domain = ops[0].domain
        else:
            domain = next(iter(registry.values())).domain if registry else FOUR
    domain = tuple(domain)
    for op in ops:
        if op.arity != 1:
            raise ValueError(f"{op.name} is not a unary operator")
        if op.domain != domain:
            raise ValueError(f"{op.name} is defined over a different domain")
    out = []
    for x in domain:
        for op in reversed(ops):
            x = op(x)
        out.append(x)
    return OpTable(",".join(word) or "id", 1, domain, tuple(out))


class NotGenerated(ValueError):
    """The target permutation lies outside the subgroup spanned by the generators."""

    def __init__(self, target: Permutation, subgroup_order: int, detail: str = ""):
        self.target = target
        self.subgroup_order = subgroup_order
        self.detail = detail
        msg = f"{target} is not generated (subgroup of order {subgroup_order})"
        super().__init__(msg + (f"; {detail}" if detail else ""))


def _as_perms(generators: Mapping[str, OpTable | Permutation]) -> dict[str, Permutation]:
    perms = {}
    for name, g in generators.items():
        if isinstance(g, OpTable):
            if not g.is_permutation:
                raise ValueError(f"generator {name} is not a permutation")
            g = Permutation.from_op(g)
        perms[name] = g
    domains = {p.domain for p in perms.values()}
    if len(domains) > 1:
        raise ValueError("generators act on different domains")
    return perms


def _cayley_bfs(
    perms: Mapping[str, Permutation],
    domain: tuple,
    stop: Permutation | None = None,
) -> dict[Permutation, tuple[Permutation, str] | None]:
    start = Permutation.identity(domain)
    parent: dict = {start: None}
    if stop is not None and start == stop:
        return parent
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for name, g in perms.items():
            q = g.compose(p)
            if q not in parent:
                parent[q] = (p, name)
                if q == stop:
                    return parent
                queue.append(q)
    return parent


def generated_subgroup(generators: Mapping[str, OpTable | Permutation]) -> frozenset[Permutation]:
    """All permutations obtainable by composing the generators (identity included)."""
    perms = _as_perms(generators)
    if not perms:
        raise ValueError("need at least one generator")
    domain = next(iter(perms.values())).domain
    return frozenset(_cayley_bfs(perms, domain))


def _gcd_note(perms: Mapping[str, Permutation]) -> str:
    # a single transposition (a b) with the full cycle generates S_n iff gcd(b-a, n) == 1
    if len(perms) != 2:
        return ""
    domain = next(iter(perms.values())).domain
    n = len(domain)
    trans = [p for p in perms.values() if len(p.cycles()) == 1 and len(p.cycles()[0]) == 2]
    full = [p for p in perms.values() if len(p.cycles()) == 1 and len(p.cycles()[0]) == n]
    if len(trans) != 1 or len(full) != 1:
        return ""
    a, b = trans[0].cycles()[0]
    # distance measured along the cycle
    step = {x: full[0](x) for x in domain}
    k, x = 0, a
    while x != b:
        x, k = step[x], k + 1
    return f"gcd({k},{n})={math.gcd(k, n)}"


def synthesize_permutation(
    target: Permutation | OpTable,
    generators: Mapping[str, OpTable | Permutation],
) -> Word:
    """Shortest word over ``generators`` composing to ``target``.

    Breadth-first search over the Cayley graph from the identity; generator
    order breaks ties, so results are deterministic.  Raises
    :class:`NotGenerated` when the generated subgroup misses ``target``.
    """
    if isinstance(target, OpTable):
        target = Permutation.from_op(target)
    perms = _as_perms(generators)
    domain = target.domain
    if perms and next(iter(perms.values())).domain != domain:
        raise ValueError("target and generators act on different domains")
    parent = _cayley_bfs(perms, domain, stop=target)
    if target not in parent:
        raise NotGenerated(target, len(parent), _gcd_note(perms))
    word: list[str] = []
    node = target
    while parent[node] is not None:
        node, name = parent[node]
        word.append(name)
    return tuple(word)


def all_permutations(domain: Sequence[Hashable]) -> list[Permutation]:
    """Every permutation of ``domain`` in lexicographic order of image positions."""
    domain = tuple(domain)
    return [Permutation(domain, tuple(domain[i] for i in perm))
            for perm in itertools.permutations(range(len(domain)))]


@dataclass(frozen=True)
class Term:
    """A formula over named operators; leaves are variables ``x0, x1, ...``."""

    op: str
    args: tuple["Term", ...] = ()
    var: int | None = None

    @classmethod
    def variable(cls, index: int) -> "Term":
        return cls("", (), index)

    def evaluate(self, ops: Mapping[str, OpTable], env: Sequence[Hashable]) -> Hashable:
        if self.var is not None:
            return env[self.var]
        return lookup(ops, self.op)(*(a.evaluate(ops, env) for a in self.args))

    def __str__(self) -> str:
        if self.var is not None:
            return "xyzw"[self.var] if self.var < 4 else f"x{self.var}"
        if not self.args:
            return self.op
        return f"{self.op}(" + ", ".join(str(a) for a in self.args) + ")"


def word_term(word: Iterable[str], child: Term) -> Term:
    for name in reversed(tuple(word)):
        child = Term(name, (child,))
    return child
