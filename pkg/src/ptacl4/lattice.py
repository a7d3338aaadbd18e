"""Decision values and small finite lattices stored as explicit tables.

The four-valued decision set admits two orders: the knowledge order (bottom
``BOT``, top ``TOP``, ``DENY`` and ``ALLOW`` incomparable) and the truth order
(bottom ``DENY``, top ``ALLOW``). Chains ``1 < 2 < ... < m`` are provided for
the totally ordered constructions.

Every lattice here is built from its order relation alone: meet and join
tables are computed as greatest lower / least upper bounds by brute force.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence


class Decision(enum.Enum):
    """One of the four authorization decisions.

    Member order (``BOT``, ``DENY``, ``ALLOW``, ``TOP``) is the canonical
    element order used for every table over the decision set.
    """

    BOT = "bot"
    DENY = "0"
    ALLOW = "1"
    TOP = "top"

    @property
    def token(self) -> str:
        return self.value

    @classmethod
    def from_token(cls, token: str) -> "Decision":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown decision token {token!r}") from None

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return f"Decision.{self.name}"


BOT, DENY, ALLOW, TOP = Decision.BOT, Decision.DENY, Decision.ALLOW, Decision.TOP
FOUR: tuple[Decision, ...] = (BOT, DENY, ALLOW, TOP)


@dataclass(frozen=True)
class FiniteLattice:
    """A finite lattice over ``elements`` given by explicit tables.

    ``leq``, ``meet_table`` and ``join_table`` are indexed by element
    position, so ``meet_table[i][j]`` is the position of ``elements[i] meet
    elements[j]``.
    """

    name: str
    elements: tuple[Hashable, ...]
    leq_table: tuple[tuple[bool, ...], ...]
    meet_table: tuple[tuple[int, ...], ...]
    join_table: tuple[tuple[int, ...], ...]
    bottom: Hashable
    top: Hashable
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {e: i for i, e in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, value: object) -> bool:
        try:
            return value in self.index
        except TypeError:
            return False

    def position(self, value: Hashable) -> int:
        try:
            return self.index[value]
        except (KeyError, TypeError):
            raise ValueError(f"{value!r} is not an element of lattice {self.name}") from None

    def leq(self, x: Hashable, y: Hashable) -> bool:
        return self.leq_table[self.position(x)][self.position(y)]

    def meet(self, x: Hashable, y: Hashable) -> Hashable:
        return self.elements[self.meet_table[self.position(x)][self.position(y)]]

    def join(self, x: Hashable, y: Hashable) -> Hashable:
        return self.elements[self.join_table[self.position(x)][self.position(y)]]

    def meet_all(self, values: Iterable[Hashable]) -> Hashable:
        acc = self.top
        for v in values:
            acc = self.meet(acc, v)
        return acc

    def join_all(self, values: Iterable[Hashable]) -> Hashable:
        acc = self.bottom
        for v in values:
            acc = self.join(acc, v)
        return acc


def lattice_from_order(
    name: str,
    elements: Sequence[Hashable],
    leq: Callable[[Any, Any], bool],
) -> FiniteLattice:
    """Build a lattice from an order predicate, computing meet/join by search.

    Raises ``ValueError`` if some pair lacks a greatest lower or least upper
    bound, or if there is no unique bottom/top.
    """
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise ValueError("duplicate lattice elements")
    n = len(elements)
    le = tuple(tuple(bool(leq(a, b)) for b in elements) for a in elements)

    def bound(i: int, j: int, lower: bool) -> int:
        if lower:
            cands = [k for k in range(n) if le[k][i] and le[k][j]]
            best = [k for k in cands if all(le[c][k] for c in cands)]
        else:
            cands = [k for k in range(n) if le[i][k] and le[j][k]]
            best = [k for k in cands if all(le[k][c] for c in cands)]
        if len(best) != 1:
            kind = "meet" if lower else "join"
            raise ValueError(f"{name}: no {kind} for {elements[i]!r}, {elements[j]!r}")
        return best[0]

    meet = tuple(tuple(bound(i, j, True) for j in range(n)) for i in range(n))
    join = tuple(tuple(bound(i, j, False) for j in range(n)) for i in range(n))
    bottoms = [k for k in range(n) if all(le[k][j] for j in range(n))]
    tops = [k for k in range(n) if all(le[j][k] for j in range(n))]
    if len(bottoms) != 1 or len(tops) != 1:
        raise ValueError(f"{name}: lattice must have a unique bottom and top")
    return FiniteLattice(name, elements, le, meet, join, elements[bottoms[0]], elements[tops[0]])


_KNOWLEDGE_RANK = {BOT: 0, DENY: 1, ALLOW: 1, TOP: 2}
_TRUTH_RANK = {DENY: 0, BOT: 1, TOP: 1, ALLOW: 2}


def _diamond_leq(rank: dict) -> Callable[[Decision, Decision], bool]:
    # the two middle elements are incomparable
    def leq(x: Decision, y: Decision) -> bool:
        return x == y or rank[x] < rank[y]

    return leq


def knowledge_lattice() -> FiniteLattice:
    """The decision set under the knowledge order (meet ``kand``, join ``kor``)."""
    return lattice_from_order("4k", FOUR, _diamond_leq(_KNOWLEDGE_RANK))


def truth_lattice() -> FiniteLattice:
    """The decision set under the truth order (meet ``tand``, join ``tor``)."""
    return lattice_from_order("4t", FOUR, _diamond_leq(_TRUTH_RANK))


def chain_lattice(m: int, start: int = 1) -> FiniteLattice:
    """Totally ordered lattice ``start < start+1 < ... < start+m-1``."""
    if not isinstance(m, int) or m < 2:
        raise ValueError(f"chain length must be an integer >= 2, got {m!r}")
    values = range(start, start + m)
    name = f"chain:{m}" if start == 1 else f"chain:{start}..{start + m - 1}"
    return lattice_from_order(name, values, lambda a, b: a <= b)


@dataclass(frozen=True)
class LatticeReport:
    ok: bool
    violations: tuple[str, ...] = ()

    @property
    def first(self) -> str | None:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok


def validate_lattice(lat: FiniteLattice, stop_at_first: bool = False) -> LatticeReport:
    """Check every lattice law over all pairs and triples of elements."""
    n = len(lat.elements)
    le, mt, jt = lat.leq_table, lat.meet_table, lat.join_table
    e = lat.elements
    out: list[str] = []

    def fail(msg: str) -> bool:
        out.append(msg)
        return stop_at_first

    rng = range(n)
    for i in rng:
        if not le[i][i] and fail(f"leq not reflexive at {e[i]!r}"):
            return LatticeReport(False, tuple(out))
    for i, j in itertools.product(rng, rng):
        if i != j and le[i][j] and le[j][i] and fail(f"leq not antisymmetric at {e[i]!r}, {e[j]!r}"):
            return LatticeReport(False, tuple(out))
        m, k = mt[i][j], jt[i][j]
        if not (0 <= m < n and 0 <= k < n):
            fail(f"table entry out of range at {e[i]!r}, {e[j]!r}")
            return LatticeReport(False, tuple(out))
        lower = [c for c in rng if le[c][i] and le[c][j]]
        if not (le[m][i] and le[m][j] and all(le[c][m] for c in lower)):
            if fail(f"meet({e[i]!r}, {e[j]!r}) = {e[m]!r} is not the greatest lower bound"):
                return LatticeReport(False, tuple(out))
        upper = [c for c in rng if le[i][c] and le[j][c]]
        if not (le[i][k] and le[j][k] and all(le[k][c] for c in upper)):
            if fail(f"join({e[i]!r}, {e[j]!r}) = {e[k]!r} is not the least upper bound"):
                return LatticeReport(False, tuple(out))
        if mt[i][j] != mt[j][i] and fail(f"meet not commutative at {e[i]!r}, {e[j]!r}"):
            return LatticeReport(False, tuple(out))
        if jt[i][j] != jt[j][i] and fail(f"join not commutative at {e[i]!r}, {e[j]!r}"):
            return LatticeReport(False, tuple(out))
        if mt[i][jt[i][j]] != i or jt[i][mt[i][j]] != i:
            if fail(f"absorption fails at {e[i]!r}, {e[j]!r}"):
                return LatticeReport(False, tuple(out))
    for i in rng:
        if (mt[i][i] != i or jt[i][i] != i) and fail(f"not idempotent at {e[i]!r}"):
            return LatticeReport(False, tuple(out))
    for i, j, k in itertools.product(rng, rng, rng):
        if le[i][j] and le[j][k] and not le[i][k]:
            if fail(f"leq not transitive at {e[i]!r}, {e[j]!r}, {e[k]!r}"):
                return LatticeReport(False, tuple(out))
        if mt[mt[i][j]][k] != mt[i][mt[j][k]]:
            if fail(f"meet not associative at {e[i]!r}, {e[j]!r}, {e[k]!r}"):
                return LatticeReport(False, tuple(out))
        if jt[jt[i][j]][k] != jt[i][jt[j][k]]:
            if fail(f"join not associative at {e[i]!r}, {e[j]!r}, {e[k]!r}"):
                return LatticeReport(False, tuple(out))
    b, t = lat.position(lat.bottom), lat.position(lat.top)
    for i in rng:
        if not le[b][i] and fail(f"bottom {lat.bottom!r} is not below {e[i]!r}"):
            return LatticeReport(False, tuple(out))
        if not le[i][t] and fail(f"top {lat.top!r} is not above {e[i]!r}"):
            return LatticeReport(False, tuple(out))
    return LatticeReport(not out, tuple(out))


def parse_lattice(selector: str) -> FiniteLattice:
    """``"4k"``, ``"4t"``, ``"chain:m"`` or ``"jobe"`` (the chain 0 < 1 < 2)."""
    if selector == "4k":
        return knowledge_lattice()
    if selector == "4t":
        return truth_lattice()
    if selector == "jobe":
        return chain_lattice(3, start=0)
    if selector.startswith("chain:"):
        try:
            m = int(selector.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad chain selector {selector!r}") from None
        return chain_lattice(m)
    raise ValueError(f"unknown lattice {selector!r} (expected 4k, 4t, chain:m or jobe)")
