"""Selection operators and closure-based completeness checks.

Functions over a lattice are handled as integer arrays of element positions:
a unary function is a row of length ``n``, a binary one a row of length
``n * n`` indexed by ``x * n + y``.  All closures are computed to a fixpoint
except the search for binary meet/join formulas, which is depth-bounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .algebra import OpTable, Permutation, Term, Word, compose, synthesize_permutation, word_term
from .lattice import Decision, FiniteLattice, chain_lattice

Ops = Mapping[str, OpTable] | Iterable[OpTable]

_SYMBOLS = {Decision.BOT: "⊥", Decision.TOP: "⊤", Decision.DENY: "0", Decision.ALLOW: "1"}


def symbol(value: Hashable) -> str:
    return _SYMBOLS.get(value, str(value))


def token(value: Hashable) -> str:
    return value.token if isinstance(value, Decision) else str(value)


def _as_dict(ops: Ops) -> dict[str, OpTable]:
    if isinstance(ops, Mapping):
        return dict(ops)
    return {op.name: op for op in ops}


@dataclass(frozen=True)
class SelectionOp:
    """``σ_a^j``: maps the anchor tuple ``a`` to ``j`` and everything else to bottom."""

    anchor: tuple[Hashable, ...]
    output: Hashable
    lattice: FiniteLattice = field(repr=False)

    @property
    def arity(self) -> int:
        return len(self.anchor)

    def __call__(self, *xs: Hashable) -> Hashable:
        if len(xs) != self.arity:
            raise TypeError(f"selection operator takes {self.arity} argument(s)")
        return self.output if tuple(xs) == self.anchor else self.lattice.bottom

    def unary_table(self) -> tuple[Hashable, ...]:
        if self.arity != 1:
            raise ValueError("only unary selection operators have a unary table")
        return tuple(self(x) for x in self.lattice.elements)

    def as_op(self) -> OpTable:
        dom = self.lattice.elements
        if self.arity == 1:
            return OpTable(self.label, 1, dom, self.unary_table())
        if self.arity == 2:
            return OpTable.binary(self.label, dom, self)
        raise ValueError("OpTable only holds arity 1 or 2")

    @property
    def label(self) -> str:
        if self.output == self.lattice.bottom:
            return f"σ_*^{symbol(self.output)}"
        a = symbol(self.anchor[0]) if self.arity == 1 else "(" + ",".join(map(symbol, self.anchor)) + ")"
        return f"σ_{a}^{symbol(self.output)}"

    def __str__(self) -> str:
        return self.label


def selection_op(anchor, output: Hashable, lattice: FiniteLattice) -> SelectionOp:
    if not isinstance(anchor, tuple):
        anchor = (anchor,)
    for v in (*anchor, output):
        if v not in lattice:
            raise ValueError(f"{v!r} is not an element of lattice {lattice.name}")
    return SelectionOp(anchor, output, lattice)


def unary_selection_ops(lattice: FiniteLattice) -> list[SelectionOp]:
    """All distinct unary selection operators; the constant-bottom one is listed once."""
    out = [selection_op(lattice.elements[0], lattice.bottom, lattice)]
    for a in lattice.elements:
        for j in lattice.elements:
            if j != lattice.bottom:
                out.append(selection_op(a, j, lattice))
    return out


@dataclass(frozen=True)
class UnaryFunctionSpace:
    """A set of unary functions over ``domain``, each stored as its tuple of images."""

    domain: tuple[Hashable, ...]
    functions: frozenset[tuple[Hashable, ...]]
    words: Mapping[tuple, Word] = field(default_factory=dict, repr=False, compare=False)

    def _key(self, f) -> tuple:
        if isinstance(f, SelectionOp):
            return f.unary_table()
        if isinstance(f, (OpTable, Permutation)):
            return tuple(f.table if isinstance(f, OpTable) else f.images)
        if callable(f):
            return tuple(f(x) for x in self.domain)
        return tuple(f)

    def __contains__(self, f) -> bool:
        return self._key(f) in self.functions

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(sorted(self.functions, key=lambda t: [self.domain.index(v) for v in t]))

    @property
    def capacity(self) -> int:
        return len(self.domain) ** len(self.domain)

    @property
    def is_total(self) -> bool:
        return len(self.functions) == self.capacity

    def invariants(self) -> list[tuple[Hashable, Hashable]]:
        """Pairs ``(x, y)`` such that every member maps ``x`` to ``y``."""
        return _invariants(self.domain, self.functions)


def _invariants(domain, functions) -> list[tuple[Hashable, Hashable]]:
    out = []
    for i, x in enumerate(domain):
        images = {f[i] for f in functions}
        if len(images) == 1:
            out.append((x, images.pop()))
    return out


# numpy helpers ---------------------------------------------------------------

def _codes(rows: np.ndarray, n: int) -> np.ndarray:
    weights = n ** np.arange(rows.shape[1], dtype=np.int64)
    return rows.astype(np.int64) @ weights


def _space(domain, rows: np.ndarray, words=None) -> UnaryFunctionSpace:
    funcs = frozenset(tuple(domain[i] for i in row) for row in rows.tolist())
    return UnaryFunctionSpace(tuple(domain), funcs, words or {})


def _unary_rows(unary_ops: Ops, domain=None) -> tuple[tuple, np.ndarray, list[Word]]:
    """Closure of the identity under the unary operators, in breadth-first order."""
    ops = {k: v for k, v in _as_dict(unary_ops).items() if v.arity == 1}
    if domain is None:
        if not ops:
            raise ValueError("cannot infer the domain from an empty operator set")
        domain = next(iter(ops.values())).domain
    domain = tuple(domain)
    if any(op.domain != domain for op in ops.values()):
        raise ValueError("operators act on different domains")
    n = len(domain)
    start = tuple(range(n))
    seen = {start: ()}
    order = [start]
    k = 0
    while k < len(order):
        f = order[k]
        k += 1
        for name, op in ops.items():
            g = tuple(int(op.codes[i]) for i in f)
            if g not in seen:
                seen[g] = (name,) + seen[f]
                order.append(g)
    return domain, np.array(order, dtype=np.int16).reshape(-1, n), [seen[f] for f in order]


def unary_closure(unary_ops: Ops, domain: Sequence[Hashable] | None = None) -> UnaryFunctionSpace:
    """Identity plus everything reachable by composing the given unary operators.

    ``words`` maps each member to a shortest word producing it.
    """
    domain, rows, words = _unary_rows(unary_ops, domain)
    keyed = {tuple(domain[i] for i in row): w for row, w in zip(rows.tolist(), words)}
    return UnaryFunctionSpace(domain, frozenset(keyed), keyed)


class _Seen:
    """Membership bitmap over the ``n ** n`` unary functions."""

    def __init__(self, n: int):
        self.n = n
        self.bits = np.zeros(n ** n, dtype=bool)

    def admit(self, cands: np.ndarray) -> np.ndarray:
        """Rows of ``cands`` not seen before (deduplicated), marking them seen."""
        if not len(cands):
            return cands
        codes, idx = np.unique(_codes(cands, self.n), return_index=True)
        fresh = ~self.bits[codes]
        self.bits[codes[fresh]] = True
        return cands[idx[fresh]]


def _semilattice_closure(base: np.ndarray, table: np.ndarray, n: int) -> np.ndarray:
    # closure under an associative, commutative, idempotent operation only
    # needs combinations with the base elements
    seen = _Seen(n)
    rows = seen.admit(base)
    frontier = rows
    acc = [rows]
    while len(frontier):
        parts = []
        for start in range(0, len(frontier), 512):
            block = frontier[start:start + 512]
            parts.append(seen.admit(table[block[:, None, :], rows[None, :, :]].reshape(-1, n)))
        frontier = np.concatenate(parts)
        if len(frontier):
            acc.append(frontier)
    return np.concatenate(acc)


def _lattice_arrays(lattice: FiniteLattice) -> tuple[np.ndarray, np.ndarray]:
    return (np.array(lattice.meet_table, dtype=np.int16),
            np.array(lattice.join_table, dtype=np.int16))


def normal_form_unary_space(unary_ops: Ops, lattice: FiniteLattice) -> UnaryFunctionSpace:
    """Unary functions expressible as joins of meets of unary words applied to ``x``."""
    domain, rows, _ = _unary_rows(unary_ops, lattice.elements)
    n = len(domain)
    meet, join = _lattice_arrays(lattice)
    meets = _semilattice_closure(rows, meet, n)
    joins = _semilattice_closure(meets, join, n)
    return _space(domain, joins)


def _term_closure(ops: Mapping[str, OpTable], lattice: FiniteLattice, chunk: int = 256) -> np.ndarray:
    """All unary term functions ``f(x)`` built from ``ops`` (constants included)."""
    n = len(lattice)
    domain = lattice.elements
    for op in ops.values():
        if op.domain != domain:
            raise ValueError(f"{op.name} is defined over a different domain")
    start = [np.arange(n, dtype=np.int16)]
    for op in ops.values():
        if op.arity == 0:
            start.append(np.full(n, op.codes, dtype=np.int16))
    seen = _Seen(n)
    rows = seen.admit(np.array(start))
    frontier = rows
    unary = [op.codes for op in ops.values() if op.arity == 1]
    binary = [op.codes for op in ops.values() if op.arity == 2]

    while len(frontier):
        fresh: list[np.ndarray] = []
        for u in unary:
            fresh.append(seen.admit(u[frontier]))
        for b in binary:
            for s in range(0, len(frontier), chunk):
                block = frontier[s:s + chunk]
                fresh.append(seen.admit(b[block[:, None, :], rows[None, :, :]].reshape(-1, n)))
                fresh.append(seen.admit(b[rows[:, None, :], block[None, :, :]].reshape(-1, n)))
        frontier = np.concatenate(fresh)
        rows = np.concatenate([rows, frontier])
    return rows


@dataclass(frozen=True)
class CompletenessReport:
    """Outcome of a functional or canonical completeness check."""

    kind: str
    lattice: str
    operators: tuple[str, ...]
    complete: bool
    expressible: int
    capacity: int
    missing: tuple[SelectionOp, ...]
    invariants: tuple[tuple[Hashable, Hashable], ...]

    def witness(self) -> str:
        if self.complete:
            return ""
        if self.invariants:
            return "; ".join(
                f"every expressible unary function maps {symbol(x)} to {symbol(y)}"
                f" (f({symbol(x)})={symbol(y)} for all reachable unary functions)"
                for x, y in self.invariants
            )
        return f"only {self.expressible} of {self.capacity} unary functions are expressible"

    def __str__(self) -> str:
        if self.complete:
            return f"{self.kind}: yes ({self.expressible}/{self.capacity} unary functions)"
        miss = ", ".join(m.label for m in self.missing)
        return f"{self.kind}: NO (missing {miss}; {self.witness()})"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lattice": self.lattice,
            "operators": list(self.operators),
            "complete": self.complete,
            "expressible": self.expressible,
            "capacity": self.capacity,
            "missing": [
                {"anchor": [token(a) for a in m.anchor], "output": token(m.output), "label": m.label}
                for m in self.missing
            ],
            "invariants": [[token(x), token(y)] for x, y in self.invariants],
            "witness": self.witness(),
        }


def _report(kind: str, ops: Mapping[str, OpTable], lattice: FiniteLattice, space: UnaryFunctionSpace) -> CompletenessReport:
    missing = tuple(s for s in unary_selection_ops(lattice) if s not in space)
    return CompletenessReport(
        kind=kind,
        lattice=lattice.name,
        operators=tuple(ops),
        complete=not missing,
        expressible=len(space),
        capacity=space.capacity,
        missing=missing,
        invariants=tuple(space.invariants()),
    )


def check_canonical_completeness(unary_ops: Ops, lattice: FiniteLattice) -> CompletenessReport:
    """Is every unary selection operator expressible in normal form?

    Meet and join are taken to be the lattice's own; only the arity-1
    members of ``unary_ops`` contribute literals.
    """
    ops = {k: v for k, v in _as_dict(unary_ops).items() if v.arity == 1}
    space = normal_form_unary_space(ops, lattice)
    return _report("canonically complete", ops, lattice, space)


def check_functional_completeness(ops: Ops, lattice: FiniteLattice) -> CompletenessReport:
    """Is every unary selection operator expressible by some formula over ``ops``?

    Builds every unary term function by closing the identity (and any
    constants) under all operators, binary ones applied pointwise to pairs of
    already derived functions, until nothing new appears.
    """
    ops = _as_dict(ops)
    rows = _term_closure(ops, lattice)
    return _report("functionally complete", ops, lattice, _space(lattice.elements, rows))


@dataclass(frozen=True)
class SuitabilityResult:
    suitable: bool
    meet: Term | None
    join: Term | None
    depth: int
    saturated: bool
    reason: str = ""

    def __str__(self) -> str:
        if self.suitable:
            return f"canonically suitable: yes (meet ≡ {self.meet}; join ≡ {self.join})"
        return f"canonically suitable: NO ({self.reason})"

    def to_dict(self) -> dict:
        return {
            "suitable": self.suitable,
            "meet": None if self.meet is None else str(self.meet),
            "join": None if self.join is None else str(self.join),
            "depth": self.depth,
            "saturated": self.saturated,
            "reason": self.reason,
        }


def check_canonical_suitability(
    ops: Ops,
    lattice: FiniteLattice,
    max_depth: int = 6,
    max_tables: int = 250_000,
) -> SuitabilityResult:
    """Search for formulas computing the lattice meet and join.

    Formulas are enumerated by nesting depth of binary operators; unary words
    are free at every level because the unary closure is finite.  The search
    stops when both are found, when no new binary function appears
    (``saturated``: a definitive negative), or at ``max_depth`` /
    ``max_tables`` (a bounded negative).
    """
    ops = _as_dict(ops)
    n = len(lattice)
    domain = lattice.elements
    nn = n * n
    X = np.repeat(np.arange(n, dtype=np.int16), n)
    Y = np.tile(np.arange(n, dtype=np.int16), n)
    _, U, uwords = _unary_rows(ops, domain)
    binary = [(k, v.codes) for k, v in ops.items() if v.arity == 2]
    meet_arr, join_arr = _lattice_arrays(lattice)
    targets = {"meet": meet_arr[X, Y], "join": join_arr[X, Y]}
    found: dict[str, Term] = {}

    # provenance: ("leaf", Term) or (u_index, op_name, i, j)
    prov: list = []
    rows: list[np.ndarray] = []
    seen: set[bytes] = set()

    def add(row: np.ndarray, how) -> bool:
        key = row.tobytes()
        if key in seen:
            return False
        seen.add(key)
        rows.append(row)
        prov.append(how)
        return True

    def term_of(k: int) -> Term:
        how = prov[k]
        if how[0] == "leaf":
            return how[1]
        u, name, i, j = how
        return word_term(uwords[u], Term(name, (term_of(i), term_of(j))))

    def check(row: np.ndarray, how_term) -> None:
        for key, tgt in targets.items():
            if key not in found and np.array_equal(row, tgt):
                found[key] = how_term()

    for u, w in enumerate(uwords):
        for v, leaf in ((X, Term.variable(0)), (Y, Term.variable(1))):
            row = U[u][v]
            t = word_term(w, leaf)
            if add(row, ("leaf", t)):
                check(row, lambda t=t: t)
    for name, op in ops.items():
        if op.arity == 0:
            for u, w in enumerate(uwords):
                row = np.full(nn, U[u][int(op.codes)], dtype=np.int16)
                t = word_term(w, Term(name))
                if add(row, ("leaf", t)):
                    check(row, lambda t=t: t)

    def result(depth: int, saturated: bool, reason: str = "") -> SuitabilityResult:
        ok = len(found) == 2
        return SuitabilityResult(ok, found.get("meet"), found.get("join"), depth, saturated, reason)

    if len(found) == 2:
        return result(0, False)

    frontier_start = 0
    for depth in range(1, max_depth + 1):
        A = np.array(rows)
        total = len(A)
        F = np.arange(frontier_start, total)
        old = np.arange(frontier_start)
        frontier_start = total
        block = max(1, 4_000_000 // max(1, total * nn))

        def products():
            # every pair with at least one side in the frontier, once
            for name, b in binary:
                for s in range(0, len(F), block):
                    I = F[s:s + block]
                    for left, right in ((I, np.arange(total)), (old, I)):
                        if not len(left) or not len(right):
                            continue
                        T = b[A[left][:, None, :], A[right][None, :, :]].reshape(-1, nn)
                        T, first = np.unique(T, axis=0, return_index=True)
                        yield name, left, right, T, first

        for name, left, right, T, first in products():
            for u in range(len(U)):
                V = U[u][T]
                for key, tgt in targets.items():
                    if key in found:
                        continue
                    hit = np.nonzero((V == tgt).all(axis=1))[0]
                    if len(hit):
                        li, ri = divmod(int(first[hit[0]]), len(right))
                        i, j = int(left[li]), int(right[ri])
                        found[key] = word_term(uwords[u], Term(name, (term_of(i), term_of(j))))
                if len(found) == 2:
                    return result(depth, False)
        if depth == max_depth:
            break
        for name, left, right, T, first in products():
            for u in range(len(U)):
                V, keep = np.unique(U[u][T], axis=0, return_index=True)
                for r, src in zip(V, first[keep].tolist()):
                    li, ri = divmod(src, len(right))
                    add(r, (u, name, int(left[li]), int(right[ri])))
                if len(rows) > max_tables:
                    missing = ", ".join(k for k in targets if k not in found)
                    return result(depth, False, f"no formula for {missing} within {max_tables} tables")
        if len(rows) == total:
            missing = ", ".join(k for k in targets if k not in found)
            return result(depth, True, f"closure saturated at depth {depth} without {missing}")
    missing = ", ".join(k for k in targets if k not in found)
    return result(max_depth, False, f"no formula for {missing} up to depth {max_depth}")


def totally_ordered_generators(m: int) -> dict[str, OpTable]:
    """``dagger`` = (1 m), ``cyc`` = (1 2 ... m), ``tmeet`` = min, and the derived ``flip``.

    ``flip`` maps ``i`` to ``m - i + 1``; it is obtained as a composition of
    ``dagger`` and ``cyc`` found by breadth-first search (see :func:`flip_word`).
    """
    lat = chain_lattice(m)
    dom = lat.elements
    ops = {
        "dagger": Permutation.from_cycles(dom, (1, m)).as_op("dagger"),
        "cyc": Permutation.from_cycles(dom, tuple(dom)).as_op("cyc"),
        "tmeet": OpTable.binary("tmeet", dom, min),
    }
    word = flip_word(m, ops)
    ops["flip"] = compose(word, ops, dom).renamed("flip")
    return ops


def flip_word(m: int, ops: Mapping[str, OpTable] | None = None) -> Word:
    """Shortest word over ``dagger``/``cyc`` realizing ``i -> m - i + 1``."""
    if ops is None:
        lat = chain_lattice(m)
        dom = lat.elements
        ops = {
            "dagger": Permutation.from_cycles(dom, (1, m)).as_op("dagger"),
            "cyc": Permutation.from_cycles(dom, tuple(dom)).as_op("cyc"),
        }
    dom = ops["dagger"].domain
    target = Permutation(dom, tuple(m - i + 1 for i in dom))
    return synthesize_permutation(target, {k: ops[k] for k in ("dagger", "cyc")})


def all_unary_functions(domain: Sequence[Hashable]) -> Iterable[tuple[Hashable, ...]]:
    return itertools.product(domain, repeat=len(domain))
