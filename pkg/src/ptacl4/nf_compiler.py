"""Compile decision tables into normal-form formulas.

A normal form is a join of clauses, each clause a meet of literals, each
literal a word of unary permutation operators applied to one variable.  A row
``a -> j`` of a table becomes the clause ``meet_i sel(a_i, j)(x_i)``, and each
unary selection operator ``sel(a, j)`` is itself the meet of one permutation
literal per non-anchor input ``k``, sending ``a`` to ``j`` and ``k`` to bottom.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Iterator, Mapping, Sequence, Union

from .algebra import (
    OpTable,
    Permutation,
    UnknownOperator,
    Word,
    all_permutations,
    compose,
    new_unary_ops,
    synthesize_permutation,
)
from .lattice import FiniteLattice, chain_lattice, knowledge_lattice


class InvalidTable(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    index: int


@dataclass(frozen=True)
class UnaryApply:
    word: Word
    child: "Formula"


@dataclass(frozen=True)
class Meet:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Join:
    children: tuple["Formula", ...]


@dataclass(frozen=True)
class Constant:
    value: Hashable


Formula = Union[Variable, UnaryApply, Meet, Join, Constant]

BOTTOM_FORMULA = Join(())


@dataclass(frozen=True)
class Basis:
    """A lattice plus the unary permutation generators used to spell literals."""

    name: str
    lattice: FiniteLattice
    generators: tuple[tuple[str, OpTable], ...]

    @property
    def ops(self) -> dict[str, OpTable]:
        return dict(self.generators)


def knowledge_basis(kind: str = "conf,cyc") -> Basis:
    """Generators over the knowledge lattice: ``"conf,cyc"`` or ``"t0,t1,ttop"``."""
    ops = new_unary_ops()
    names = tuple(kind.split(","))
    if names not in {("conf", "cyc"), ("t0", "t1", "ttop")}:
        raise ValueError(f"unsupported basis {kind!r} (use conf,cyc or t0,t1,ttop)")
    return Basis(kind, knowledge_lattice(), tuple((n, ops[n]) for n in names))


def chain_basis(m: int) -> Basis:
    """``dagger`` = (1 m) and ``cyc`` = (1 2 ... m) over the chain ``1 < ... < m``."""
    lat = chain_lattice(m)
    dom = lat.elements
    gens = (
        ("dagger", Permutation.from_cycles(dom, (1, m)).as_op("dagger")),
        ("cyc", Permutation.from_cycles(dom, tuple(dom)).as_op("cyc")),
    )
    return Basis(f"dagger,cyc@chain:{m}", lat, gens)


def default_basis(lattice: FiniteLattice) -> Basis:
    if lattice == knowledge_lattice():
        return knowledge_basis()
    if lattice.name.startswith("chain:") and lattice.elements[0] == 1:
        return chain_basis(len(lattice))
    raise ValueError(f"no default generator basis for lattice {lattice.name}")


@dataclass(frozen=True)
class DecisionTable:
    """Explicit rows ``inputs -> output``; every other input maps to bottom.

    Rows are kept sorted by canonical element order and rows whose output is
    bottom are dropped.
    """

    variables: tuple[str, ...]
    rows: tuple[tuple[tuple[Hashable, ...], Hashable], ...]
    lattice: FiniteLattice
    output: str = "p"

    @property
    def arity(self) -> int:
        return len(self.variables)

    def __call__(self, *xs: Hashable) -> Hashable:
        return self.lookup(xs)

    def lookup(self, xs: Sequence[Hashable]) -> Hashable:
        if len(xs) != self.arity:
            raise ValueError(f"expected {self.arity} inputs, got {len(xs)}")
        return self._map.get(tuple(xs), self.lattice.bottom)

    @property
    def _map(self) -> dict:
        return dict(self.rows)

    def inputs(self) -> Iterator[tuple[Hashable, ...]]:
        return itertools.product(self.lattice.elements, repeat=self.arity)


def decision_table(
    variables: Sequence[str],
    rows: Iterable[tuple[Sequence[Hashable], Hashable]] | Mapping,
    lattice: FiniteLattice | None = None,
    output: str = "p",
) -> DecisionTable:
    lattice = lattice or knowledge_lattice()
    variables = tuple(variables)
    if not variables:
        raise InvalidTable("a table needs at least one input column")
    if len(set(variables)) != len(variables):
        raise InvalidTable("duplicate column names")
    items = rows.items() if isinstance(rows, Mapping) else rows
    seen: dict[tuple, Hashable] = {}
    for inputs, out in items:
        inputs = tuple(inputs)
        if len(inputs) != len(variables):
            raise InvalidTable(f"row {inputs!r} has {len(inputs)} inputs, expected {len(variables)}")
        for v in (*inputs, out):
            if v not in lattice:
                raise InvalidTable(f"{v!r} is not a value of lattice {lattice.name}")
        if inputs in seen:
            raise InvalidTable(f"duplicate row for inputs {inputs!r}")
        seen[inputs] = out
    pos = lattice.position
    kept = sorted(
        ((k, v) for k, v in seen.items() if v != lattice.bottom),
        key=lambda kv: [pos(x) for x in kv[0]],
    )
    return DecisionTable(variables, tuple(kept), lattice, output)


def table_from_op(op: OpTable, lattice: FiniteLattice | None = None, names: Sequence[str] = ("x", "y")) -> DecisionTable:
    """The decision table of a unary or binary operator."""
    lattice = lattice or knowledge_lattice()
    names = tuple(names)[: op.arity]
    rows = [(xs, op(*xs)) for xs in itertools.product(op.domain, repeat=op.arity)]
    return decision_table(names, rows, lattice, op.name)


# selection-operator literals -------------------------------------------------

def _selection_perms(lattice: FiniteLattice, a: Hashable, j: Hashable) -> list[Permutation]:
    # one permutation per non-anchor input k: a -> j, k -> bottom; the first
    # match in lexicographic order fixes the unconstrained positions
    perms = all_permutations(lattice.elements)
    out = []
    for k in lattice.elements:
        if k == a:
            continue
        out.append(next(p for p in perms if p(a) == j and p(k) == lattice.bottom))
    return out


@lru_cache(maxsize=None)
def _selection_words(basis: Basis) -> dict[tuple[Hashable, Hashable], tuple[Word, ...]]:
    lat = basis.lattice
    table = {}
    for a in lat.elements:
        for j in lat.elements:
            if j == lat.bottom:
                table[(a, j)] = ()
            else:
                table[(a, j)] = tuple(
                    synthesize_permutation(p, basis.ops) for p in _selection_perms(lat, a, j)
                )
    return table


def unary_selection_word(a: Hashable, j: Hashable, var: int = 0, basis: Basis | None = None) -> Formula:
    """Normal-form expression for the unary selection operator ``sel(a, j)`` on ``x_var``.

    ``sel(a, bottom)`` is constantly bottom and is returned as the empty join.
    """
    basis = basis or knowledge_basis()
    words = _selection_words(basis)
    try:
        ws = words[(a, j)]
    except KeyError:
        raise ValueError(f"{a!r} or {j!r} is not in lattice {basis.lattice.name}") from None
    if not ws:
        return BOTTOM_FORMULA
    return Meet(tuple(UnaryApply(w, Variable(var)) for w in ws))


def compile_table(table: DecisionTable, basis: Basis | None = None) -> Join:
    """Normal form equal to ``table`` on every input; the empty table gives the empty join."""
    basis = basis or default_basis(table.lattice)
    if basis.lattice != table.lattice:
        raise InvalidTable("table and basis use different lattices")
    clauses = []
    for inputs, out in table.rows:
        literals: list[Formula] = []
        for i, a in enumerate(inputs):
            sel = unary_selection_word(a, out, i, basis)
            literals.extend(sel.children)
        clauses.append(Meet(tuple(literals)))
    return Join(tuple(clauses))


compile = compile_table


# evaluation and structure ----------------------------------------------------

def formula_variables(f: Formula) -> set[int]:
    if isinstance(f, Variable):
        return {f.index}
    if isinstance(f, UnaryApply):
        return formula_variables(f.child)
    if isinstance(f, (Meet, Join)):
        out: set[int] = set()
        for c in f.children:
            out |= formula_variables(c)
        return out
    return set()


def evaluate_formula(
    f: Formula,
    assignment: Sequence[Hashable],
    basis: Basis | None = None,
    ops: Mapping[str, OpTable] | None = None,
) -> Hashable:
    """Evaluate bottom-up; words apply right to left; empty meet is top, empty join bottom."""
    basis = basis or knowledge_basis()
    lat = basis.lattice
    registry = dict(basis.ops)
    if ops:
        registry.update(ops)
    for v in assignment:
        if v not in lat:
            raise ValueError(f"{v!r} is not in lattice {lat.name}")
    words: dict[Word, OpTable] = {}

    def word_op(word: Word) -> OpTable:
        if word not in words:
            words[word] = compose(word, registry, lat.elements)
        return words[word]

    def ev(node: Formula) -> Hashable:
        if isinstance(node, Variable):
            if not 0 <= node.index < len(assignment):
                raise ValueError(
                    f"formula uses variable {node.index} but the assignment has {len(assignment)} value(s)"
                )
            return assignment[node.index]
        if isinstance(node, Constant):
            return node.value
        if isinstance(node, UnaryApply):
            return word_op(node.word)(ev(node.child))
        if isinstance(node, Meet):
            return lat.meet_all(ev(c) for c in node.children)
        if isinstance(node, Join):
            return lat.join_all(ev(c) for c in node.children)
        raise TypeError(f"not a formula node: {node!r}")

    return ev(f)


@dataclass(frozen=True)
class NormalFormCheck:
    valid: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.valid


def validate_normal_form(f: Formula) -> NormalFormCheck:
    """No binary connective under a unary word, and no join under a meet."""

    def walk(node: Formula, under_unary: bool, under_meet: bool) -> str | None:
        if isinstance(node, (Variable, Constant)):
            return None
        if isinstance(node, UnaryApply):
            return walk(node.child, True, under_meet)
        if isinstance(node, (Meet, Join)):
            if under_unary:
                return f"binary under unary: {type(node).__name__.lower()} inside a unary word"
            if isinstance(node, Join) and under_meet:
                return "join under meet"
            for c in node.children:
                err = walk(c, False, under_meet or isinstance(node, Meet))
                if err:
                    return err
            return None
        return f"unknown node {node!r}"

    err = walk(f, False, False)
    return NormalFormCheck(err is None, err)


def _is_constant_bottom(clause: Formula, basis: Basis) -> bool:
    lat = basis.lattice
    vs = sorted(formula_variables(clause))
    width = (max(vs) + 1) if vs else 0
    for values in itertools.product(lat.elements, repeat=len(vs)):
        env = [lat.bottom] * width
        for i, v in zip(vs, values):
            env[i] = v
        if evaluate_formula(clause, env, basis) != lat.bottom:
            return False
    return True


def prune(f: Formula, basis: Basis | None = None) -> Join:
    """Drop constantly-bottom and duplicate clauses; flattens nested joins."""
    basis = basis or knowledge_basis()
    if not isinstance(f, Join):
        f = Join((f,))

    def clauses(node: Formula) -> Iterator[Formula]:
        if isinstance(node, Join):
            for c in node.children:
                yield from clauses(c)
        else:
            yield node

    kept: list[Formula] = []
    seen: set = set()
    for c in clauses(f):
        if c in seen or _is_constant_bottom(c, basis):
            continue
        seen.add(c)
        kept.append(c)
    return Join(tuple(kept))


def formula_size(f: Formula) -> tuple[int, int]:
    """``(clauses, literals)`` of a normal form."""
    if not isinstance(f, Join):
        f = Join((f,))
    lits = 0
    for c in f.children:
        lits += len(c.children) if isinstance(c, Meet) else 1
    return len(f.children), lits


__all__ = [
    "BOTTOM_FORMULA", "Basis", "Constant", "DecisionTable", "Formula", "InvalidTable", "Join",
    "Meet", "NormalFormCheck", "UnaryApply", "UnknownOperator", "Variable", "chain_basis",
    "compile", "compile_table", "decision_table", "default_basis", "evaluate_formula",
    "formula_size", "formula_variables", "knowledge_basis", "prune", "table_from_op",
    "unary_selection_word", "validate_normal_form",
]
