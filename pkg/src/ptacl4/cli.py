"""Command-line entry point: ``ptacl4 {compile,eval,check,synth,verify,serve}``.

Exit codes: 0 success, 1 usage error, 2 input format error, 3 verification
failure (``verify`` mismatch, or ``synth`` target not generated).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path
from typing import Hashable, Mapping, Sequence, TextIO

from .algebra import (
    NotGenerated,
    OpTable,
    Permutation,
    UnknownOperator,
    belnap_ops,
    jobe_ops,
    registry,
    synthesize_permutation,
)
from .completeness import (
    check_canonical_completeness,
    check_canonical_suitability,
    check_functional_completeness,
    totally_ordered_generators,
)
from .interop import (
    ParseError,
    emit_policy,
    parse_policy,
    parse_request,
    parse_request_inline,
    parse_table,
)
from .lattice import Decision, FiniteLattice, knowledge_lattice, parse_lattice
from .nf_compiler import compile_table, formula_size, knowledge_basis, prune
from .policy import (
    STRATEGIES,
    eval_policy,
    eval_policy_ind,
    format_set,
    formula_to_policy,
    policy_vars,
    resolve,
)

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_VERIFY = 0, 1, 2, 3

CONFIG_KEYS = ("basis", "lattice", "store", "format")


class UsageError(Exception):
    pass


class FormatError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# helpers ---------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _token(v: Hashable) -> str:
    return v.token if isinstance(v, Decision) else str(v)


def _value(tok: str, lattice: FiniteLattice) -> Hashable:
    for v in lattice.elements:
        if _token(v) == tok:
            return v
    raise FormatError(f"unknown value {tok!r} for lattice {lattice.name}")


def split_top_level(spec: str) -> list[str]:
    """Split on commas that are not inside ``(...)`` or ``[...]``."""
    parts, depth, buf = [], 0, []
    for ch in spec:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(buf).strip())
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf).strip())
    return [p for p in parts if p]


def parse_permutation(spec: str, lattice: FiniteLattice) -> Permutation:
    """An image list ``top,0,1,bot`` (``[...]`` optional) or cycles ``(bot 0)(1 top)``."""
    dom = lattice.elements
    spec = spec.strip()
    if spec.startswith("("):
        cycles = []
        for chunk in spec.replace(")", ")\0").split("\0"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise FormatError(f"bad cycle {chunk!r}")
            cycles.append(tuple(_value(t, lattice) for t in chunk[1:-1].replace(",", " ").split()))
        try:
            return Permutation.from_cycles(dom, *cycles)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    images = [t.strip() for t in spec.strip("[]").split(",") if t.strip()]
    if len(images) != len(dom):
        raise FormatError(f"permutation needs {len(dom)} images, got {len(images)}")
    values = tuple(_value(t, lattice) for t in images)
    if len(set(values)) != len(values):
        raise FormatError(f"{spec!r} is not a bijection")
    return Permutation(dom, values)


def _named_ops(lattice: FiniteLattice) -> dict[str, OpTable]:
    if lattice.name in ("4k", "4t"):
        return registry()
    if lattice.name == "jobe" or lattice.elements == (0, 1, 2):
        return jobe_ops()
    if lattice.name.startswith("chain:") and lattice.elements[0] == 1:
        return totally_ordered_generators(len(lattice))
    return {}


def parse_ops_spec(spec: str, lattice: FiniteLattice) -> dict[str, OpTable]:
    """Operator names, the alias ``belnap``, cycles ``(bot 1)`` or image lists ``[0,bot,1,top]``."""
    known = _named_ops(lattice)
    out: dict[str, OpTable] = {}
    for item in split_top_level(spec):
        if item == "belnap" and lattice.elements == knowledge_lattice().elements:
            out.update(belnap_ops())
        elif item.startswith("("):
            out[item] = parse_permutation(item, lattice).as_op(item)
        elif item.startswith("["):
            images = tuple(_value(t.strip(), lattice) for t in item.strip("[]").split(","))
            if len(images) != len(lattice):
                raise FormatError(f"{item} needs {len(lattice)} images")
            out[item] = OpTable(item, 1, lattice.elements, images)
        elif item in known:
            out[item] = known[item]
        else:
            raise UnknownOperator(item)
    if not out:
        raise UsageError("empty operator list")
    return out


def _bindings(assign: Sequence[str]) -> dict[str, Decision]:
    env = {}
    for item in assign:
        name, sep, tok = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--assign expects NAME=DECISION, got {item!r}")
        try:
            env[name] = Decision.from_token(tok)
        except ValueError:
            raise FormatError(f"unknown decision {tok!r}") from None
    return env


def _check_basis(basis_name: str) -> None:
    basis = knowledge_basis(basis_name)
    report = check_canonical_completeness(basis.ops, basis.lattice)
    if not report.complete:
        raise UsageError(f"basis {basis_name} is not canonically complete: {report}")


def _decision_line(s: frozenset, ind: bool, strategy: str | None) -> str:
    if strategy:
        return resolve(s, strategy).token
    return format_set(s) if ind else next(iter(s)).token


# commands --------------------------------------------------------------------

def cmd_compile(args, out: TextIO) -> int:
    basis_name = args.basis or "conf,cyc"
    _check_basis(basis_name)
    basis = knowledge_basis(basis_name)
    table = parse_table(_read(args.table))
    formula = prune(compile_table(table, basis), basis)
    clauses, literals = formula_size(formula)
    text = emit_policy(formula_to_policy(formula, table.variables, expand_join=args.expand_join))
    counts = f"clauses: {clauses} literals: {literals}\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        out.write(counts)
    else:
        out.write(text)
        sys.stderr.write(counts)
    return EXIT_OK


def cmd_eval(args, out: TextIO) -> int:
    policy = parse_policy(_read(args.policy))
    request = parse_request(_read(args.request)) if args.request else parse_request("")
    env = _bindings(args.assign)
    missing = [v for v in policy_vars(policy) if v not in env]
    if missing:
        raise UsageError(f"unbound sub-policies: {', '.join(missing)} (use --assign NAME=DECISION)")
    if args.ind:
        s = eval_policy_ind(policy, request, env=env)
    else:
        s = frozenset({eval_policy(policy, request, env=env)})
    out.write(_decision_line(s, args.ind, args.resolve) + "\n")
    return EXIT_OK


def cmd_check(args, out: TextIO) -> int:
    lattice = parse_lattice(args.lattice or "4k")
    ops = parse_ops_spec(args.ops, lattice)
    suit = check_canonical_suitability(ops, lattice)
    fc = check_functional_completeness(ops, lattice)
    cc = check_canonical_completeness(ops, lattice)
    canonical = suit.suitable and cc.complete
    if (args.format or "text") == "json":
        payload = {
            "lattice": lattice.name,
            "operators": list(ops),
            "suitability": suit.to_dict(),
            "functional": fc.to_dict(),
            "canonical": cc.to_dict(),
            "canonically_complete": canonical,
        }
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK
    out.write(f"{suit}\n{fc}\n")
    if cc.complete and not suit.suitable:
        out.write("canonically complete: NO (lattice meet/join not expressible)\n")
    else:
        out.write(f"{cc}\n")
    return EXIT_OK


def cmd_synth(args, out: TextIO) -> int:
    lattice = parse_lattice(args.lattice or "4k")
    gens = parse_ops_spec(args.basis or "conf,cyc", lattice)
    target = parse_permutation(args.permutation, lattice)
    try:
        word = synthesize_permutation(target, gens)
    except NotGenerated as exc:
        detail = f" ({exc.detail})" if exc.detail else ""
        out.write(f"not generated{detail}\n")
        return EXIT_VERIFY
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if (args.format or "text") == "json":
        out.write(json.dumps({"permutation": str(target), "word": list(word)}) + "\n")
    else:
        out.write(",".join(word) + "\n")
    return EXIT_OK


def verify_policy(policy, table) -> tuple | None:
    """First input (canonical order) where policy and table disagree, as ``(inputs, got, want)``."""
    names = table.variables
    extra = [v for v in policy_vars(policy) if v not in names]
    if extra:
        raise UsageError(f"arity mismatch: policy refers to {', '.join(extra)} not in table header")
    for inputs in itertools.product(table.lattice.elements, repeat=len(names)):
        got = eval_policy(policy, parse_request(""), env=dict(zip(names, inputs)))
        want = table.lookup(inputs)
        if got != want:
            return inputs, got, want
    return None


def cmd_verify(args, out: TextIO) -> int:
    policy = parse_policy(_read(args.policy))
    table = parse_table(_read(args.table))
    bad = verify_policy(policy, table)
    if bad is None:
        out.write("pass\n")
        return EXIT_OK
    inputs, got, want = bad
    out.write(f"fail at ({','.join(map(_token, inputs))}): policy gives {_token(got)}, table gives {_token(want)}\n")
    return EXIT_VERIFY


def load_store(directory: str) -> dict:
    root = Path(directory)
    if not root.is_dir():
        raise UsageError(f"policy store {directory} is not a directory")
    store = {}
    for path in sorted(root.glob("*.policy")):
        try:
            store[path.stem] = parse_policy(path.read_text(encoding="utf-8"))
        except ParseError as exc:
            raise ParseError(f"{path.name}: {exc.message}", exc.line, exc.column) from None
    return store


def serve_line(line: str, store: Mapping, ind: bool = False, strategy: str | None = None) -> str:
    """Answer one ``NAME | attr=val;attr=val`` request; sub-policy references resolve against the store."""
    name, sep, rest = line.partition("|")
    name = name.strip()
    if not sep or not name:
        return "ERR expected 'NAME | attr=val;...'"
    if name not in store:
        return "ERR unknown policy"
    try:
        q = parse_request_inline(rest.strip())
        if ind:
            s = eval_policy_ind(store[name], q, env=store)
        else:
            s = frozenset({eval_policy(store[name], q, env=store)})
    except ParseError as exc:
        return f"ERR {exc.message}"
    except KeyError as exc:
        return f"ERR {exc.args[0]}"
    except RecursionError:
        return "ERR cyclic sub-policy reference"
    return _decision_line(s, ind, strategy)


def cmd_serve(args, out: TextIO, inp: TextIO | None = None) -> int:
    if not args.store:
        raise UsageError("serve needs a policy store directory")
    store = load_store(args.store)
    for line in inp or sys.stdin:
        line = line.rstrip("\n")
        if not line.strip():
            continue
        out.write(serve_line(line, store, args.ind, args.resolve) + "\n")
        out.flush()
    return EXIT_OK


# argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with defaults for basis, lattice, store, format")
    common.add_argument("--format", choices=("text", "json"))

    p = _Parser(prog="ptacl4", description="Four-valued access-control toolchain.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compile", parents=[common], help="decision table -> normal-form policy")
    c.add_argument("table")
    c.add_argument("-o", "--output")
    c.add_argument("--basis", choices=("conf,cyc", "t0,t1,ttop"))
    c.add_argument("--expand-join", action="store_true",
                   help="spell joins with conf and kand instead of kor")
    c.set_defaults(func=cmd_compile)

    e = sub.add_parser("eval", parents=[common], help="evaluate a policy on a request")
    e.add_argument("policy")
    e.add_argument("request", nargs="?")
    e.add_argument("--ind", action="store_true", help="indeterminacy semantics (decision sets)")
    e.add_argument("--resolve", choices=STRATEGIES)
    e.add_argument("--assign", action="append", default=[], metavar="NAME=DECISION",
                   help="bind a (var NAME) sub-policy to a decision")
    e.set_defaults(func=cmd_eval)

    k = sub.add_parser("check", parents=[common], help="completeness analysis of an operator set")
    k.add_argument("ops")
    k.add_argument("--lattice")
    k.set_defaults(func=cmd_check)

    s = sub.add_parser("synth", parents=[common], help="shortest generator word for a permutation")
    s.add_argument("permutation")
    s.add_argument("--basis")
    s.add_argument("--lattice")
    s.set_defaults(func=cmd_synth)

    v = sub.add_parser("verify", parents=[common], help="check a policy against a table exhaustively")
    v.add_argument("policy")
    v.add_argument("table")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("serve", parents=[common], help="answer requests from standard input")
    r.add_argument("store", nargs="?")
    r.add_argument("--ind", action="store_true")
    r.add_argument("--resolve", choices=STRATEGIES)
    r.set_defaults(func=cmd_serve)
    return p


def _apply_config(args: argparse.Namespace) -> None:
    if not args.config:
        return
    try:
        cfg = json.loads(_read(args.config))
    except json.JSONDecodeError as exc:
        raise FormatError(f"config {args.config}: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(cfg, dict):
        raise FormatError(f"config {args.config}: expected a JSON object")
    unknown = set(cfg) - set(CONFIG_KEYS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, value in cfg.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, value)


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        _apply_config(args)
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"ptacl4: {exc}\n")
        return EXIT_USAGE
    except (ParseError, FormatError, UnknownOperator) as exc:
        sys.stderr.write(f"ptacl4: {exc}\n")
        return EXIT_FORMAT
    except ValueError as exc:
        sys.stderr.write(f"ptacl4: {exc}\n")
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
