"""Command-line driver: ``roql learn | checktest | adversary | enumerate | verify-canonical``.

Reports are TSV on stdout (or ``--output``), JSON with ``--json``.  Every
randomised run is seeded by ``--seed`` so identical arguments give
byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .basis import B2, basis_by_name
from .canonical import canonicalize_b2, canonicalize_tree, leaves, parse_tree, tree_table, violations
from .candidates import MAX_ENUM_ARITY, candidate_set
from .checking import CheckingTest, build_hypercube_set, classify_test, verify_checking_test
from .core import TruthTable, essential_mask
from .formula import FormulaSyntaxError, parse_formula, random_b2_formula, truth_table
from .learner import learn_monotone_si, learn_via_equivalence, reconstruct_b2
from .lowerbound import STRATEGIES, run_adversary_experiment
from .oracle import Kind, OracleSession, PromiseViolation

EXIT_PROMISE = 3
COUNTER_KEYS = [k.value for k in Kind]


def _emit(rows: list[dict], columns: list[str], args) -> None:
    if args.json:
        text = json.dumps(rows, indent=2) + "\n"
    else:
        lines = ["\t".join(columns)]
        for row in rows:
            lines.append("\t".join(_cell(row.get(c, "")) for c in columns))
        text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _cell(value) -> str:
    if isinstance(value, dict):
        return json.dumps(value, separators=(",", ":"))
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _hex(f: TruthTable) -> str:
    return format(f.to_int(), "x")


# -- learn ---------------------------------------------------------------------

MODES = {
    "reconstruct": {Kind.MEMBERSHIP},
    "si-only": {Kind.SI},
    "eq": {Kind.MEMBERSHIP, Kind.SI, Kind.EQUIVALENCE},
}


def _learn_targets(args, basis) -> Iterable[TruthTable]:
    n = args.n
    if args.samples:
        rng = np.random.default_rng(args.seed)
        seen = 0
        while seen < args.samples:
            f = truth_table(random_b2_formula(n, rng))
            seen += 1
            yield f
        return
    if n > MAX_ENUM_ARITY:
        raise SystemExit(f"exhaustive targets need n <= {MAX_ENUM_ARITY}; use --samples")
    cands = candidate_set(basis, n)
    full = (1 << n) - 1
    for i in range(len(cands)):
        f = cands.table(i)
        if args.mode == "reconstruct" and essential_mask(f) != full:
            continue
        if args.mode == "si-only" and f.bits.min() == f.bits.max():
            continue
        yield f


def _run_learner(args, basis, f: TruthTable, record: bool):
    allowed = MODES[args.mode] - ({Kind.EQUIVALENCE} if args.simulate else set())
    s = OracleSession(f, allowed=allowed, basis=basis, generalized_si=args.generalized_si, record=record)
    if args.mode == "reconstruct":
        tree = reconstruct_b2(s)
        got = tree_table(tree, f.n)
        text = str(tree)
    elif args.mode == "si-only":
        tree = learn_monotone_si(s)
        got = tree_table(tree, f.n)
        text = str(tree)
    else:
        formula = learn_via_equivalence(s, basis, simulate=args.simulate)
        got = truth_table(formula)
        text = str(formula)
    return s, got, text


def cmd_learn(args) -> int:
    basis = basis_by_name(args.basis)
    if args.target:
        f = truth_table(parse_formula(args.target, args.n))
        s = None
        try:
            s, got, text = _run_learner(args, basis, f, record=True)
        except PromiseViolation as exc:
            print(f"PROMISE-VIOLATION {exc}")
            return EXIT_PROMISE
        for line in s.log:
            print(line)
        print(f"RESULT {text}")
        return 0 if got == f else 1
    rows = []
    for f in _learn_targets(args, basis):
        try:
            s, got, text = _run_learner(args, basis, f, record=False)
            exact, counters = got == f, s.counters
        except PromiseViolation as exc:
            exact, text, counters = False, f"promise violation: {exc}", {}
        rows.append({"n": f.n, "target": _hex(f), "mode": args.mode, "exact": exact, "result": text, **counters})
    _emit(rows, ["n", "target", "mode", "exact", "result", *COUNTER_KEYS], args)
    return 0 if all(r["exact"] for r in rows) else 1


# -- checktest ---------------------------------------------------------------------


def cmd_checktest(args) -> int:
    basis = basis_by_name(args.basis)
    if args.verify:
        test = CheckingTest.loads(Path(args.verify).read_text())
        verdict = classify_test(test, basis)
        print(verdict.name.lower())
        return int(verdict)
    n, l = args.n, args.l
    rng = np.random.default_rng(args.seed) if args.random_bases else None
    cands = candidate_set(basis, n)
    bound = math.comb(n, l) * (1 << l)
    rows = []
    for i in range(len(cands)):
        f = cands.table(i)
        if essential_mask(f) != (1 << n) - 1:
            continue
        cubes = build_hypercube_set(f, l, rng)
        test = CheckingTest.from_hypercubes(f, basis.name, cubes)
        rows.append(
            {
                "n": n,
                "target": _hex(f),
                "cubes": len(cubes),
                "size": len(test),
                "bound": bound,
                "unique": verify_checking_test(test, basis, n, f),
            }
        )
    _emit(rows, ["n", "target", "cubes", "size", "bound", "unique"], args)
    ok = all(r["unique"] and r["size"] <= r["bound"] for r in rows)
    return 0 if ok else 1


# -- adversary -----------------------------------------------------------------------


def cmd_adversary(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    for _ in range(args.runs):
        result = run_adversary_experiment(args.strategy, args.n, args.budget, rng)
        rows.append(result.row())
    _emit(rows, ["n", "k", "C(n,k)", "strategy", "budget", "survivors", "queries_by_kind"], args)
    return 0


# -- enumerate -----------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    basis = basis_by_name(args.basis)
    rows = []
    for n in range(args.n_min if args.n_min is not None else args.n, args.n + 1):
        cands = candidate_set(basis, n)
        full = (1 << n) - 1
        essential = sum(1 for i in range(len(cands)) if essential_mask(cands.table(i)) == full)
        rows.append(
            {
                "basis": basis.name,
                "n": n,
                "count": len(cands),
                "all_essential": essential,
                "log2_count": f"{math.log2(len(cands)):.4f}" if len(cands) else "-inf",
            }
        )
    _emit(rows, ["basis", "n", "count", "all_essential", "log2_count"], args)
    return 0


# -- verify-canonical ---------------------------------------------------------------


def cmd_verify_canonical(args) -> int:
    text = args.text
    try:
        tree = parse_tree(text)
        problems = violations(tree)
        n = args.n if args.n is not None else max((lit.var for lit in leaves(tree)), default=-1) + 1
        canon = canonicalize_tree(tree)
        source = "tree"
    except ValueError:
        if args.n is None:
            raise SystemExit("--n is required for formula input")
        formula = parse_formula(text, args.n, B2)
        canon = canonicalize_b2(formula)
        problems = []
        n = args.n
        if tree_table(canon, n) != truth_table(formula):
            problems.append("canonical tree computes a different function")
        source = "formula"
        tree = canon
    if canonicalize_tree(canon) != canon:
        problems.append("normal form is not idempotent")
    if tree_table(canon, n) != tree_table(tree, n):
        problems.append("normal form changes the function")
    rows = [{"input": source, "canonical": str(canon), "ok": not problems, "problems": "; ".join(problems)}]
    _emit(rows, ["input", "canonical", "ok", "problems"], args)
    return 0 if not problems else 1


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roql", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("learn", parents=[common], help="run a learner against every target")
    p.add_argument("--basis", default="b2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=sorted(MODES), default="reconstruct")
    p.add_argument("--simulate", action="store_true", help="answer equivalence queries with membership and SI")
    p.add_argument("--generalized-si", action="store_true", help="SI on a total point returns f(p)")
    p.add_argument("--samples", type=int, default=0, help="random B2 targets instead of all of them")
    p.add_argument("--target", help="learn one formula and print the query trace")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("checktest", parents=[common], help="hypercube checking tests and their verification")
    p.add_argument("--basis", default="b2")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--l", type=int, default=2)
    p.add_argument("--random-bases", action="store_true", help="pick hypercube bases at random")
    p.add_argument("--verify", metavar="FILE", help="classify a test file: exit 0 unique, 1 ambiguous, 2 inconsistent")
    p.set_defaults(func=cmd_checktest)

    p = sub.add_parser("adversary", parents=[common], help="lower-bound experiment on the threshold family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="random")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("enumerate", parents=[common], help="count read-once functions over a basis")
    p.add_argument("--basis", default="b2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--n-min", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-canonical", parents=[common], help="check or compute a canonical tree")
    p.add_argument("text", help="prefix tree such as AND(x1,OR(x2,~x3)) or a formula")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_verify_canonical)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FormulaSyntaxError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
