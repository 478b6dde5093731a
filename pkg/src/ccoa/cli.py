"""Command-line surface: check, scenario, tables, oracle, bench.

Exit codes: 0 on success (for ``check``: fixpoint with no empty cell;
for ``oracle``: model found; for ``scenario``: scenario found), 1 for a
negative result (inconsistency, no model, exhaustion, failed table
verification), 2 for usage or parse errors, 4 when a search or
enumeration budget runs out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import format_cda, format_roa
from .csp import CcoaCsp, initial_ternary, tensor_index
from .geometry import EnumerationBudgetError, model_search
from .kb import KbParseError, build_csp, kb_from_csp, parse_kb, serialize_kb
from .generate import bench_run
from .propagation import pcs4c_plus
from .search import SearchBudgetExceeded, find_scenario
from .tables import (
    certify_tables,
    derive_tables,
    get_tables,
    load_published,
    tables_to_json,
    verify_against_published,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 4


def _load_kb(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise KbParseError(f"cannot read {path}: {err.strerror}", 0, 0) from None
    return parse_kb(text)


def _emit_json(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _matrix_doc(csp: CcoaCsp) -> dict:
    n = csp.n
    names = csp.variables
    cda = {
        names[i]: {names[j]: format_cda(csp.b.cells[i * n + j]) for j in range(n) if j != i}
        for i in range(n)
    }
    roa = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                cell = csp.t.cells[tensor_index(n, i, j, k)]
                if cell != initial_ternary(i, j, k):
                    roa[f"{names[i]},{names[j]},{names[k]}"] = format_roa(cell)
    return {"cda": cda, "roa": roa}


def _culprit_doc(csp: CcoaCsp, culprit) -> dict:
    return {
        "kind": culprit.kind,
        "channel": culprit.channel,
        "indices": list(culprit.indices),
        "variables": [csp.variables[i] for i in culprit.indices],
        "cell": (format_cda if culprit.kind == "pair" else format_roa)(culprit.cell),
        "refinement": (format_cda if culprit.kind == "pair" else format_roa)(culprit.operand),
    }


def _cmd_check(args) -> int:
    kb = _load_kb(args.file)
    csp, findings = build_csp(kb)
    trace = [] if (args.explain or args.json) else None
    outcome = pcs4c_plus(csp, get_tables(), trace=trace)
    oracle_doc = None
    if args.oracle_radius is not None:
        try:
            witness = model_search(csp, args.oracle_radius)
        except EnumerationBudgetError as err:
            witness = None
            oracle_doc = {"radius": args.oracle_radius, "error": str(err)}
        if oracle_doc is None:
            oracle_doc = {
                "radius": args.oracle_radius,
                "model_found": witness is not None,
                "witness": None
                if witness is None
                else {csp.variables[i]: list(p) for i, p in witness.items()},
            }
    if args.json:
        doc = {
            "command": "check",
            "file": args.file,
            "status": outcome.status.value,
            "culprit": None if outcome.culprit is None else _culprit_doc(csp, outcome.culprit),
            "findings": [f.render() for f in findings],
            **_matrix_doc(csp),
            "stats": outcome.stats.as_dict(),
        }
        if args.explain:
            doc["trace"] = [step.render(csp.variables) for step in (trace or [])]
        if oracle_doc is not None:
            doc["oracle"] = oracle_doc
        _emit_json(doc)
    else:
        for f in findings:
            print(f.render())
        if args.explain:
            for step in trace or []:
                print(step.render(csp.variables))
        if outcome.inconsistent:
            c = outcome.culprit
            names = ", ".join(csp.variables[i] for i in c.indices)
            fmt = format_cda if c.kind == "pair" else format_roa
            print(
                f"inconsistent: empty relation on {c.kind} ({names}) "
                f"via {c.channel}: {fmt(c.cell)} & {fmt(c.operand)} = {{}}"
            )
        else:
            print("fixpoint: no inconsistency detected")
        if oracle_doc is not None:
            if "error" in oracle_doc:
                print(f"oracle: {oracle_doc['error']}")
            elif oracle_doc["model_found"]:
                print(f"oracle: grid model found at radius {args.oracle_radius}")
            else:
                print(f"oracle: no model on grid radius {args.oracle_radius}")
    return EXIT_NEGATIVE if outcome.inconsistent else EXIT_OK


def _cmd_scenario(args) -> int:
    kb = _load_kb(args.file)
    csp, findings = build_csp(kb)
    for f in findings:
        print(f.render())
    try:
        result = find_scenario(csp, get_tables(), budget=args.budget)
    except SearchBudgetExceeded as err:
        print(str(err))
        return EXIT_BUDGET
    if args.json:
        doc = {
            "command": "scenario",
            "file": args.file,
            "outcome": result.outcome.value,
            "nodes_explored": result.nodes_explored,
            "scenario": None if result.scenario is None else serialize_kb(kb_from_csp(result.scenario)),
        }
        _emit_json(doc)
    elif result.found:
        print(f"scenario found ({result.nodes_explored} nodes explored):")
        print(serialize_kb(kb_from_csp(result.scenario)), end="")
    else:
        print(
            "no strongly-4-consistent scenario "
            f"(search exhausted, {result.nodes_explored} nodes explored)"
        )
    return EXIT_OK if result.found else EXIT_NEGATIVE


def _cmd_oracle(args) -> int:
    kb = _load_kb(args.file)
    csp, findings = build_csp(kb)
    for f in findings:
        print(f.render())
    try:
        witness = model_search(csp, args.grid_radius, budget=args.budget)
    except EnumerationBudgetError as err:
        print(str(err))
        return EXIT_BUDGET
    if args.json:
        _emit_json(
            {
                "command": "oracle",
                "file": args.file,
                "radius": args.grid_radius,
                "model_found": witness is not None,
                "witness": None
                if witness is None
                else {csp.variables[i]: list(p) for i, p in witness.items()},
            }
        )
    elif witness is None:
        print(
            f"no model on grid radius {args.grid_radius} "
            "(bounded search; this does not prove inconsistency)"
        )
    else:
        print(f"model found on grid radius {args.grid_radius}:")
        for i, p in sorted(witness.items()):
            print(f"  {csp.variables[i]} = ({p[0]}, {p[1]})")
    return EXIT_OK if witness is not None else EXIT_NEGATIVE


def _cmd_tables_verify(args) -> int:
    derived = derive_tables(args.grid_radius)
    report = verify_against_published(derived, load_published())
    for d in report.entries:
        where = f"{d.table}[{d.row}]" + (f"[{d.col}]" if d.col else "")
        kind = "cda" if d.table in ("composition", "left_inferred", "right_inferred") else "roa"
        fmt = format_cda if kind == "cda" else format_roa
        tag = "expected" if d.expected else "UNEXPECTED"
        note = f" ({d.note})" if d.note else ""
        print(f"{tag}: {where} published {fmt(d.transcribed)} derived {fmt(d.derived)}{note}")
    for key in report.missing_expected:
        print(f"MISSING: whitelisted discrepancy {key} did not appear")
    expected = len(report.entries) - len(report.unexpected)
    print(
        f"{report.cells_compared} cells compared: {expected} expected discrepancies, "
        f"{len(report.unexpected)} unexpected, {len(report.missing_expected)} missing"
    )
    problems = certify_tables(get_tables(), args.grid_radius)
    for p in problems:
        print(f"active tables: {p}")
    if report.passed and not problems:
        print("verification passed")
        return EXIT_OK
    return EXIT_NEGATIVE


def _cmd_tables_emit(args) -> int:
    if args.format != "json":
        print(f"unsupported format: {args.format}", file=sys.stderr)
        return EXIT_USAGE
    text = tables_to_json(get_tables())
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        sizes = [int(part) for part in args.sizes.split(",") if part]
    except ValueError:
        print(f"invalid sizes: {args.sizes}", file=sys.stderr)
        return EXIT_USAGE
    rows = bench_run(
        sizes,
        args.density,
        args.seed,
        instances=args.instances,
        satisfiable=args.satisfiable,
    )
    if args.json:
        _emit_json(
            {
                "command": "bench",
                "density": args.density,
                "seed": args.seed,
                "instances": args.instances,
                "satisfiable": args.satisfiable,
                "sizes": [row.as_dict() for row in rows],
            }
        )
    else:
        print(f"{'n':>5} {'median_s':>10} {'dequeues':>24} statuses")
        for row in rows:
            print(
                f"{row.n:>5} {row.median_seconds:>10.4f} "
                f"{','.join(str(d) for d in row.dequeues):>24} "
                f"{','.join(row.statuses)}"
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccoa",
        description=(
            "reasoning about combined cardinal-direction and "
            "relative-orientation constraints over 2D points"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="parse, build and propagate a knowledge base")
    check.add_argument("file")
    check.add_argument("--json", action="store_true")
    check.add_argument("--explain", action="store_true", help="print the refinement trace")
    check.add_argument(
        "--oracle-radius",
        type=int,
        default=None,
        metavar="R",
        help="also run the brute-force grid search at this radius",
    )
    check.set_defaults(func=_cmd_check)

    scenario = sub.add_parser("scenario", help="search for an atomic refinement")
    scenario.add_argument("file")
    scenario.add_argument("--budget", type=int, default=100_000)
    scenario.add_argument("--json", action="store_true")
    scenario.set_defaults(func=_cmd_scenario)

    oracle = sub.add_parser("oracle", help="brute-force grid model search")
    oracle.add_argument("file")
    oracle.add_argument("--grid-radius", type=int, default=3, metavar="R")
    oracle.add_argument("--budget", type=int, default=10**8)
    oracle.add_argument("--json", action="store_true")
    oracle.set_defaults(func=_cmd_oracle)

    tables = sub.add_parser("tables", help="derive, verify and export the algebra tables")
    tables_sub = tables.add_subparsers(dest="tables_command", required=True)
    verify = tables_sub.add_parser(
        "verify", help="re-derive and diff against the published transcription"
    )
    verify.add_argument("--grid-radius", type=int, default=4, metavar="R")
    verify.set_defaults(func=_cmd_tables_verify)
    emit = tables_sub.add_parser("emit", help="export the active tables")
    emit.add_argument("--format", default="json")
    emit.add_argument("-o", "--output", default=None)
    emit.set_defaults(func=_cmd_tables_emit)

    bench = sub.add_parser("bench", help="propagate random instances and time them")
    bench.add_argument("--sizes", required=True, help="comma-separated variable counts")
    bench.add_argument("--density", type=float, default=0.3)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--instances", type=int, default=5)
    bench.add_argument("--satisfiable", action="store_true", help="planted-model instances")
    bench.add_argument("--json", action="store_true")
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else 0
    try:
        return args.func(args)
    except KbParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, KeyError) as err:
        # Typically a bad CCOA_TABLES override or an unreadable output path.
        print(f"error: {err!r}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
