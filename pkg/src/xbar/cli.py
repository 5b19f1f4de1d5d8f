"""Command-line front end: build, validate, sort, query, inspect.

Thin adapters around the library; no logic beyond parsing, dispatch and
formatting.  Exit codes: 0 success, 1 validation violations, 2 usage or
data errors.  Input arrays come inline (comma-separated), from a file
(one value per line), or, when omitted, from a seeded generator
(``--seed`` or the ``XBAR_SEED`` environment variable).
"""

import argparse
import json
import os
import random
import sys

from . import array_builder, pe_simulator, query_circuits
from .cyclic_perm import cycle_decomposition, partition_Q, power
from .netlist import depth


class DataError(Exception):
    """Bad input data (as opposed to bad flags)."""


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    try:
        return int(os.environ.get("XBAR_SEED", "0"))
    except ValueError as exc:
        raise DataError(f"XBAR_SEED must be an integer: {exc}") from None


def _parse_values(raw: str) -> list[int]:
    text = raw.strip()
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        pass
    if not os.path.exists(text):
        raise DataError(f"--input {raw!r} is neither a comma-separated int list nor a file")
    values = []
    with open(text) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(int(line))
            except ValueError:
                raise DataError(f"{text}:{lineno}: not an integer: {line!r}") from None
    return values


def _input_values(args, n: int) -> list[int]:
    if args.input is not None:
        values = _parse_values(args.input)
        if len(values) != n:
            raise DataError(f"--input supplies {len(values)} values but --n is {n}")
        return values
    rng = random.Random(_resolve_seed(args))
    return [rng.randrange(0, 100) for _ in range(n)]


def _fanin(text: str):
    if text == "unbounded":
        return "unbounded"
    try:
        b = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("fanin must be 'unbounded' or an integer >= 2")
    if b < 2:
        raise argparse.ArgumentTypeError("finite fanin must be >= 2")
    return b


def _emit_json(doc) -> None:
    print(json.dumps(doc))


def _cmd_build(args) -> int:
    layout = array_builder.build(args.n)
    if args.format == "json":
        _emit_json(layout.to_json_dict())
    elif args.format == "csv":
        print("slot,class,provenance")
        for s, (c, p) in enumerate(zip(layout.slots, layout.provenance)):
            print(f"{s},{c},{p}")
    else:
        print(layout.to_text())
        print(f"{len(layout.slots)} PEs, {layout.crosspoint_count} crosspoints")
    return 0


def _cmd_validate(args) -> int:
    if args.layout is not None:
        try:
            with open(args.layout) as fh:
                layout = array_builder.Layout.from_json_dict(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise DataError(f"cannot read layout from {args.layout}: {exc}") from None
    else:
        layout = array_builder.build(args.n)
    report = array_builder.validate(layout)
    if args.format == "json":
        _emit_json(report.to_json_dict())
    elif args.format == "csv":
        print("pair,count")
        for (a, b), count in sorted(report.pair_coverage.items()):
            print(f"{a}-{b},{count}")
    else:
        print(f"{report.pe_count} PEs (minimal: {report.expected_pe_count})")
        print(f"ends: {report.end_classes[0]} ... {report.end_classes[1]}")
        dup = " ".join(f"{a}-{b}" for a, b in report.redundant_pairs) or "none"
        print(f"doubled pairs: {dup}")
        if report.ok:
            print("ok")
        else:
            for v in report.violations:
                print(f"violation: {v}")
    return 0 if report.ok else 1


def _run_sort(args):
    layout = array_builder.build(args.n)
    values = _input_values(args, args.n)
    matrix, ranks, trace = pe_simulator.sort(layout, values)
    return layout, values, matrix, ranks, trace


def _cmd_sort(args) -> int:
    layout, values, matrix, ranks, trace = _run_sort(args)
    conflicts = pe_simulator.detect_write_conflicts(trace)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.to_jsonl())
    if args.format == "json":
        _emit_json({
            "n": layout.n,
            "slots": list(layout.slots),
            "input": list(values),
            "t": [list(row) for row in matrix.bits],
            "ranks": list(ranks.ranks),
            "order": list(ranks.order()),
            "phase_count": pe_simulator.phase_count(trace),
            "conflicts": [
                {"row": row, "col": col, "slots": list(slots)}
                for row, col, slots in conflicts
            ],
        })
    elif args.format == "csv":
        sys.stdout.write(trace.to_csv())
    else:
        sys.stdout.write(matrix.to_text())
        print("R: " + " ".join(str(r) for r in ranks.ranks))
        print("sorted: " + " ".join(str(values[i]) for i in ranks.order()))
        print(f"phases: {pe_simulator.phase_count(trace)}")
        if conflicts:
            for row, col, slots in conflicts:
                print(f"conflict: T[{row}][{col}] slots {','.join(map(str, slots))}")
        else:
            print("conflicts: none")
    return 0


def _emit_index(args, result) -> int:
    if args.format == "json":
        _emit_json({"index": result.index, "exact": result.exact})
    else:
        print(f"index {result.index if result.index is not None else 'none'}")
    return 0


def _cmd_min(args) -> int:
    _, _, matrix, _, _ = _run_sort(args)
    idx = query_circuits.min_index(matrix)
    return _emit_index(args, query_circuits.RankQueryResult(idx, True))


def _cmd_max(args) -> int:
    _, _, matrix, _, _ = _run_sort(args)
    idx = query_circuits.max_index(matrix)
    return _emit_index(args, query_circuits.RankQueryResult(idx, True))


def _cmd_rank(args) -> int:
    _, _, matrix, _, _ = _run_sort(args)
    if not 0 <= args.r <= args.n - 1:
        raise DataError(f"--r must lie in 0..{args.n - 1}")
    return _emit_index(args, query_circuits.select_rank(matrix, args.r))


def _cmd_search(args) -> int:
    layout = array_builder.build(args.n)
    values = _input_values(args, args.n)
    return _emit_index(args, query_circuits.search(layout, values, args.key))


_CIRCUITS = {
    "min": query_circuits.build_min_circuit,
    "max": query_circuits.build_max_circuit,
    "threshold-rank": query_circuits.build_rank_circuit_threshold,
    "ones-counter": query_circuits.build_ones_counter,
    "adder-tree": query_circuits.build_popcount_tree,
    "encoder": query_circuits.build_encoder,
    "priority-encoder": query_circuits.build_priority_encoder,
}


def _cmd_depth(args) -> int:
    net = _CIRCUITS[args.circuit](args.n)
    report = depth(net, args.fanin)
    if args.format == "json":
        _emit_json(report.to_json_dict())
    else:
        extra = (
            f", max threshold fan-in {report.max_threshold_fanin}"
            if report.max_threshold_fanin is not None
            else ""
        )
        print(f"depth {report.depth} (fanin {report.fanin_limit}, {report.gate_count} gates{extra})")
    return 0


def _cmd_perm(args) -> int:
    if args.j is not None:
        cycles = cycle_decomposition(power(args.n, args.j))
        if args.format == "json":
            _emit_json({"n": args.n, "j": args.j, "cycles": [list(c.elements) for c in cycles]})
        else:
            print("".join("(" + ",".join(map(str, c.elements)) + ")" for c in cycles))
        return 0
    if args.n % 2:
        raise DataError("the cycle partition needs even --n; pass --j to inspect one power")
    part = partition_Q(args.n)
    if args.format == "json":
        _emit_json({
            "n": args.n,
            "sets": [[list(c.elements) for c in group] for group in part.sets],
        })
    else:
        for i, group in enumerate(part.sets):
            print(f"Q{i}: " + " ".join("(" + ",".join(map(str, c.elements)) + ")" for c in group))
    return 0


def _add_common(sub, *, n=True, values=False, formats=("text", "json", "csv")):
    if n:
        sub.add_argument("--n", type=int, required=True, help="number of classes")
    if values:
        sub.add_argument("--input", help="comma-separated values or a file, one value per line")
        sub.add_argument("--seed", type=int, default=None,
                         help="seed for generated input (default: $XBAR_SEED or 0)")
    sub.add_argument("--format", choices=formats, default="text")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xbar",
        description="1D crosspoint arrays: build layouts, simulate sorts, query circuits.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("build", help="construct the minimal layout for n classes")
    _add_common(p)
    p.set_defaults(func=_cmd_build)

    p = subs.add_parser("validate", help="check a layout's structural claims")
    p.add_argument("--n", type=int, help="build and validate the layout for n classes")
    p.add_argument("--layout", help="validate a layout JSON file instead")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=_cmd_validate)

    p = subs.add_parser("sort", help="run the phase-level enumeration sort")
    _add_common(p, values=True)
    p.add_argument("--trace", help="also dump the full trace as JSON lines to this path")
    p.set_defaults(func=_cmd_sort)

    for name, func in (("min", _cmd_min), ("max", _cmd_max)):
        p = subs.add_parser(name, help=f"index of the {name}imum via the gate circuit")
        _add_common(p, values=True, formats=("text", "json"))
        p.set_defaults(func=func)

    p = subs.add_parser("rank", help="index of the element with a given rank")
    _add_common(p, values=True, formats=("text", "json"))
    p.add_argument("--r", type=int, required=True, help="target rank (0 = smallest)")
    p.set_defaults(func=_cmd_rank)

    p = subs.add_parser("search", help="smallest class index holding the key")
    _add_common(p, values=True, formats=("text", "json"))
    p.add_argument("--key", type=int, required=True)
    p.set_defaults(func=_cmd_search)

    p = subs.add_parser("depth", help="critical-path depth of a query circuit")
    p.add_argument("--circuit", choices=sorted(_CIRCUITS), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fanin", type=_fanin, default="unbounded",
                   help="'unbounded' or an integer fan-in limit >= 2")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_depth)

    p = subs.add_parser("perm", help="inspect shift powers and their cycle partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, help="exponent; omit to list the Q partition")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_perm)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate" and args.layout is None and args.n is None:
        parser.error("validate needs --n or --layout")
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
