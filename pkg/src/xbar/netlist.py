"""Combinational gate netlists: construction, evaluation, depth accounting.

A netlist is an ordered list of gates over named wires.  Gate kinds are
AND, OR, NOR, NOT, THRESHOLD(m), HALF_ADD and FULL_ADD; a gate's id
doubles as its output wire name.  HALF_ADD is the two-input sum cell
(xor) and FULL_ADD the three-input sum cell (odd parity); carries are
built from AND/OR explicitly.  THRESHOLD(m) outputs 1 when at least m
of its inputs are 1 and is charged unit delay regardless of fan-in.

`evaluate` walks the gate list once in construction order (netlists are
built topologically).  Wire values may be plain 0/1 ints or numpy-style
integer arrays; all gate functions apply elementwise, so a whole batch
of input vectors can be evaluated in one pass.

`depth` measures the critical path in gate levels.  Under a finite
fan-in limit b, every AND/OR/NOR gate wider than b is first legalized
into a balanced tree of b-input gates (a NOR becomes an OR tree with a
NOR root), FULL_ADD decomposes into HALF_ADD pairs, and THRESHOLD gates
are exempt but their widths are reported alongside the depth so the
unit-delay assumption stays visible.

Structural text format: one gate per line, ``gateId KIND[param] <- wire,wire,...``.
"""

import json
from dataclasses import dataclass, field

GATE_KINDS = ("AND", "OR", "NOR", "NOT", "THRESHOLD", "HALF_ADD", "FULL_ADD")

Wire = str


@dataclass(frozen=True, slots=True)
class Gate:
    gid: str
    kind: str
    inputs: tuple[str, ...]
    param: int | None = None


@dataclass(slots=True)
class Netlist:
    """Primary inputs, gates in topological order, and named outputs.

    An output maps a name to either a wire or a constant 0/1 that the
    builder folded away.
    """

    name: str
    inputs: list[str] = field(default_factory=list)
    gates: list[Gate] = field(default_factory=list)
    outputs: dict[str, str | int] = field(default_factory=dict)

    def gate_count(self) -> int:
        return len(self.gates)

    def to_text(self) -> str:
        lines = [f"inputs {','.join(self.inputs)}"]
        lines += [
            f"output {name} = {wire}" for name, wire in self.outputs.items()
        ]
        for g in self.gates:
            kind = g.kind if g.param is None else f"{g.kind}[{g.param}]"
            lines.append(f"{g.gid} {kind} <- {','.join(g.inputs)}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class DepthReport:
    """Critical-path depth of a netlist under a fan-in model."""

    fanin_limit: str | int
    depth: int
    gate_count: int
    max_threshold_fanin: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "fanin_limit": self.fanin_limit,
            "depth": self.depth,
            "gate_count": self.gate_count,
            "max_threshold_fanin": self.max_threshold_fanin,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


class NetBuilder:
    """Incrementally builds a netlist, folding constants as it goes.

    Gate helpers accept wires or literal 0/1 ints.  Degenerate gates
    never materialize: a constant input is absorbed, a one-input AND/OR
    collapses to its wire, a one-input NOR becomes a NOT.
    """

    def __init__(self, name: str = ""):
        self.net = Netlist(name)
        self._next = 0

    def input(self, name: str) -> Wire:
        self.net.inputs.append(name)
        return name

    def output(self, name: str, wire: "Wire | int") -> None:
        self.net.outputs[name] = wire

    def _emit(self, kind: str, inputs: tuple[Wire, ...], param: int | None = None) -> Wire:
        gid = f"g{self._next}"
        self._next += 1
        self.net.gates.append(Gate(gid, kind, inputs, param))
        return gid

    def and_(self, *ins: "Wire | int") -> "Wire | int":
        wires = []
        for x in ins:
            if isinstance(x, int):
                if x == 0:
                    return 0
                continue  # drop constant 1
            wires.append(x)
        if not wires:
            return 1
        if len(wires) == 1:
            return wires[0]
        return self._emit("AND", tuple(wires))

    def or_(self, *ins: "Wire | int") -> "Wire | int":
        wires = []
        for x in ins:
            if isinstance(x, int):
                if x == 1:
                    return 1
                continue  # drop constant 0
            wires.append(x)
        if not wires:
            return 0
        if len(wires) == 1:
            return wires[0]
        return self._emit("OR", tuple(wires))

    def nor_(self, *ins: "Wire | int") -> "Wire | int":
        wires = []
        for x in ins:
            if isinstance(x, int):
                if x == 1:
                    return 0
                continue
            wires.append(x)
        if not wires:
            return 1
        if len(wires) == 1:
            return self._emit("NOT", (wires[0],))
        return self._emit("NOR", tuple(wires))

    def not_(self, x: "Wire | int") -> "Wire | int":
        if isinstance(x, int):
            return 1 - x
        return self._emit("NOT", (x,))

    def xor2(self, a: "Wire | int", b: "Wire | int") -> "Wire | int":
        if isinstance(a, int) and isinstance(b, int):
            return a ^ b
        if isinstance(a, int):
            a, b = b, a
        if isinstance(b, int):
            return a if b == 0 else self.not_(a)
        return self._emit("HALF_ADD", (a, b))

    def parity3(self, a: "Wire | int", b: "Wire | int", c: "Wire | int") -> "Wire | int":
        consts = [x for x in (a, b, c) if isinstance(x, int)]
        wires = [x for x in (a, b, c) if not isinstance(x, int)]
        if len(wires) < 3:
            acc: "Wire | int" = sum(consts) & 1
            for w in wires:
                acc = self.xor2(acc, w)
            return acc
        return self._emit("FULL_ADD", (a, b, c))

    def threshold(self, ins: "list[Wire | int]", m: int) -> "Wire | int":
        wires = []
        for x in ins:
            if isinstance(x, int):
                m -= x
                continue
            wires.append(x)
        if m <= 0:
            return 1
        if m > len(wires):
            return 0
        if len(wires) == 1:
            return wires[0]  # m == 1 on a single wire
        return self._emit("THRESHOLD", tuple(wires), param=m)

    def build(self) -> Netlist:
        return self.net


def evaluate(net: Netlist, assignments: dict) -> dict:
    """Evaluate the netlist; returns {output name: value}.

    `assignments` must bind every primary input.  Values may be 0/1 ints
    or numpy-style integer arrays of a common shape.
    """
    values = {}
    for name in net.inputs:
        if name not in assignments:
            raise KeyError(f"missing value for input wire {name!r}")
        values[name] = assignments[name]
    for g in net.gates:
        ins = [values[w] for w in g.inputs]
        if g.kind == "AND":
            v = ins[0]
            for x in ins[1:]:
                v = v & x
        elif g.kind == "OR":
            v = ins[0]
            for x in ins[1:]:
                v = v | x
        elif g.kind == "NOR":
            v = ins[0]
            for x in ins[1:]:
                v = v | x
            v = v ^ 1
        elif g.kind == "NOT":
            v = ins[0] ^ 1
        elif g.kind == "THRESHOLD":
            total = ins[0]
            for x in ins[1:]:
                total = total + x
            v = (total >= g.param) * 1
        elif g.kind == "HALF_ADD":
            v = ins[0] ^ ins[1]
        elif g.kind == "FULL_ADD":
            v = ins[0] ^ ins[1] ^ ins[2]
        else:
            raise ValueError(f"unknown gate kind {g.kind}")
        values[g.gid] = v
    return {
        name: (wire if isinstance(wire, int) else values[wire])
        for name, wire in net.outputs.items()
    }


def _legal_tree(emit, kind: str, wires: list[Wire], b: int) -> Wire:
    """Balanced b-ary tree over `wires`; depth is exactly ceil(log_b(fan-in))."""
    inner, root = {"NOR": ("OR", "NOR")}.get(kind, (kind, kind))
    while len(wires) > b:
        nxt = []
        for i in range(0, len(wires), b):
            chunk = wires[i:i + b]
            nxt.append(chunk[0] if len(chunk) == 1 else emit(inner, tuple(chunk)))
        wires = nxt
    return emit(root, tuple(wires))


def legalize(net: Netlist, b: int) -> Netlist:
    """Rewrite gates wider than b into balanced trees of b-input gates.

    THRESHOLD gates pass through untouched; NOT and narrow gates are
    copied.  The result computes the same outputs (checked by tests).
    """
    if b < 2:
        raise ValueError(f"fan-in limit must be >= 2, got {b}")
    out = Netlist(net.name, inputs=list(net.inputs))
    counter = [0]

    def emit(kind: str, inputs: tuple[Wire, ...], param: int | None = None) -> Wire:
        gid = f"L{counter[0]}"
        counter[0] += 1
        out.gates.append(Gate(gid, kind, inputs, param))
        return gid

    wire_map: dict[Wire, Wire] = {w: w for w in net.inputs}
    for g in net.gates:
        ins = [wire_map[w] for w in g.inputs]
        if g.kind in ("AND", "OR", "NOR") and len(ins) > b:
            new = _legal_tree(emit, g.kind, ins, b)
        elif g.kind == "FULL_ADD" and b < 3:
            new = emit("HALF_ADD", (emit("HALF_ADD", (ins[0], ins[1])), ins[2]))
        else:
            new = emit(g.kind, tuple(ins), g.param)
        wire_map[g.gid] = new
    out.outputs = {
        name: (wire if isinstance(wire, int) else wire_map[wire])
        for name, wire in net.outputs.items()
    }
    return out


def wire_levels(net: Netlist) -> dict[Wire, int]:
    levels = {w: 0 for w in net.inputs}
    for g in net.gates:
        levels[g.gid] = 1 + max((levels[w] for w in g.inputs), default=0)
    return levels


def depth(net: Netlist, fanin_limit: "str | int" = "unbounded") -> DepthReport:
    """Critical-path depth in gate levels under the chosen fan-in model.

    "unbounded" measures the netlist as built; an integer b measures the
    legalized netlist.  An output aliased straight to an input has depth 0.
    """
    if fanin_limit == "unbounded":
        target = net
    else:
        target = legalize(net, int(fanin_limit))
    levels = wire_levels(target)
    d = max(
        (0 if isinstance(w, int) else levels[w] for w in target.outputs.values()),
        default=0,
    )
    thr = [len(g.inputs) for g in target.gates if g.kind == "THRESHOLD"]
    return DepthReport(
        fanin_limit=fanin_limit,
        depth=d,
        gate_count=target.gate_count(),
        max_threshold_fanin=max(thr) if thr else None,
    )
