"""Phase-synchronous simulation of the parallel enumeration sort.

The machine runs a fixed seven-phase schedule regardless of n:

    clear, load,                      (initialization)
    left_exchange, left_reply,        (crosspoints whose greater class sits right)
    right_exchange, right_reply,      (crosspoints whose greater class sits left)
    rank                              (row sums)

Within each crosspoint the slot holding the greater class id ships its
value to the smaller-class neighbor; the smaller-class slot compares and
either claims the win itself (writes comparison_matrix[small][big], replies 0)
or replies 1 so the neighbor writes comparison_matrix[big][small].  Ties go to
the smaller class id.  All sends in a sub-phase read pre-phase state and all
writes commit at the sub-phase end, so the run is deterministic.

The final matrix satisfies bits[i][k] = 1 iff A[k] < A[i], or A[k] == A[i]
with k < i; row sums are therefore the ranks of a stable sort.
"""

import io
import json
from csv import writer as csv_writer
from dataclasses import dataclass
from typing import Sequence

from .array_builder import Layout

PHASE_NAMES = (
    "clear",
    "load",
    "left_exchange",
    "left_reply",
    "right_exchange",
    "right_reply",
    "rank",
)


@dataclass(frozen=True, slots=True)
class TraceEvent:
    action: str
    slot: int
    value: int | None = None
    row: int | None = None
    col: int | None = None


@dataclass(frozen=True, slots=True)
class TracePhase:
    name: str
    events: tuple[TraceEvent, ...]


@dataclass(frozen=True, slots=True)
class SortTrace:
    """Ordered record of everything every slot did, phase by phase."""

    n: int
    slot_count: int
    key_bits: int
    phases: tuple[TracePhase, ...]

    def events(self):
        for phase in self.phases:
            for ev in phase.events:
                yield phase.name, ev

    def to_jsonl(self) -> str:
        """One JSON object per event: phase, slot, action, payload."""
        lines = []
        for name, ev in self.events():
            doc = {"phase": name, "slot": ev.slot, "action": ev.action}
            if ev.value is not None:
                doc["value"] = ev.value
            if ev.row is not None:
                doc["row"] = ev.row
            if ev.col is not None:
                doc["col"] = ev.col
            lines.append(json.dumps(doc))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv_writer(out)
        w.writerow(["phase", "slot", "action", "value", "row", "col"])
        for name, ev in self.events():
            w.writerow([
                name,
                ev.slot,
                ev.action,
                "" if ev.value is None else ev.value,
                "" if ev.row is None else ev.row,
                "" if ev.col is None else ev.col,
            ])
        return out.getvalue()


@dataclass(frozen=True, slots=True)
class ComparisonMatrix:
    """n x n 0/1 matrix; bits[i][k] = 1 records that element k lost to element i."""

    bits: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.bits)

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.bits)

    def to_text(self) -> str:
        """Row-per-line 0/1 grid."""
        return "\n".join("".join(str(b) for b in row) for row in self.bits) + "\n"


@dataclass(frozen=True, slots=True)
class RankVector:
    ranks: tuple[int, ...]

    def order(self) -> tuple[int, ...]:
        """Element indices in ascending sorted order (inverse of `ranks`)."""
        out = [0] * len(self.ranks)
        for i, r in enumerate(self.ranks):
            out[r] = i
        return tuple(out)


@dataclass(frozen=True, slots=True)
class SimulatorState:
    """A loaded machine: every slot of class i holds values[i], matrix zeroed."""

    layout: Layout
    values: tuple[int, ...]
    t: tuple[tuple[int, ...], ...]
    phases: tuple[TracePhase, ...]


def _key_bits(values: Sequence[int]) -> int:
    return max((abs(v).bit_length() for v in values), default=0)


def _first_slot_per_class(layout: Layout) -> dict[int, int]:
    first: dict[int, int] = {}
    for s, c in enumerate(layout.slots):
        first.setdefault(c, s)
    return first


def load_phase(layout: Layout, values: Sequence[int]) -> SimulatorState:
    """Broadcast values[i] to every slot of class i and zero the matrix.

    Counts as two phases: one master clear per matrix row, then the
    bus broadcast that drops the same value on all replicates of a class.
    """
    if len(values) != layout.n:
        raise ValueError(f"got {len(values)} values for {layout.n} classes")
    vals = tuple(values)
    first = _first_slot_per_class(layout)
    clear_events = tuple(
        TraceEvent("clear_row", slot=first[c], row=c) for c in sorted(first)
    )
    load_events = tuple(
        TraceEvent("load", slot=s, row=c, value=vals[c])
        for s, c in enumerate(layout.slots)
    )
    phases = (TracePhase("clear", clear_events), TracePhase("load", load_events))
    zeros = tuple((0,) * layout.n for _ in range(layout.n))
    return SimulatorState(layout, vals, zeros, phases)


def compare_phase(state: SimulatorState) -> tuple[ComparisonMatrix, SortTrace]:
    """Run the four exchange/reply sub-phases over every crosspoint.

    Each crosspoint performs exactly one comparison, so a run makes
    slots - 1 comparisons total.  Redundant adjacencies (even n) write
    the same cell twice with the same value; the duplicate writes stay
    in the trace for conflict accounting.
    """
    layout = state.layout
    slots = layout.slots
    vals = state.values
    n = layout.n
    t = [list(row) for row in state.t]

    for s, (a, b) in enumerate(zip(slots, slots[1:])):
        if a == b:
            raise ValueError(f"adjacent slots {s},{s + 1} share class {a}; cannot compare")

    def commit(row: int, col: int) -> None:
        # Duplicate writes always agree (every writer stores a 1), and the
        # diagonal is never a comparison target.
        assert row != col
        t[row][col] = 1

    left_x: list[TraceEvent] = []
    left_r: list[TraceEvent] = []
    right_x: list[TraceEvent] = []
    right_r: list[TraceEvent] = []

    for s in range(len(slots) - 1):
        c_left, c_right = slots[s], slots[s + 1]
        if c_right > c_left:
            # Greater class on the right: value travels left, reply travels right.
            small, big = c_left, c_right
            left_x.append(TraceEvent("send_left", slot=s + 1, value=vals[big]))
            left_x.append(TraceEvent("recv_right", slot=s, value=vals[big]))
            if vals[big] < vals[small]:
                commit(small, big)
                left_r.append(TraceEvent("twrite", slot=s, row=small, col=big, value=1))
                left_r.append(TraceEvent("signal_send_right", slot=s, value=0))
                left_r.append(TraceEvent("signal_recv_left", slot=s + 1, value=0))
            else:
                left_r.append(TraceEvent("signal_send_right", slot=s, value=1))
                left_r.append(TraceEvent("signal_recv_left", slot=s + 1, value=1))
                commit(big, small)
                left_r.append(TraceEvent("twrite", slot=s + 1, row=big, col=small, value=1))
        else:
            # Greater class on the left: value travels right, reply travels left.
            small, big = c_right, c_left
            right_x.append(TraceEvent("send_right", slot=s, value=vals[big]))
            right_x.append(TraceEvent("recv_left", slot=s + 1, value=vals[big]))
            if vals[big] < vals[small]:
                commit(small, big)
                right_r.append(TraceEvent("twrite", slot=s + 1, row=small, col=big, value=1))
                right_r.append(TraceEvent("signal_send_left", slot=s + 1, value=0))
                right_r.append(TraceEvent("signal_recv_right", slot=s, value=0))
            else:
                right_r.append(TraceEvent("signal_send_left", slot=s + 1, value=1))
                right_r.append(TraceEvent("signal_recv_right", slot=s, value=1))
                commit(big, small)
                right_r.append(TraceEvent("twrite", slot=s, row=big, col=small, value=1))

    phases = state.phases + (
        TracePhase("left_exchange", tuple(left_x)),
        TracePhase("left_reply", tuple(left_r)),
        TracePhase("right_exchange", tuple(right_x)),
        TracePhase("right_reply", tuple(right_r)),
    )
    matrix = ComparisonMatrix(tuple(tuple(row) for row in t))
    trace = SortTrace(n, len(slots), _key_bits(vals), phases)
    return matrix, trace


def rank_phase(matrix: ComparisonMatrix) -> RankVector:
    """Rank of element i = sum of matrix row i."""
    return RankVector(matrix.row_sums())


def sort(layout: Layout, values: Sequence[int]) -> tuple[ComparisonMatrix, RankVector, SortTrace]:
    """Full run: load, compare, rank.  The layout must cover every class pair.

    Placing values[i] at output position ranks[i] yields a non-decreasing
    sequence; equal keys keep ascending index order.
    """
    state = load_phase(layout, values)
    matrix, trace = compare_phase(state)
    ranks = rank_phase(matrix)
    first = _first_slot_per_class(layout)
    rank_events = tuple(
        TraceEvent("rank", slot=first[i], row=i, value=ranks.ranks[i])
        for i in range(layout.n)
    )
    full = SortTrace(trace.n, trace.slot_count, trace.key_bits,
                     trace.phases + (TracePhase("rank", rank_events),))
    return matrix, ranks, full


def phase_count(trace: SortTrace) -> int:
    """Number of synchronous phases executed; the same constant for every n."""
    return len(trace.phases)


def detect_write_conflicts(trace: SortTrace) -> list[tuple[int, int, tuple[int, ...]]]:
    """Matrix cells written by more than one slot during the compare phases.

    Layouts that cover every pair exactly once never conflict; even-n
    layouts produce exactly n/2 - 1 doubled cells, each written with the
    same value from both sides (benign).
    """
    writers: dict[tuple[int, int], list[int]] = {}
    for _, ev in trace.events():
        if ev.action == "twrite":
            writers.setdefault((ev.row, ev.col), []).append(ev.slot)
    return [
        (row, col, tuple(slot_list))
        for (row, col), slot_list in sorted(writers.items())
        if len(slot_list) > 1
    ]
