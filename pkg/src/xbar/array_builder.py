"""Construction and validation of minimal 1D crosspoint-array layouts.

A layout is a left-to-right sequence of PE slots, each tagged with the
class id it hosts; a crosspoint sits between every two adjacent slots.
The builders place every unordered pair of class ids on at least one
crosspoint while using the provably minimal slot count:

* even n: n^2 / 2 slots, with exactly n/2 - 1 class pairs adjacent twice;
* odd n:  n(n-1)/2 + 1 slots, with every class pair adjacent exactly once.

The even builder lays the Q-partition groups down one after another,
each group's cycles back to back with the 2-element cycle last.  The odd
builder runs the even construction for n-1 classes, leaves one empty
slot between consecutive groups, drops class n-1 into every gap, and
finishes with class n-1 followed by class 0.
"""

import json
from collections import Counter
from dataclasses import dataclass, field

from .cyclic_perm import _partition_q

END_PLACEMENTS = ("interior", "same_class_both_ends", "distinct_class_at_end")


@dataclass(frozen=True, slots=True)
class Layout:
    """An assignment of class ids to the slots of a crosspoint array."""

    n: int
    slots: tuple[int, ...]
    provenance: tuple[str, ...]

    @property
    def crosspoint_count(self) -> int:
        return max(len(self.slots) - 1, 0)

    def adjacent_pairs(self) -> list[tuple[int, int]]:
        """Unordered class pairs (a, b), a < b, one entry per crosspoint."""
        return [
            (min(a, b), max(a, b))
            for a, b in zip(self.slots, self.slots[1:])
        ]

    def to_text(self) -> str:
        """One-line rendering, class ids joined by dashes."""
        return "-".join(str(c) for c in self.slots)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "slots": list(self.slots), "provenance": list(self.provenance)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Layout":
        return cls(int(doc["n"]), tuple(int(c) for c in doc["slots"]),
                   tuple(str(p) for p in doc.get("provenance", [])) or ("",) * len(doc["slots"]))


@dataclass(slots=True)
class ValidationReport:
    """Structural findings for a layout; empty `violations` means all good."""

    n: int
    pe_count: int
    expected_pe_count: int
    pair_coverage: dict[tuple[int, int], int]
    redundant_pairs: list[tuple[int, int]]
    replicate_counts: list[int]
    end_classes: tuple[int, int]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "pe_count": self.pe_count,
            "expected_pe_count": self.expected_pe_count,
            "pair_coverage": {f"{a}-{b}": c for (a, b), c in sorted(self.pair_coverage.items())},
            "redundant_pairs": [list(p) for p in self.redundant_pairs],
            "replicate_counts": list(self.replicate_counts),
            "end_classes": list(self.end_classes),
            "violations": list(self.violations),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def min_pe_count(n: int) -> int:
    """Fewest slots that can realize all C(n,2) adjacencies: n^2/2 for even n,
    n(n-1)/2 + 1 for odd n."""
    if n < 2:
        raise ValueError(f"need at least 2 classes, got n={n}")
    return n * n // 2 if n % 2 == 0 else n * (n - 1) // 2 + 1


def replicate_lower_bound(n: int, at_end: str = "interior") -> int:
    """Fewest slots a single class needs to reach all n-1 other classes.

    `at_end` selects the class's situation: "interior" (no end slot),
    "same_class_both_ends" (it owns both array ends), or
    "distinct_class_at_end" (it owns exactly one end).
    """
    if n < 2:
        raise ValueError(f"need at least 2 classes, got n={n}")
    if at_end == "interior":
        return n // 2  # ceil((n-1)/2)
    if at_end == "same_class_both_ends":
        return (n + 2) // 2  # ceil((n+1)/2)
    if at_end == "distinct_class_at_end":
        return (n + 1) // 2  # ceil(n/2)
    raise ValueError(f"at_end must be one of {END_PLACEMENTS}, got {at_end!r}")


def _q_blocks(m: int) -> tuple[list[list[int]], list[list[str]]]:
    """Per-group slot runs for an even frame of m classes, plus provenance tags."""
    part = _partition_q(m)
    blocks: list[list[int]] = []
    tags: list[list[str]] = []
    for qi, group in enumerate(part.sets):
        block: list[int] = []
        prov: list[str] = []
        for ci, cyc in enumerate(group):
            block.extend(cyc.elements)
            prov.extend(f"Q{qi}.c{ci}.e{ei}" for ei in range(len(cyc.elements)))
        blocks.append(block)
        tags.append(prov)
    return blocks, tags


def build_even(n: int) -> Layout:
    """Minimal layout for an even class count n >= 4 (n^2/2 slots)."""
    if n % 2:
        raise ValueError(f"build_even needs even n, got {n}")
    if n < 4:
        raise ValueError(f"build_even needs n >= 4, got {n} (n=2 is the trivial pair)")
    blocks, tags = _q_blocks(n)
    slots = [c for block in blocks for c in block]
    prov = [t for block in tags for t in block]
    return Layout(n, tuple(slots), tuple(prov))


def build_odd(n: int) -> Layout:
    """Minimal layout for an odd class count n >= 3 (n(n-1)/2 + 1 slots).

    Every class pair ends up adjacent exactly once: the even frame for
    n-1 classes covers pairs among 0..n-2, the gap fills pair class n-1
    with classes 1..n-3, and the two tail slots add (n-1, n-2) and
    (n-1, 0).
    """
    if n % 2 == 0:
        raise ValueError(f"build_odd needs odd n, got {n}")
    if n < 3:
        raise ValueError(f"build_odd needs n >= 3, got {n}")
    blocks, tags = _q_blocks(n - 1)
    slots: list[int] = []
    prov: list[str] = []
    for block, block_tags in zip(blocks, tags):
        if slots:
            slots.append(n - 1)
            prov.append("odd-fill")
        slots.extend(block)
        prov.extend(block_tags)
    slots += [n - 1, 0]
    prov += ["odd-tail", "odd-tail"]
    return Layout(n, tuple(slots), tuple(prov))


def build(n: int) -> Layout:
    """Minimal layout for any n >= 2; n == 2 is the trivial two-slot pair."""
    if n < 2:
        raise ValueError(f"need at least 2 classes, got n={n}")
    if n == 2:
        return Layout(2, (0, 1), ("trivial-pair", "trivial-pair"))
    return build_odd(n) if n % 2 else build_even(n)


def neighbors(layout: Layout, slot_index: int) -> tuple[int | None, int | None]:
    """Class ids of the physically adjacent slots; None past either array end."""
    if not 0 <= slot_index < len(layout.slots):
        raise IndexError(f"slot index {slot_index} out of range 0..{len(layout.slots) - 1}")
    left = layout.slots[slot_index - 1] if slot_index > 0 else None
    right = layout.slots[slot_index + 1] if slot_index < len(layout.slots) - 1 else None
    return left, right


def validate(layout: Layout) -> ValidationReport:
    """Check every structural claim for a layout.

    A bad layout produces findings in `violations`, never an exception:
    slot count must equal min_pe_count(n), no crosspoint may join two
    slots of the same class, every class pair must be covered (exactly
    once for odd n; with exactly n/2 - 1 doubled pairs for even n), and
    per-class slot counts must meet their end-placement lower bounds.
    """
    n = layout.n
    slots = layout.slots
    violations: list[str] = []

    if n < 2:
        violations.append(f"class count n={n} below 2")
    if not slots:
        violations.append("layout has no slots")
        return ValidationReport(n, 0, 0, {}, [], [0] * max(n, 0), (-1, -1), violations)

    out_of_range = sorted({c for c in slots if not 0 <= c < n})
    if out_of_range:
        violations.append(f"slot class ids out of range 0..{n - 1}: {out_of_range}")

    for s, (a, b) in enumerate(zip(slots, slots[1:])):
        if a == b:
            violations.append(f"adjacent same-class slots at positions {s},{s + 1} (class {a})")

    expected = min_pe_count(n) if n >= 2 else 0
    if len(slots) != expected:
        violations.append(f"pe count {len(slots)} != minimal {expected}")

    coverage = Counter(
        (min(a, b), max(a, b)) for a, b in zip(slots, slots[1:]) if a != b
    )
    redundant = sorted(pair for pair, cnt in coverage.items() if cnt >= 2)

    all_pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    missing = [p for p in all_pairs if coverage.get(p, 0) == 0]
    if missing:
        violations.append(f"{len(missing)} class pairs never adjacent, e.g. {missing[:5]}")
    if n % 2:
        doubled = [p for p in all_pairs if coverage.get(p, 0) > 1]
        if doubled:
            violations.append(f"odd n: pairs adjacent more than once: {doubled[:5]}")
    else:
        over = [p for p in all_pairs if coverage.get(p, 0) > 2]
        if over:
            violations.append(f"pairs adjacent more than twice: {over[:5]}")
        if not missing and len(redundant) != n // 2 - 1:
            violations.append(
                f"even n: {len(redundant)} doubled pairs, expected exactly {n // 2 - 1}"
            )

    counts = Counter(slots)
    replicate_counts = [counts.get(c, 0) for c in range(max(n, 0))]
    left_end, right_end = slots[0], slots[-1]
    if n >= 2:
        for c in range(n):
            if left_end == right_end == c:
                needed = replicate_lower_bound(n, "same_class_both_ends")
            elif c in (left_end, right_end):
                needed = replicate_lower_bound(n, "distinct_class_at_end")
            else:
                needed = replicate_lower_bound(n, "interior")
            if replicate_counts[c] < needed:
                violations.append(
                    f"class {c} has {replicate_counts[c]} slots, below its lower bound {needed}"
                )

    return ValidationReport(
        n=n,
        pe_count=len(slots),
        expected_pe_count=expected,
        pair_coverage=dict(coverage),
        redundant_pairs=redundant,
        replicate_counts=replicate_counts,
        end_classes=(left_end, right_end),
        violations=violations,
    )
